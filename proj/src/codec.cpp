// Copyright (c) the synrdp project authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "synrdp/codec.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "synrdp/error.hpp"
#include "synrdp/measures.hpp"
#include "synrdp/rng.hpp"

namespace synrdp {

namespace {

constexpr char kMagic[4] = {'S', 'R', 'D', 'P'};

// Independent generator streams derived from the model seed.
constexpr std::uint64_t kSourceStream = 0;
constexpr std::uint64_t kDecoderStream = 1;

Xoshiro256 stream_rng(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t sm = stream;
  return Xoshiro256(seed ^ splitmix64(sm));
}

std::vector<double> cdf_of(std::span<const double> probs) {
  std::vector<double> cdf(probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    cdf[i] = acc;
  }
  cdf.back() = 1.0;  // guard against accumulated rounding
  return cdf;
}

std::size_t draw(const std::vector<double>& cdf, double u) {
  return static_cast<std::size_t>(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) {
    out.push_back(static_cast<std::uint8_t>(v >> shift));
  }
}

}  // namespace

CodecModel::CodecModel(FiniteDistribution source, SynsetPartition partition, std::uint64_t seed,
                       SamplerMode mode, std::optional<Matrix> detail_sampler)
    : source_(std::move(source)), partition_(std::move(partition)), seed_(seed), mode_(mode) {
  if (partition_.alphabet_size() != source_.size()) {
    throw ValidationError("codec model: partition covers " +
                          std::to_string(partition_.alphabet_size()) + " symbols, source has " +
                          std::to_string(source_.size()));
  }
  if (detail_sampler) {
    detail_sampler_ = std::move(*detail_sampler);
    if (detail_sampler_.size() != partition_.block_count()) {
      throw ValidationError("codec model: detail sampler needs one row per block");
    }
    validate_stochastic_rows(detail_sampler_, source_.size(), "detail_sampler");
  } else {
    detail_sampler_.assign(partition_.block_count(), std::vector<double>(source_.size(), 0.0));
    for (std::size_t b = 0; b < partition_.block_count(); ++b) {
      const auto& block = partition_.block(b);
      double mass = 0.0;
      for (std::size_t x : block) mass += source_[x];
      if (mass > 0.0) {
        for (std::size_t x : block) detail_sampler_[b][x] = source_[x] / mass;
      } else {
        for (std::size_t x : block) detail_sampler_[b][x] = 1.0 / static_cast<double>(block.size());
      }
    }
  }
  if (mode_ == SamplerMode::kStrict) {
    for (std::size_t b = 0; b < partition_.block_count(); ++b) {
      for (std::size_t x = 0; x < source_.size(); ++x) {
        if (detail_sampler_[b][x] > 0.0 && partition_.block_of(x) != b) {
          throw ValidationError("codec model: strict mode requires sampler support inside block " +
                                std::to_string(b) + ", found mass at symbol " + std::to_string(x));
        }
      }
    }
  }
}

FiniteDistribution CodecModel::reconstruction_pushforward() const {
  std::vector<double> out(source_.size(), 0.0);
  for (std::size_t b = 0; b < partition_.block_count(); ++b) {
    double block_mass = 0.0;
    for (std::size_t x : partition_.block(b)) block_mass += source_[x];
    for (std::size_t x = 0; x < source_.size(); ++x) {
      out[x] += block_mass * detail_sampler_[b][x];
    }
  }
  return FiniteDistribution(std::move(out), true);
}

JointDistribution CodecModel::codec_joint() const {
  Matrix mass(source_.size(), std::vector<double>(source_.size(), 0.0));
  for (std::size_t x = 0; x < source_.size(); ++x) {
    const auto& row = detail_sampler_[partition_.block_of(x)];
    for (std::size_t xhat = 0; xhat < source_.size(); ++xhat) {
      mass[x][xhat] = source_[x] * row[xhat];
    }
  }
  return JointDistribution(std::move(mass), true);
}

std::vector<std::size_t> sample_source(const CodecModel& model, std::size_t n) {
  Xoshiro256 rng = stream_rng(model.seed(), kSourceStream);
  const std::vector<double> cdf = cdf_of(model.source().probs());
  std::vector<std::size_t> symbols(n);
  for (std::size_t i = 0; i < n; ++i) symbols[i] = draw(cdf, rng.next_double());
  return symbols;
}

std::uint64_t BitStream::header_bits() const {
  return 8 * (4 + 1 + 2 + 8 + 8 + 2 + 2 * block_freqs.size());
}

std::vector<std::uint8_t> BitStream::serialize() const {
  std::vector<std::uint8_t> out;
  out.reserve(header_bits() / 8 + payload.size());
  out.insert(out.end(), kMagic, kMagic + 4);
  out.push_back(kVersion);
  put_u16(out, alphabet_size);
  put_u64(out, partition_hash);
  put_u64(out, symbol_count);
  put_u16(out, static_cast<std::uint16_t>(block_freqs.size()));
  for (std::uint32_t f : block_freqs) {
    put_u16(out, static_cast<std::uint16_t>(f - 1));  // counts are in [1, 2^16]
  }
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

BitStream BitStream::parse(std::span<const std::uint8_t> bytes) {
  std::size_t pos = 0;
  auto need = [&](std::size_t count) {
    if (pos + count > bytes.size()) {
      throw DecodeError(8 * bytes.size(), "bitstream truncated inside the header");
    }
  };
  auto get_u16 = [&]() -> std::uint16_t {
    need(2);
    const std::uint16_t v = static_cast<std::uint16_t>((bytes[pos] << 8) | bytes[pos + 1]);
    pos += 2;
    return v;
  };
  auto get_u64 = [&]() -> std::uint64_t {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | bytes[pos + i];
    pos += 8;
    return v;
  };

  need(5);
  for (int i = 0; i < 4; ++i) {
    if (bytes[i] != static_cast<std::uint8_t>(kMagic[i])) {
      throw DecodeError(8 * i, "bad magic, not an SRDP bitstream");
    }
  }
  pos = 4;
  if (bytes[pos] != kVersion) {
    throw DecodeError(8 * pos, "unsupported bitstream version " + std::to_string(bytes[pos]));
  }
  ++pos;

  BitStream bs;
  bs.alphabet_size = get_u16();
  bs.partition_hash = get_u64();
  bs.symbol_count = get_u64();
  const std::uint16_t block_count = get_u16();
  if (block_count == 0) throw DecodeError(8 * (pos - 2), "header declares zero blocks");
  bs.block_freqs.resize(block_count);
  std::uint64_t total = 0;
  for (std::uint16_t b = 0; b < block_count; ++b) {
    bs.block_freqs[b] = static_cast<std::uint32_t>(get_u16()) + 1;
    total += bs.block_freqs[b];
  }
  if (total != StaticFreqTable::kTotal) {
    throw DecodeError(8 * pos, "header frequency table does not sum to 2^16");
  }
  bs.payload.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos), bytes.end());
  bs.bit_length = 8 * bs.payload.size();
  return bs;
}

BitStream encode(std::span<const std::size_t> symbols, const CodecModel& model) {
  const SynsetPartition& partition = model.partition();
  const StaticFreqTable table(block_distribution(model.source(), partition));

  RangeEncoder coder;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (symbols[i] >= model.source().size()) {
      throw ValidationError("encode: symbol " + std::to_string(symbols[i]) + " at position " +
                            std::to_string(i) + " is outside the alphabet");
    }
    coder.encode(table, partition.block_of(symbols[i]));
  }

  BitStream bs;
  bs.alphabet_size = static_cast<std::uint16_t>(model.source().size());
  bs.partition_hash = partition.hash();
  bs.symbol_count = symbols.size();
  bs.block_freqs = table.freqs();
  bs.payload = coder.finish();
  bs.bit_length = 8 * bs.payload.size();
  return bs;
}

std::vector<std::size_t> decode_block_indices(const BitStream& bs, const CodecModel& model) {
  if (bs.alphabet_size != model.source().size()) {
    throw DecodeError(8 * 5, "bitstream alphabet size does not match the model");
  }
  if (bs.partition_hash != model.partition().hash()) {
    throw DecodeError(8 * 7, "partition hash mismatch, wrong decoding model");
  }
  const StaticFreqTable table(bs.block_freqs);
  RangeDecoder coder(bs.payload);
  std::vector<std::size_t> blocks(bs.symbol_count);
  for (std::uint64_t i = 0; i < bs.symbol_count; ++i) blocks[i] = coder.decode(table);
  return blocks;
}

std::vector<std::size_t> decode(const BitStream& bs, const CodecModel& model) {
  const std::vector<std::size_t> blocks = decode_block_indices(bs, model);
  Xoshiro256 rng = stream_rng(model.seed(), kDecoderStream);
  std::vector<std::vector<double>> cdfs(model.partition().block_count());
  for (std::size_t b = 0; b < cdfs.size(); ++b) cdfs[b] = cdf_of(model.detail_sampler()[b]);

  std::vector<std::size_t> recon(blocks.size());
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    recon[i] = draw(cdfs[blocks[i]], rng.next_double());
  }
  return recon;
}

RunReport measure(std::span<const std::size_t> symbols, std::span<const std::size_t> recon,
                  const BitStream& bs, const CodecModel& model, const DistortionMatrix& delta) {
  if (symbols.size() != recon.size()) {
    throw ValidationError("measure: source and reconstruction lengths differ");
  }
  if (symbols.empty()) throw ValidationError("measure: empty run");
  const std::size_t k = model.source().size();
  const double n = static_cast<double>(symbols.size());

  RunReport report;
  report.n = symbols.size();
  // Rate of the complete bitstream, container header included.
  report.rate_bits_per_symbol = static_cast<double>(bs.total_bits()) / n;
  report.h_s = semantic_entropy(model.source(), model.partition());

  std::vector<double> hist_src(k, 0.0);
  std::vector<double> hist_rec(k, 0.0);
  Matrix joint(k, std::vector<double>(k, 0.0));
  double distortion = 0.0;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (symbols[i] >= k || recon[i] >= k) {
      throw ValidationError("measure: symbol outside the alphabet at position " +
                            std::to_string(i));
    }
    hist_src[symbols[i]] += 1.0;
    hist_rec[recon[i]] += 1.0;
    joint[symbols[i]][recon[i]] += 1.0;
    distortion += delta.at(symbols[i], recon[i]);
  }
  report.expected_distortion = distortion / n;

  // Add-one smoothing on both histograms keeps the divergence finite even
  // when a symbol never shows up in one of them.
  std::vector<double> smooth_src(k);
  std::vector<double> smooth_rec(k);
  for (std::size_t i = 0; i < k; ++i) {
    smooth_src[i] = (hist_src[i] + 1.0) / (n + static_cast<double>(k));
    smooth_rec[i] = (hist_rec[i] + 1.0) / (n + static_cast<double>(k));
  }
  report.empirical_kl_source_vs_recon = kl_divergence(
      FiniteDistribution(std::move(smooth_src), true), FiniteDistribution(std::move(smooth_rec), true));

  const JointDistribution empirical(std::move(joint), true);
  report.empirical_mi_syntactic = mutual_information(empirical);
  report.empirical_mi_semantic = single_side_semantic_mi(empirical, model.partition());
  return report;
}

}  // namespace synrdp
