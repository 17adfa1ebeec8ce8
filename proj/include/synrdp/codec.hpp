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

#ifndef SYNRDP_CODEC_HPP_
#define SYNRDP_CODEC_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "synrdp/distortion.hpp"
#include "synrdp/distribution.hpp"
#include "synrdp/range_coder.hpp"

namespace synrdp {

// Strict mode confines the decoder's detail sampler to the synset of the
// coded block; free mode allows support outside the block to simulate an
// imperfect decoder (nonzero empirical divergence).
enum class SamplerMode { kStrict, kFree };

// Executable synonymous codec: deterministic encoder sample -> synset index,
// entropy-coded synset stream, detail-sampling decoder.
class CodecModel {
 public:
  // detail_sampler rows are indexed by block over the reconstruction
  // alphabet; when absent it defaults to the within-block conditional
  // p(x) / P(block), which preserves the source distribution exactly.
  CodecModel(FiniteDistribution source, SynsetPartition partition, std::uint64_t seed,
             SamplerMode mode = SamplerMode::kStrict,
             std::optional<Matrix> detail_sampler = std::nullopt);

  const FiniteDistribution& source() const { return source_; }
  const SynsetPartition& partition() const { return partition_; }
  const Matrix& detail_sampler() const { return detail_sampler_; }
  std::uint64_t seed() const { return seed_; }
  SamplerMode mode() const { return mode_; }

  // Exact decode-process output distribution:
  // sum_b P(block b) * detail_sampler(. | b).
  FiniteDistribution reconstruction_pushforward() const;

  // Exact joint p(x, xhat) of the deterministic encoder composed with the
  // conditional sampler.
  JointDistribution codec_joint() const;

 private:
  FiniteDistribution source_;
  SynsetPartition partition_;
  Matrix detail_sampler_;
  std::uint64_t seed_;
  SamplerMode mode_;
};

// Container/wire format (big-endian):
//   magic "SRDP" | version u8 | alphabet_size u16 | partition_hash u64 |
//   symbol_count u64 | block_count u16 | per-block u16 (count - 1) | payload
struct BitStream {
  static constexpr std::uint8_t kVersion = 1;

  std::uint16_t alphabet_size = 0;
  std::uint64_t partition_hash = 0;
  std::uint64_t symbol_count = 0;
  std::vector<std::uint32_t> block_freqs;  // quantized, sum to 2^16
  std::vector<std::uint8_t> payload;
  std::uint64_t bit_length = 0;  // payload bits

  std::vector<std::uint8_t> serialize() const;
  static BitStream parse(std::span<const std::uint8_t> bytes);

  std::uint64_t header_bits() const;
  std::uint64_t total_bits() const { return header_bits() + bit_length; }
};

// Empirical measurements of one codec run against the theoretical limits.
struct RunReport {
  std::uint64_t n = 0;
  double rate_bits_per_symbol = 0.0;  // total bitstream bits (header + payload) / n
  double h_s = 0.0;                   // semantic entropy of the model
  double expected_distortion = 0.0;
  double empirical_kl_source_vs_recon = 0.0;  // add-one smoothed, bits
  double empirical_mi_syntactic = 0.0;        // plug-in estimate, bits
  double empirical_mi_semantic = 0.0;         // block-collapsed plug-in, bits
};

// n i.i.d. draws from the model source; identical (seed, n) reproduce the
// same sequence on every platform.
std::vector<std::size_t> sample_source(const CodecModel& model, std::size_t n);

// Maps each symbol to its synset index (the detail index is discarded) and
// arithmetic-codes the index stream against the quantized block model.
BitStream encode(std::span<const std::size_t> symbols, const CodecModel& model);

// Recovers the synset index stream exactly, then samples one reconstruction
// per index from the detail sampler.
std::vector<std::size_t> decode(const BitStream& bs, const CodecModel& model);

// Decode without the sampling stage; exposed so tests can verify semantic
// losslessness directly.
std::vector<std::size_t> decode_block_indices(const BitStream& bs, const CodecModel& model);

RunReport measure(std::span<const std::size_t> symbols, std::span<const std::size_t> recon,
                  const BitStream& bs, const CodecModel& model, const DistortionMatrix& delta);

}  // namespace synrdp

#endif  // SYNRDP_CODEC_HPP_
