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

#include "synrdp/range_coder.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "synrdp/error.hpp"

namespace synrdp {

namespace {
constexpr std::uint32_t kTopValue = 1u << 24;
}

StaticFreqTable::StaticFreqTable(const FiniteDistribution& p) {
  if (p.size() > kTotal) {
    throw ValidationError("freq table: alphabet too large for 16-bit frequencies");
  }
  freq_.resize(p.size());
  std::int64_t assigned = 0;
  for (std::size_t s = 0; s < p.size(); ++s) {
    freq_[s] = static_cast<std::uint32_t>(
        std::max<std::int64_t>(1, std::llround(p[s] * static_cast<double>(kTotal))));
    assigned += freq_[s];
  }
  // Settle the rounding difference on the currently largest counts so that
  // the total is exactly 2^16 and every count stays >= 1.
  std::int64_t diff = static_cast<std::int64_t>(kTotal) - assigned;
  while (diff != 0) {
    std::size_t target = 0;
    for (std::size_t s = 1; s < freq_.size(); ++s) {
      if (freq_[s] > freq_[target]) target = s;
    }
    if (diff > 0) {
      freq_[target] += static_cast<std::uint32_t>(diff);
      diff = 0;
    } else {
      const std::int64_t take = std::min<std::int64_t>(-diff, freq_[target] - 1);
      if (take == 0) throw ValidationError("freq table: cannot quantize, alphabet too large");
      freq_[target] -= static_cast<std::uint32_t>(take);
      diff += take;
    }
  }
  finish_init();
}

StaticFreqTable::StaticFreqTable(std::vector<std::uint32_t> freqs) : freq_(std::move(freqs)) {
  std::uint64_t total = 0;
  for (std::size_t s = 0; s < freq_.size(); ++s) {
    if (freq_[s] == 0) {
      throw ValidationError("freq table: symbol " + std::to_string(s) + " has zero count");
    }
    total += freq_[s];
  }
  if (total != kTotal) {
    throw ValidationError("freq table: counts sum to " + std::to_string(total) + ", expected " +
                          std::to_string(kTotal));
  }
  finish_init();
}

void StaticFreqTable::finish_init() {
  cum_.resize(freq_.size() + 1);
  cum_[0] = 0;
  for (std::size_t s = 0; s < freq_.size(); ++s) cum_[s + 1] = cum_[s] + freq_[s];
  remainder_symbol_ = 0;
  for (std::size_t s = 1; s < freq_.size(); ++s) {
    if (freq_[s] > freq_[remainder_symbol_]) remainder_symbol_ = s;
  }
}

double StaticFreqTable::entropy_bits() const {
  double h = 0.0;
  for (std::uint32_t f : freq_) {
    const double prob = static_cast<double>(f) / kTotal;
    h -= prob * std::log2(prob);
  }
  return h;
}

double StaticFreqTable::ideal_cost_bits(std::size_t s) const {
  return -std::log2(static_cast<double>(freq_[s]) / kTotal);
}

void RangeEncoder::emit(std::uint8_t byte) {
  if (drop_first_byte_) {
    // Low + Range <= 2^32 holds until the first renormalization, so the
    // first shifted byte carries no information; the decoder starts from
    // four bytes instead of five.
    drop_first_byte_ = false;
    return;
  }
  out_.push_back(byte);
}

void RangeEncoder::shift_low() {
  if (static_cast<std::uint32_t>(low_) < 0xFF000000u || (low_ >> 32) != 0) {
    const std::uint8_t carry = static_cast<std::uint8_t>(low_ >> 32);
    emit(static_cast<std::uint8_t>(cache_ + carry));
    for (; cache_size_ > 1; --cache_size_) {
      emit(static_cast<std::uint8_t>(0xFFu + carry));
    }
    cache_ = static_cast<std::uint8_t>((low_ >> 24) & 0xFFu);
    cache_size_ = 0;
  }
  ++cache_size_;
  low_ = (low_ & 0x00FFFFFFull) << 8;
}

void RangeEncoder::encode(const StaticFreqTable& table, std::size_t symbol) {
  const std::uint32_t r = range_ >> 16;
  const std::uint32_t rem = range_ - (r << 16);
  const std::size_t top = table.remainder_symbol();
  const std::uint32_t base = r * table.cum(symbol) + (symbol > top ? rem : 0);
  const std::uint32_t size = r * table.freq(symbol) + (symbol == top ? rem : 0);
  low_ += base;
  range_ = size;
  while (range_ < kTopValue) {
    shift_low();
    range_ <<= 8;
  }
}

std::vector<std::uint8_t> RangeEncoder::finish() {
  for (int i = 0; i < 5; ++i) shift_low();
  return std::move(out_);
}

RangeDecoder::RangeDecoder(std::span<const std::uint8_t> payload) : payload_(payload) {
  for (int i = 0; i < 4; ++i) code_ = (code_ << 8) | read_byte();
}

std::uint8_t RangeDecoder::read_byte() {
  if (pos_ >= payload_.size()) {
    throw DecodeError(8 * pos_, "range decoder ran past the end of the payload");
  }
  return payload_[pos_++];
}

std::size_t RangeDecoder::decode(const StaticFreqTable& table) {
  if (code_ >= range_) {
    throw DecodeError(8 * pos_, "range violation: code exceeds the coder range");
  }
  const std::uint32_t r = range_ >> 16;
  const std::uint32_t rem = range_ - (r << 16);
  const std::size_t top = table.remainder_symbol();
  auto base_of = [&](std::size_t s) -> std::uint32_t {
    return r * table.cum(s) + (s > top ? rem : 0);
  };
  // Largest symbol whose interval base does not exceed the code value.
  std::size_t lo = 0;
  std::size_t hi = table.symbol_count() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi + 1) / 2;
    if (base_of(mid) <= code_) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  const std::size_t symbol = lo;
  const std::uint32_t size = r * table.freq(symbol) + (symbol == top ? rem : 0);
  code_ -= base_of(symbol);
  range_ = size;
  while (range_ < kTopValue) {
    range_ <<= 8;
    code_ = (code_ << 8) | read_byte();
  }
  return symbol;
}

}  // namespace synrdp
