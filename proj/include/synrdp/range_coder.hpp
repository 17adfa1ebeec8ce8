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

#ifndef SYNRDP_RANGE_CODER_HPP_
#define SYNRDP_RANGE_CODER_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "synrdp/distribution.hpp"

namespace synrdp {

// Static symbol model with 16-bit quantized frequencies. Every symbol keeps
// a count of at least 1; counts sum to exactly 2^16. The truncation
// remainder of each coding step goes to the highest-frequency symbol, which
// cancels the rounding loss in expectation.
class StaticFreqTable {
 public:
  static constexpr std::uint32_t kTotal = 1u << 16;

  explicit StaticFreqTable(const FiniteDistribution& p);
  explicit StaticFreqTable(std::vector<std::uint32_t> freqs);

  std::size_t symbol_count() const { return freq_.size(); }
  std::uint32_t freq(std::size_t s) const { return freq_[s]; }
  std::uint32_t cum(std::size_t s) const { return cum_[s]; }
  std::size_t remainder_symbol() const { return remainder_symbol_; }
  const std::vector<std::uint32_t>& freqs() const { return freq_; }

  // Entropy of the quantized model, bits/symbol.
  double entropy_bits() const;
  // -log2(freq(s) / 2^16).
  double ideal_cost_bits(std::size_t s) const;

 private:
  void finish_init();
  std::vector<std::uint32_t> freq_;
  std::vector<std::uint32_t> cum_;
  std::size_t remainder_symbol_ = 0;
};

// 32-bit carry-propagating range encoder (LZMA-style shift-out). The first
// shifted byte is provably zero and is dropped, so termination costs exactly
// four bytes on top of the coded stream.
class RangeEncoder {
 public:
  void encode(const StaticFreqTable& table, std::size_t symbol);
  std::vector<std::uint8_t> finish();

 private:
  void shift_low();
  void emit(std::uint8_t byte);

  std::uint64_t low_ = 0;
  std::uint32_t range_ = 0xFFFFFFFFu;
  std::uint8_t cache_ = 0;
  std::uint64_t cache_size_ = 1;
  bool drop_first_byte_ = true;
  std::vector<std::uint8_t> out_;
};

class RangeDecoder {
 public:
  explicit RangeDecoder(std::span<const std::uint8_t> payload);
  std::size_t decode(const StaticFreqTable& table);
  std::size_t bytes_consumed() const { return pos_; }

 private:
  std::uint8_t read_byte();

  std::span<const std::uint8_t> payload_;
  std::size_t pos_ = 0;
  std::uint32_t range_ = 0xFFFFFFFFu;
  std::uint32_t code_ = 0;
};

}  // namespace synrdp

#endif  // SYNRDP_RANGE_CODER_HPP_
