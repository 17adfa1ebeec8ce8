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

#include "synrdp/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "synrdp/error.hpp"

namespace synrdp {

FiniteDistribution::FiniteDistribution(std::vector<double> probs, bool renormalize)
    : probs_(std::move(probs)) {
  if (probs_.empty()) throw ValidationError("distribution: alphabet size must be >= 1");
  double sum = 0.0;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    if (!(probs_[i] >= 0.0) || !std::isfinite(probs_[i])) {
      throw ValidationError("distribution: entry " + std::to_string(i) + " is negative or not finite");
    }
    sum += probs_[i];
  }
  // Entries already inside tolerance pass through untouched so that config
  // round-trips stay bit-exact; renormalization only repairs larger drift.
  if (std::abs(sum - 1.0) > kMassTolerance) {
    if (!renormalize) {
      throw ValidationError("distribution: mass sums to " + std::to_string(sum) +
                            ", expected 1 within 1e-9");
    }
    if (sum <= 0.0) throw ValidationError("distribution: total mass is zero, cannot renormalize");
    for (double& p : probs_) p /= sum;
  }
}

FiniteDistribution FiniteDistribution::uniform(std::size_t n) {
  if (n == 0) throw ValidationError("distribution: alphabet size must be >= 1");
  return FiniteDistribution(std::vector<double>(n, 1.0 / static_cast<double>(n)), true);
}

SynsetPartition::SynsetPartition(std::vector<std::vector<std::size_t>> blocks)
    : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw ValidationError("partition: must contain at least one block");
  std::size_t total = 0;
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    if (blocks_[b].empty()) {
      throw ValidationError("partition: block " + std::to_string(b) + " is empty");
    }
    std::sort(blocks_[b].begin(), blocks_[b].end());
    total += blocks_[b].size();
  }
  std::sort(blocks_.begin(), blocks_.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });

  block_of_.assign(total, blocks_.size());
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    for (std::size_t index : blocks_[b]) {
      if (index >= total) {
        throw ValidationError("partition: index " + std::to_string(index) +
                              " out of range for alphabet of size " + std::to_string(total));
      }
      if (block_of_[index] != blocks_.size()) {
        throw ValidationError("partition: index " + std::to_string(index) +
                              " appears in more than one block");
      }
      block_of_[index] = b;
    }
  }
  // All indices distinct and < total, and the counts add up, so coverage holds.
}

std::uint64_t SynsetPartition::hash() const {
  std::uint64_t h = 0xCBF29CE484222325ull;  // FNV-1a offset basis
  auto feed_u64 = [&h](std::uint64_t v) {
    for (int byte = 0; byte < 8; ++byte) {
      h ^= (v >> (8 * byte)) & 0xFFu;
      h *= 0x100000001B3ull;  // FNV prime
    }
  };
  feed_u64(blocks_.size());
  for (const auto& blk : blocks_) {
    feed_u64(blk.size());
    for (std::size_t index : blk) feed_u64(index);
  }
  return h;
}

SynsetPartition SynsetPartition::singletons(std::size_t n) {
  std::vector<std::vector<std::size_t>> blocks(n);
  for (std::size_t i = 0; i < n; ++i) blocks[i] = {i};
  return SynsetPartition(std::move(blocks));
}

SynsetPartition SynsetPartition::single_block(std::size_t n) {
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  return SynsetPartition({all});
}

JointDistribution::JointDistribution(Matrix mass, bool renormalize) : mass_(std::move(mass)) {
  if (mass_.empty() || mass_[0].empty()) throw ValidationError("joint: table must be non-empty");
  const std::size_t cols = mass_[0].size();
  double sum = 0.0;
  for (std::size_t i = 0; i < mass_.size(); ++i) {
    if (mass_[i].size() != cols) throw ValidationError("joint: ragged rows");
    for (std::size_t j = 0; j < cols; ++j) {
      if (!(mass_[i][j] >= 0.0) || !std::isfinite(mass_[i][j])) {
        throw ValidationError("joint: entry (" + std::to_string(i) + "," + std::to_string(j) +
                              ") is negative or not finite");
      }
      sum += mass_[i][j];
    }
  }
  if (std::abs(sum - 1.0) > kMassTolerance) {
    if (!renormalize) {
      throw ValidationError("joint: total mass sums to " + std::to_string(sum) +
                            ", expected 1 within 1e-9");
    }
    if (sum <= 0.0) throw ValidationError("joint: total mass is zero, cannot renormalize");
    for (auto& row : mass_)
      for (double& v : row) v /= sum;
  }
}

FiniteDistribution JointDistribution::row_marginal() const {
  std::vector<double> m(rows(), 0.0);
  for (std::size_t i = 0; i < rows(); ++i)
    for (std::size_t j = 0; j < cols(); ++j) m[i] += mass_[i][j];
  return FiniteDistribution(std::move(m), true);
}

FiniteDistribution JointDistribution::col_marginal() const {
  std::vector<double> m(cols(), 0.0);
  for (std::size_t i = 0; i < rows(); ++i)
    for (std::size_t j = 0; j < cols(); ++j) m[j] += mass_[i][j];
  return FiniteDistribution(std::move(m), true);
}

JointDistribution JointDistribution::collapse_columns(const SynsetPartition& s) const {
  if (s.alphabet_size() != cols()) {
    throw ValidationError("joint: column partition covers " + std::to_string(s.alphabet_size()) +
                          " symbols, table has " + std::to_string(cols()) + " columns");
  }
  Matrix collapsed(rows(), std::vector<double>(s.block_count(), 0.0));
  for (std::size_t i = 0; i < rows(); ++i)
    for (std::size_t j = 0; j < cols(); ++j) collapsed[i][s.block_of(j)] += mass_[i][j];
  return JointDistribution(std::move(collapsed), true);
}

void validate_stochastic_rows(const Matrix& rows, std::size_t cols, const char* what) {
  if (rows.empty()) throw ValidationError(std::string(what) + ": table must be non-empty");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) {
      throw ValidationError(std::string(what) + ": row " + std::to_string(i) + " has " +
                            std::to_string(rows[i].size()) + " entries, expected " +
                            std::to_string(cols));
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
      if (!(rows[i][j] >= 0.0) || !std::isfinite(rows[i][j])) {
        throw ValidationError(std::string(what) + ": entry (" + std::to_string(i) + "," +
                              std::to_string(j) + ") is negative or not finite");
      }
      sum += rows[i][j];
    }
    if (std::abs(sum - 1.0) > kMassTolerance) {
      throw ValidationError(std::string(what) + ": row " + std::to_string(i) + " sums to " +
                            std::to_string(sum) + ", expected 1 within 1e-9");
    }
  }
}

}  // namespace synrdp
