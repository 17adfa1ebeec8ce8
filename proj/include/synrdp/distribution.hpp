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

#ifndef SYNRDP_DISTRIBUTION_HPP_
#define SYNRDP_DISTRIBUTION_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

namespace synrdp {

// Mass-sum tolerance for distributions, conditional rows and joint tables.
inline constexpr double kMassTolerance = 1e-9;

using Matrix = std::vector<std::vector<double>>;

// Probability vector over a finite alphabet. Immutable after construction;
// all entries >= 0 and summing to 1 within kMassTolerance.
class FiniteDistribution {
 public:
  // With renormalize = true any positive total is accepted and divided out
  // (decimal noise from config round-trips); otherwise the sum must already
  // be within tolerance.
  explicit FiniteDistribution(std::vector<double> probs, bool renormalize = false);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  const std::vector<double>& probs() const { return probs_; }

  static FiniteDistribution uniform(std::size_t n);

  bool operator==(const FiniteDistribution& other) const { return probs_ == other.probs_; }

 private:
  std::vector<double> probs_;
};

// Disjoint blocks of alphabet indices covering the full index range.
// Canonical form: indices sorted inside each block, blocks ordered by their
// smallest member; hash() is stable under any input ordering.
class SynsetPartition {
 public:
  explicit SynsetPartition(std::vector<std::vector<std::size_t>> blocks);

  std::size_t alphabet_size() const { return block_of_.size(); }
  std::size_t block_count() const { return blocks_.size(); }
  const std::vector<std::size_t>& block(std::size_t b) const { return blocks_[b]; }
  const std::vector<std::vector<std::size_t>>& blocks() const { return blocks_; }
  std::size_t block_of(std::size_t index) const { return block_of_[index]; }

  // 64-bit FNV-1a over the canonical block-list serialization; used as a
  // model fingerprint in bitstream headers.
  std::uint64_t hash() const;

  static SynsetPartition singletons(std::size_t n);
  static SynsetPartition single_block(std::size_t n);

  bool operator==(const SynsetPartition& other) const { return blocks_ == other.blocks_; }

 private:
  std::vector<std::vector<std::size_t>> blocks_;
  std::vector<std::size_t> block_of_;
};

// Joint probability table over (row alphabet x column alphabet).
class JointDistribution {
 public:
  explicit JointDistribution(Matrix mass, bool renormalize = false);

  std::size_t rows() const { return mass_.size(); }
  std::size_t cols() const { return mass_.empty() ? 0 : mass_[0].size(); }
  double at(std::size_t i, std::size_t j) const { return mass_[i][j]; }
  const Matrix& mass() const { return mass_; }

  FiniteDistribution row_marginal() const;
  FiniteDistribution col_marginal() const;

  // Merges columns block-wise; the output variable becomes block identity.
  JointDistribution collapse_columns(const SynsetPartition& s) const;

 private:
  Matrix mass_;
};

// Validates that every row of `rows` is a distribution over `cols` entries
// within kMassTolerance. `what` names the table in error messages.
void validate_stochastic_rows(const Matrix& rows, std::size_t cols, const char* what);

}  // namespace synrdp

#endif  // SYNRDP_DISTRIBUTION_HPP_
