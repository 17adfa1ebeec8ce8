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

#ifndef SYNRDP_MEASURES_HPP_
#define SYNRDP_MEASURES_HPP_

#include "synrdp/distribution.hpp"

namespace synrdp {

// Rates are reported in bits/symbol throughout; nats are available for the
// occasional caller that needs them.
enum class LogUnit { kBits, kNats };

// log in the requested unit with the 0 * log 0 := 0 convention applied by
// callers; plain log of a positive argument here.
double unit_log(double x, LogUnit unit);

// Shannon entropy H(p). Result lies in [0, log |alphabet|].
double entropy(const FiniteDistribution& p, LogUnit unit = LogUnit::kBits);

// Semantic entropy H_s: entropy of the block-probability distribution the
// partition induces. 0 <= H_s <= H(p).
double semantic_entropy(const FiniteDistribution& p, const SynsetPartition& s,
                        LogUnit unit = LogUnit::kBits);

// Block-probability vector (P(block_0), ..., P(block_k-1)).
FiniteDistribution block_distribution(const FiniteDistribution& p, const SynsetPartition& s);

// Classical KL divergence D(p || q). Requires q_i = 0 => p_i = 0; a
// violation raises SupportError naming the offending index rather than
// returning +inf.
double kl_divergence(const FiniteDistribution& p, const FiniteDistribution& q,
                     LogUnit unit = LogUnit::kBits);

// Partial semantic KL divergence between a syntactic distribution q and the
// semantic (block-level) view of p:
//   sum_blocks sum_{i in block} q_i * log(q_i / P_p(block)).
// May be negative; always <= kl_divergence(q, p).
double partial_semantic_kl(const FiniteDistribution& q, const FiniteDistribution& p,
                           const SynsetPartition& s, LogUnit unit = LogUnit::kBits);

// I(X; Y) of a joint table; non-negative and symmetric in the two axes.
double mutual_information(const JointDistribution& j, LogUnit unit = LogUnit::kBits);

// Single-side semantic mutual information: the column variable is collapsed
// to block identity before taking mutual information. Never exceeds
// mutual_information(j) (data processing on the output collapse).
double single_side_semantic_mi(const JointDistribution& j, const SynsetPartition& s_out,
                               LogUnit unit = LogUnit::kBits);

}  // namespace synrdp

#endif  // SYNRDP_MEASURES_HPP_
