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

#include "synrdp/measures.hpp"

#include <cmath>
#include <string>

#include "synrdp/error.hpp"

namespace synrdp {

double unit_log(double x, LogUnit unit) {
  return unit == LogUnit::kBits ? std::log2(x) : std::log(x);
}

double entropy(const FiniteDistribution& p, LogUnit unit) {
  double h = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) h -= p[i] * unit_log(p[i], unit);
  }
  return h;
}

FiniteDistribution block_distribution(const FiniteDistribution& p, const SynsetPartition& s) {
  if (s.alphabet_size() != p.size()) {
    throw ValidationError("semantic_entropy: partition covers " +
                          std::to_string(s.alphabet_size()) + " symbols, distribution has " +
                          std::to_string(p.size()));
  }
  std::vector<double> mass(s.block_count(), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) mass[s.block_of(i)] += p[i];
  return FiniteDistribution(std::move(mass), true);
}

double semantic_entropy(const FiniteDistribution& p, const SynsetPartition& s, LogUnit unit) {
  return entropy(block_distribution(p, s), unit);
}

double kl_divergence(const FiniteDistribution& p, const FiniteDistribution& q, LogUnit unit) {
  if (p.size() != q.size()) {
    throw ValidationError("kl_divergence: alphabet sizes differ (" + std::to_string(p.size()) +
                          " vs " + std::to_string(q.size()) + ")");
  }
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) {
      throw SupportError("kl_divergence: q has zero mass at index " + std::to_string(i) +
                         " where p is positive");
    }
    d += p[i] * unit_log(p[i] / q[i], unit);
  }
  return d;
}

double partial_semantic_kl(const FiniteDistribution& q, const FiniteDistribution& p,
                           const SynsetPartition& s, LogUnit unit) {
  if (p.size() != q.size()) {
    throw ValidationError("partial_semantic_kl: alphabet sizes differ (" +
                          std::to_string(q.size()) + " vs " + std::to_string(p.size()) + ")");
  }
  if (s.alphabet_size() != q.size()) {
    throw ValidationError("partial_semantic_kl: partition covers " +
                          std::to_string(s.alphabet_size()) + " symbols, distributions have " +
                          std::to_string(q.size()));
  }
  const FiniteDistribution block_p = block_distribution(p, s);
  double d = 0.0;
  for (std::size_t b = 0; b < s.block_count(); ++b) {
    for (std::size_t i : s.block(b)) {
      if (q[i] == 0.0) continue;
      if (block_p[b] == 0.0) {
        throw SupportError("partial_semantic_kl: block " + std::to_string(b) +
                           " has zero p-probability but member " + std::to_string(i) +
                           " carries q mass");
      }
      d += q[i] * unit_log(q[i] / block_p[b], unit);
    }
  }
  return d;
}

double mutual_information(const JointDistribution& j, LogUnit unit) {
  const FiniteDistribution px = j.row_marginal();
  const FiniteDistribution py = j.col_marginal();
  double mi = 0.0;
  for (std::size_t x = 0; x < j.rows(); ++x) {
    for (std::size_t y = 0; y < j.cols(); ++y) {
      const double m = j.at(x, y);
      if (m > 0.0) mi += m * unit_log(m / (px[x] * py[y]), unit);
    }
  }
  return mi;
}

double single_side_semantic_mi(const JointDistribution& j, const SynsetPartition& s_out,
                               LogUnit unit) {
  return mutual_information(j.collapse_columns(s_out), unit);
}

}  // namespace synrdp
