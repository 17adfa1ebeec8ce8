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

#ifndef SYNRDP_LATENT_MODEL_HPP_
#define SYNRDP_LATENT_MODEL_HPP_

#include <cstddef>
#include <vector>

#include "synrdp/distribution.hpp"
#include "synrdp/measures.hpp"

namespace synrdp {

// Fully discrete latent-variable model of a synonymous codec:
//
//   source          p(x) over the X alphabet
//   source_partition  synsets of X; block(x) is the synset of sample x
//   enc_syn         encoder q(y_s | x)
//   enc_det         encoder q(y_e | x, y_s), the detail branch
//   prior_syn       model prior p(y_s)
//   dec_lik         decoder likelihood p(block | y_s)
//
// The continuous integrals of the variational identities hold verbatim as
// finite sums on this object, so every identity check below is exact up to
// floating-point accumulation.
class DiscreteLatentModel {
 public:
  DiscreteLatentModel(FiniteDistribution source, SynsetPartition source_partition, Matrix enc_syn,
                      std::vector<Matrix> enc_det, FiniteDistribution prior_syn, Matrix dec_lik);

  const FiniteDistribution& source() const { return source_; }
  const SynsetPartition& source_partition() const { return partition_; }
  const Matrix& enc_syn() const { return enc_syn_; }
  const std::vector<Matrix>& enc_det() const { return enc_det_; }
  const FiniteDistribution& prior_syn() const { return prior_syn_; }
  const Matrix& dec_lik() const { return dec_lik_; }

  std::size_t x_size() const { return source_.size(); }
  std::size_t ys_size() const { return prior_syn_.size(); }
  std::size_t ye_size() const { return enc_det_[0][0].size(); }
  std::size_t block_count() const { return partition_.block_count(); }

  // Model evidence of a block: p(block) = sum_ys p(block | y_s) p(y_s).
  double block_evidence(std::size_t block_id) const;

  // Returns a copy whose enc_syn row at x is replaced (e.g. by the true
  // posterior, or a convex combination towards it).
  DiscreteLatentModel with_enc_syn_row(std::size_t x, std::vector<double> row) const;

 private:
  FiniteDistribution source_;
  SynsetPartition partition_;
  Matrix enc_syn_;
  std::vector<Matrix> enc_det_;
  FiniteDistribution prior_syn_;
  Matrix dec_lik_;
};

// Per-sample evaluation of the variational identity and its decomposition.
// Invariant (definitional): evidence = svlbo + full_kl within 1e-10.
struct SviReport {
  double evidence;          // log2 p(block(x))
  double svlbo;             // E_q[log2 p(block, y_s) - log2 q(y_s|x)]
  double full_kl;           // D[q(y_s|x) || p(y_s|block(x))]
  double partial_kl;        // partial semantic KL of q(y_s,y_e|x) vs the block posterior
  double det_cond_entropy;  // H(Y_e | X=x, Y_s) under q
  double likelihood_term;   // E_q[-log2 p(block|y_s)]
  double rate_term;         // E_q[-log2 p(y_s)]
};

struct SemanticKlDecomposition {
  double partial;
  double full;
  double det_cond_entropy;
};

struct LosslessConditions {
  bool kl_zero;         // E_x[full_semantic_kl] ~ 0
  bool likelihood_one;  // p(block(x)|y_s) ~ 1 wherever q(y_s|x) > 0
  bool hs_equals_mi;    // H_s(source, partition) ~ I(block; y_s)
};

// Bayes posterior p(y_s | block) from prior_syn and dec_lik.
FiniteDistribution true_syn_posterior(const DiscreteLatentModel& m, std::size_t block_id);

// D[q(y_s|x) || p(y_s|block(x))]; non-negative for every valid model.
double full_semantic_kl(const DiscreteLatentModel& m, std::size_t x);

// partial = full - det_cond_entropy, exactly; the discrete form keeps the
// detail-entropy term that the continuous derivation cancels under its
// unit-uniform density assumption.
SemanticKlDecomposition semantic_kl_decomposition(const DiscreteLatentModel& m, std::size_t x);

SviReport svlbo_report(const DiscreteLatentModel& m, std::size_t x);

// Condition booleans use tolerance 1e-9.
LosslessConditions lossless_conditions_check(const DiscreteLatentModel& m);

// Joint distribution of (block identity, y_s) induced by the model:
// p(b, y_s) = sum_{x in b} p(x) q(y_s|x). Used by the lossless check.
JointDistribution block_ys_joint(const DiscreteLatentModel& m);

}  // namespace synrdp

#endif  // SYNRDP_LATENT_MODEL_HPP_
