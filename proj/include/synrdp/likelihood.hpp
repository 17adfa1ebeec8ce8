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

#ifndef SYNRDP_LIKELIHOOD_HPP_
#define SYNRDP_LIKELIHOOD_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "synrdp/distortion.hpp"
#include "synrdp/distribution.hpp"
#include "synrdp/measures.hpp"

namespace synrdp {

// Source distribution p_X, generative marginal p_Xhat over the same alphabet,
// and the synset partition. The three quantities below satisfy the exact
// decomposition
//
//   f_constant = kl_divergence(source, model) + delta_p
//
// which is where the perception-divergence term of the synonymous objective
// comes from. The model must be strictly positive wherever the source or any
// same-block neighbour carries mass.
class LikelihoodInstance {
 public:
  LikelihoodInstance(FiniteDistribution source, FiniteDistribution model,
                     SynsetPartition partition);

  const FiniteDistribution& source() const { return source_; }
  const FiniteDistribution& model() const { return model_; }
  const SynsetPartition& partition() const { return partition_; }

 private:
  FiniteDistribution source_;
  FiniteDistribution model_;
  SynsetPartition partition_;
};

// f(p_X, synsets) = sum_x p(x) * mean_{x' in block(x)} log(p(x) / p(x')).
// Zero for singleton partitions and for internally equiprobable blocks; the
// outer expectation runs over the source symbol with the synset given by its
// block, which is the reading that makes those special cases hold.
double f_constant(const LikelihoodInstance& inst, LogUnit unit = LogUnit::kBits);

// delta_p = sum_x p(x) * mean_{x' in block(x)} log(phat(x) / p(x')).
// Sign-unconstrained; converges to f_constant as the model marginal
// approaches the source. Collapses to -KL(source || model) for singleton
// partitions.
double delta_p(const LikelihoodInstance& inst, LogUnit unit = LogUnit::kBits);

// f_constant - kl_divergence(source, model) - delta_p. Algebraically zero;
// anything above ~1e-12 indicates a broken instance.
double divergence_identity_residual(const LikelihoodInstance& inst);

// E[Delta(x, xhat)] when xhat is drawn from recon(. | block(x)).
// recon rows are indexed by block, columns by the reconstruction alphabet.
double expected_distortion(const FiniteDistribution& source, const SynsetPartition& partition,
                           const Matrix& recon, const DistortionMatrix& metric);

// Gaussian negative log likelihood split into the weighted E-MSE term and
// the data-independent constant:
//   nll = ||x - xhat||^2 / (2 sigma^2 ln 2) + (d/2) log2(2 pi sigma^2)
struct GaussianReduction {
  std::size_t dim;
  double sigma2;
  double nll;           // bits
  double weighted_mse;  // bits
  double constant;      // bits
};

GaussianReduction gaussian_reduction(std::span<const double> x, std::span<const double> xhat,
                                     double sigma2);

// Projected-gradient descent on the simplex minimizing KL(source || model),
// starting from `init`. Stops once the divergence drops below kl_tol or the
// iteration budget runs out. Supports the delta_p -> f convergence check.
FiniteDistribution fit_model_to_source(const FiniteDistribution& source,
                                       const FiniteDistribution& init, double kl_tol = 1e-9,
                                       int max_iters = 20000);

}  // namespace synrdp

#endif  // SYNRDP_LIKELIHOOD_HPP_
