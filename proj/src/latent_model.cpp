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

#include "synrdp/latent_model.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "synrdp/error.hpp"

namespace synrdp {

namespace {
constexpr double kConditionTol = 1e-9;
}

DiscreteLatentModel::DiscreteLatentModel(FiniteDistribution source,
                                         SynsetPartition source_partition, Matrix enc_syn,
                                         std::vector<Matrix> enc_det,
                                         FiniteDistribution prior_syn, Matrix dec_lik)
    : source_(std::move(source)),
      partition_(std::move(source_partition)),
      enc_syn_(std::move(enc_syn)),
      enc_det_(std::move(enc_det)),
      prior_syn_(std::move(prior_syn)),
      dec_lik_(std::move(dec_lik)) {
  if (partition_.alphabet_size() != source_.size()) {
    throw ValidationError("latent model: partition covers " +
                          std::to_string(partition_.alphabet_size()) +
                          " symbols, source has " + std::to_string(source_.size()));
  }
  const std::size_t nx = source_.size();
  const std::size_t nys = prior_syn_.size();
  if (enc_syn_.size() != nx) throw ValidationError("latent model: enc_syn needs one row per x");
  validate_stochastic_rows(enc_syn_, nys, "enc_syn");
  if (enc_det_.size() != nx) throw ValidationError("latent model: enc_det needs one table per x");
  for (std::size_t x = 0; x < nx; ++x) {
    if (enc_det_[x].size() != nys) {
      throw ValidationError("latent model: enc_det[" + std::to_string(x) +
                            "] needs one row per y_s");
    }
    validate_stochastic_rows(enc_det_[x], enc_det_[0][0].size(), "enc_det");
  }
  if (dec_lik_.size() != nys) throw ValidationError("latent model: dec_lik needs one row per y_s");
  validate_stochastic_rows(dec_lik_, partition_.block_count(), "dec_lik");
}

double DiscreteLatentModel::block_evidence(std::size_t block_id) const {
  double evidence = 0.0;
  for (std::size_t ys = 0; ys < ys_size(); ++ys) {
    evidence += dec_lik_[ys][block_id] * prior_syn_[ys];
  }
  return evidence;
}

DiscreteLatentModel DiscreteLatentModel::with_enc_syn_row(std::size_t x,
                                                          std::vector<double> row) const {
  Matrix enc = enc_syn_;
  enc[x] = std::move(row);
  return DiscreteLatentModel(source_, partition_, std::move(enc), enc_det_, prior_syn_, dec_lik_);
}

FiniteDistribution true_syn_posterior(const DiscreteLatentModel& m, std::size_t block_id) {
  if (block_id >= m.block_count()) {
    throw ValidationError("true_syn_posterior: block " + std::to_string(block_id) +
                          " out of range");
  }
  const double evidence = m.block_evidence(block_id);
  if (evidence <= 0.0) {
    throw ValidationError("true_syn_posterior: block " + std::to_string(block_id) +
                          " has zero mass under the model");
  }
  std::vector<double> post(m.ys_size());
  for (std::size_t ys = 0; ys < m.ys_size(); ++ys) {
    post[ys] = m.dec_lik()[ys][block_id] * m.prior_syn()[ys] / evidence;
  }
  return FiniteDistribution(std::move(post), true);
}

double full_semantic_kl(const DiscreteLatentModel& m, std::size_t x) {
  if (x >= m.x_size()) throw ValidationError("full_semantic_kl: x out of range");
  const FiniteDistribution q(m.enc_syn()[x]);
  const FiniteDistribution post = true_syn_posterior(m, m.source_partition().block_of(x));
  return kl_divergence(q, post);
}

SemanticKlDecomposition semantic_kl_decomposition(const DiscreteLatentModel& m, std::size_t x) {
  if (x >= m.x_size()) throw ValidationError("semantic_kl_decomposition: x out of range");
  const std::size_t block = m.source_partition().block_of(x);
  const FiniteDistribution post = true_syn_posterior(m, block);
  const auto& q_syn = m.enc_syn()[x];
  const auto& q_det = m.enc_det()[x];

  SemanticKlDecomposition out{0.0, 0.0, 0.0};
  for (std::size_t ys = 0; ys < m.ys_size(); ++ys) {
    if (q_syn[ys] == 0.0) continue;
    if (post[ys] == 0.0) {
      throw SupportError("semantic_kl_decomposition: posterior has zero mass at y_s " +
                         std::to_string(ys) + " where q is positive");
    }
    out.full += q_syn[ys] * std::log2(q_syn[ys] / post[ys]);
    for (std::size_t ye = 0; ye < m.ye_size(); ++ye) {
      const double joint = q_syn[ys] * q_det[ys][ye];
      if (joint == 0.0) continue;
      out.partial += joint * std::log2(joint / post[ys]);
      out.det_cond_entropy -= joint * std::log2(q_det[ys][ye]);
    }
  }
  return out;
}

SviReport svlbo_report(const DiscreteLatentModel& m, std::size_t x) {
  if (x >= m.x_size()) throw ValidationError("svlbo_report: x out of range");
  const std::size_t block = m.source_partition().block_of(x);
  const double evidence = m.block_evidence(block);
  if (evidence <= 0.0) {
    throw ValidationError("svlbo_report: block " + std::to_string(block) +
                          " has zero evidence under the model");
  }
  const auto& q = m.enc_syn()[x];

  SviReport r{};
  r.evidence = std::log2(evidence);
  for (std::size_t ys = 0; ys < m.ys_size(); ++ys) {
    if (q[ys] == 0.0) continue;
    const double lik = m.dec_lik()[ys][block];
    const double prior = m.prior_syn()[ys];
    if (lik * prior <= 0.0) {
      throw SupportError("svlbo_report: joint p(block, y_s) is zero at y_s " + std::to_string(ys) +
                         " where q is positive");
    }
    r.svlbo += q[ys] * (std::log2(lik * prior) - std::log2(q[ys]));
    r.likelihood_term -= q[ys] * std::log2(lik);
    r.rate_term -= q[ys] * std::log2(prior);
  }
  r.full_kl = full_semantic_kl(m, x);
  const SemanticKlDecomposition t1 = semantic_kl_decomposition(m, x);
  r.partial_kl = t1.partial;
  r.det_cond_entropy = t1.det_cond_entropy;
  return r;
}

JointDistribution block_ys_joint(const DiscreteLatentModel& m) {
  Matrix joint(m.block_count(), std::vector<double>(m.ys_size(), 0.0));
  for (std::size_t x = 0; x < m.x_size(); ++x) {
    const std::size_t b = m.source_partition().block_of(x);
    for (std::size_t ys = 0; ys < m.ys_size(); ++ys) {
      joint[b][ys] += m.source()[x] * m.enc_syn()[x][ys];
    }
  }
  return JointDistribution(std::move(joint), true);
}

LosslessConditions lossless_conditions_check(const DiscreteLatentModel& m) {
  LosslessConditions out{};

  double expected_kl = 0.0;
  for (std::size_t x = 0; x < m.x_size(); ++x) {
    if (m.source()[x] > 0.0) expected_kl += m.source()[x] * full_semantic_kl(m, x);
  }
  out.kl_zero = expected_kl < kConditionTol;

  out.likelihood_one = true;
  for (std::size_t x = 0; x < m.x_size() && out.likelihood_one; ++x) {
    const std::size_t b = m.source_partition().block_of(x);
    for (std::size_t ys = 0; ys < m.ys_size(); ++ys) {
      if (m.enc_syn()[x][ys] > 0.0 && m.dec_lik()[ys][b] <= 1.0 - kConditionTol) {
        out.likelihood_one = false;
        break;
      }
    }
  }

  const double hs = semantic_entropy(m.source(), m.source_partition());
  const double mi = mutual_information(block_ys_joint(m));
  out.hs_equals_mi = std::abs(hs - mi) < kConditionTol;
  return out;
}

}  // namespace synrdp
