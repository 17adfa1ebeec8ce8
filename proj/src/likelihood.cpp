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

#include "synrdp/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "synrdp/error.hpp"

namespace synrdp {

LikelihoodInstance::LikelihoodInstance(FiniteDistribution source, FiniteDistribution model,
                                       SynsetPartition partition)
    : source_(std::move(source)), model_(std::move(model)), partition_(std::move(partition)) {
  if (source_.size() != model_.size()) {
    throw ValidationError("likelihood instance: source and model alphabets differ (" +
                          std::to_string(source_.size()) + " vs " +
                          std::to_string(model_.size()) + ")");
  }
  if (partition_.alphabet_size() != source_.size()) {
    throw ValidationError("likelihood instance: partition covers " +
                          std::to_string(partition_.alphabet_size()) + " symbols, alphabet has " +
                          std::to_string(source_.size()));
  }
  for (std::size_t b = 0; b < partition_.block_count(); ++b) {
    bool block_active = false;
    for (std::size_t i : partition_.block(b)) block_active |= source_[i] > 0.0;
    if (!block_active) continue;
    for (std::size_t i : partition_.block(b)) {
      if (model_[i] <= 0.0) {
        throw SupportError("likelihood instance: model has zero mass at index " +
                           std::to_string(i) + " inside an active block");
      }
    }
  }
}

namespace {

// Shared kernel for f_constant and delta_p: the numerator inside the block
// mean is p(x) for f and phat(x) for delta_p.
double block_mean_log_ratio(const LikelihoodInstance& inst, const FiniteDistribution& numerator,
                            LogUnit unit) {
  const FiniteDistribution& p = inst.source();
  double total = 0.0;
  for (std::size_t b = 0; b < inst.partition().block_count(); ++b) {
    const auto& block = inst.partition().block(b);
    const double inv_size = 1.0 / static_cast<double>(block.size());
    for (std::size_t x : block) {
      if (p[x] == 0.0) continue;
      double mean = 0.0;
      for (std::size_t member : block) {
        if (p[member] <= 0.0) {
          throw SupportError("synset mean: source has zero mass at block member " +
                             std::to_string(member) + " referenced from index " +
                             std::to_string(x));
        }
        mean += unit_log(numerator[x] / p[member], unit);
      }
      total += p[x] * inv_size * mean;
    }
  }
  return total;
}

}  // namespace

double f_constant(const LikelihoodInstance& inst, LogUnit unit) {
  return block_mean_log_ratio(inst, inst.source(), unit);
}

double delta_p(const LikelihoodInstance& inst, LogUnit unit) {
  return block_mean_log_ratio(inst, inst.model(), unit);
}

double divergence_identity_residual(const LikelihoodInstance& inst) {
  return f_constant(inst) - kl_divergence(inst.source(), inst.model()) - delta_p(inst);
}

double expected_distortion(const FiniteDistribution& source, const SynsetPartition& partition,
                           const Matrix& recon, const DistortionMatrix& metric) {
  if (partition.alphabet_size() != source.size()) {
    throw ValidationError("expected_distortion: partition/alphabet mismatch");
  }
  if (metric.source_size() != source.size()) {
    throw ValidationError("expected_distortion: distortion rows do not match the source alphabet");
  }
  if (recon.size() != partition.block_count()) {
    throw ValidationError("expected_distortion: recon needs one row per block");
  }
  validate_stochastic_rows(recon, metric.recon_size(), "recon");

  double total = 0.0;
  for (std::size_t x = 0; x < source.size(); ++x) {
    if (source[x] == 0.0) continue;
    const auto& row = recon[partition.block_of(x)];
    double inner = 0.0;
    for (std::size_t xhat = 0; xhat < row.size(); ++xhat) {
      inner += row[xhat] * metric.at(x, xhat);
    }
    total += source[x] * inner;
  }
  return total;
}

GaussianReduction gaussian_reduction(std::span<const double> x, std::span<const double> xhat,
                                     double sigma2) {
  if (x.size() != xhat.size() || x.empty()) {
    throw ValidationError("gaussian_reduction: vectors must be non-empty and equally sized");
  }
  if (!(sigma2 > 0.0)) throw ValidationError("gaussian_reduction: sigma2 must be positive");

  double sq = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = x[i] - xhat[i];
    sq += r * r;
  }
  GaussianReduction out{};
  out.dim = x.size();
  out.sigma2 = sigma2;
  out.weighted_mse = sq / (2.0 * sigma2 * std::log(2.0));
  out.constant = 0.5 * static_cast<double>(x.size()) * std::log2(2.0 * std::numbers::pi * sigma2);
  out.nll = out.weighted_mse + out.constant;
  return out;
}

namespace {

// Euclidean projection onto the probability simplex (Held et al.).
std::vector<double> project_to_simplex(std::vector<double> v) {
  std::vector<double> sorted = v;
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double cumulative = 0.0;
  double theta = 0.0;
  std::size_t support = 0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    cumulative += sorted[k];
    const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (sorted[k] - candidate > 0.0) {
      theta = candidate;
      support = k + 1;
    }
  }
  (void)support;
  for (double& entry : v) entry = std::max(0.0, entry - theta);
  return v;
}

}  // namespace

FiniteDistribution fit_model_to_source(const FiniteDistribution& source,
                                       const FiniteDistribution& init, double kl_tol,
                                       int max_iters) {
  if (source.size() != init.size()) {
    throw ValidationError("fit_model_to_source: alphabet sizes differ");
  }
  std::vector<double> m = init.probs();
  // Keep iterates strictly positive where the source is positive so the KL
  // objective stays finite.
  const double floor = 1e-300;
  auto kl_of = [&](const std::vector<double>& cand) {
    double kl = 0.0;
    for (std::size_t i = 0; i < source.size(); ++i) {
      if (source[i] == 0.0) continue;
      if (cand[i] <= 0.0) return std::numeric_limits<double>::infinity();
      kl += source[i] * std::log2(source[i] / cand[i]);
    }
    return kl;
  };

  double current = kl_of(m);
  double step = 0.5;
  for (int iter = 0; iter < max_iters && current > kl_tol; ++iter) {
    // gradient of KL(p||m) wrt m in nats: -p_i / m_i
    std::vector<double> candidate(m.size());
    bool improved = false;
    for (int backtrack = 0; backtrack < 60; ++backtrack) {
      for (std::size_t i = 0; i < m.size(); ++i) {
        const double g = source[i] > 0.0 ? -source[i] / std::max(m[i], floor) : 0.0;
        candidate[i] = m[i] - step * g;
      }
      candidate = project_to_simplex(std::move(candidate));
      const double next = kl_of(candidate);
      if (next < current) {
        m = candidate;
        current = next;
        improved = true;
        step *= 1.5;
        break;
      }
      step *= 0.5;
    }
    if (!improved) break;
  }
  return FiniteDistribution(std::move(m), true);
}

}  // namespace synrdp
