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

#ifndef SYNRDP_RDP_HPP_
#define SYNRDP_RDP_HPP_

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "synrdp/distortion.hpp"
#include "synrdp/distribution.hpp"
#include "synrdp/measures.hpp"

namespace synrdp {

inline constexpr double kNoPerceptionBudget = std::numeric_limits<double>::infinity();

// Row-stochastic conditional p(xhat | x); the decision variable of the
// RD and RDP solvers.
class Channel {
 public:
  explicit Channel(Matrix rows);

  std::size_t in_size() const { return rows_.size(); }
  std::size_t out_size() const { return rows_[0].size(); }
  double at(std::size_t x, std::size_t xhat) const { return rows_[x][xhat]; }
  const Matrix& rows() const { return rows_; }

  FiniteDistribution pushforward(const FiniteDistribution& p) const;
  JointDistribution joint(const FiniteDistribution& p) const;
  double expected_distortion(const FiniteDistribution& p, const DistortionMatrix& delta) const;

  static Channel identity(std::size_t n);
  // Every row equal to `row` (zero-rate channel).
  static Channel constant_rows(const FiniteDistribution& row, std::size_t in_size);

 private:
  Matrix rows_;
};

// One solved point of a rate-distortion(-perception) problem. Rates and the
// perception budget are in bits; the perception measure is KL(p_X || p_Xhat)
// with p_Xhat the pushforward of the source through the channel.
struct RdpPoint {
  double d_target;
  double p_target;  // kNoPerceptionBudget disables the constraint
  double rate;      // bits
  Channel channel;
  double achieved_d;
  double achieved_p;  // bits
  int iters;
  bool converged;
};

struct SolverConfig {
  int max_iters = 20000;    // inner iterations per Lagrangian solve
  double tol = 1e-12;       // convergence threshold on rate/objective change
  int bisect_iters = 60;    // bisection steps per Lagrange multiplier
  int outer_rounds = 4;     // coordinate rounds over (lambda_d, lambda_p)
  int restarts = 5;         // seeded initializations, best kept
  std::uint64_t seed = 1;
};

struct BaIterate {
  double rate;        // bits
  double distortion;
};

// Classical Blahut-Arimoto at a fixed Lagrangian slope (bits per distortion
// unit, slope <= 0). Returns the converged (D, R) point on the RD curve.
// `trace`, when given, receives the per-iteration (rate, distortion) pairs;
// the descent guarantee of the alternating minimization is on the
// Lagrangian rate - slope * distortion, which is non-increasing.
// Throws SolverError carrying the last iterate on non-convergence.
RdpPoint blahut_arimoto(const FiniteDistribution& p, const DistortionMatrix& delta, double slope,
                        const SolverConfig& cfg = {}, std::vector<BaIterate>* trace = nullptr);

// R(D) at a requested distortion, found by bisecting the slope. The D = 0
// corner is evaluated analytically through the zero-distortion deterministic
// channel instead of a slope limit.
RdpPoint rd_rate_at(const FiniteDistribution& p, const DistortionMatrix& delta, double d_target,
                    const SolverConfig& cfg = {});

// Perception measure for rdp_solve. KL(p_X || p_Xhat) is the primary mode;
// total variation is available behind the same interface but carries no
// acceptance claims.
enum class PerceptionMeasure { kKl, kTotalVariation };

// R(D, P): minimum mutual information subject to E[Delta] <= d_target and
// d(p, pushforward) <= p_target (KL in bits by default). Double-Lagrangian
// objective minimized by projected gradient on softmax-parameterized channel
// rows with outer bisection on the multipliers. Throws InfeasibleError with
// the binding constraint when no channel can satisfy the targets.
RdpPoint rdp_solve(const FiniteDistribution& p, const DistortionMatrix& delta, double d_target,
                   double p_target, const SolverConfig& cfg = {},
                   PerceptionMeasure perception = PerceptionMeasure::kKl);

// Minimum expected distortion over channels whose pushforward matches
// `target_marginal` (a linear program, solved by the projected-gradient
// machinery with an increasing divergence penalty). Used for infeasibility
// reporting; `best`, when non-null, receives the minimizing channel.
double channel_min_distortion(const FiniteDistribution& p, const DistortionMatrix& delta,
                              const FiniteDistribution& target_marginal,
                              const SolverConfig& cfg = {}, Channel* best = nullptr);

// Coding limit for semantic-lossless synonymous coding: the semantic entropy
// of the source under the partition (the ideal operating point).
double synonymous_rate(const FiniteDistribution& p, const SynsetPartition& s);

struct DegenerationAssertion {
  std::string name;
  double residual;
  bool pass;
};

struct DegenerationReport {
  std::vector<DegenerationAssertion> assertions;
  bool all_pass;
};

// Cross-checks the degeneration claims: (a) singleton partition recovers the
// lossless corner H(p) both as a synonymous rate and as the D = 0 RD corner,
// (b) the RDP solver with the perception constraint disabled reproduces
// Blahut-Arimoto, (c) synonymous_rate(p, s) <= entropy(p). Failures are
// flagged in the report, not thrown.
DegenerationReport degeneration_suite(const FiniteDistribution& p, const DistortionMatrix& delta,
                                      const SynsetPartition& s, const SolverConfig& cfg = {});

struct SemanticMiComparison {
  double i_semantic;
  double i_syntactic;
};

// Single-side semantic mutual information vs plain mutual information of the
// same joint; the semantic value can never exceed the syntactic one.
SemanticMiComparison semantic_mi_comparison(const JointDistribution& j,
                                            const SynsetPartition& s_out);

}  // namespace synrdp

#endif  // SYNRDP_RDP_HPP_
