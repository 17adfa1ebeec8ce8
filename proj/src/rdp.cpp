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

#include "synrdp/rdp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "synrdp/error.hpp"
#include "synrdp/rng.hpp"

namespace synrdp {

namespace {

constexpr double kLn2 = 0.6931471805599453;
// Acceptance slack while bisecting the multipliers; well inside the 1e-6
// the returned point must satisfy.
constexpr double kBisectSlack = 1e-8;
constexpr double kFeasibilitySlack = 1e-6;

double kl_or_inf(const FiniteDistribution& p, const FiniteDistribution& q) {
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] <= 0.0) return std::numeric_limits<double>::infinity();
    d += p[i] * std::log2(p[i] / q[i]);
  }
  return d;
}

}  // namespace

Channel::Channel(Matrix rows) : rows_(std::move(rows)) {
  if (rows_.empty() || rows_[0].empty()) throw ValidationError("channel: table must be non-empty");
  validate_stochastic_rows(rows_, rows_[0].size(), "channel");
}

FiniteDistribution Channel::pushforward(const FiniteDistribution& p) const {
  if (p.size() != in_size()) throw ValidationError("channel: source alphabet mismatch");
  std::vector<double> q(out_size(), 0.0);
  for (std::size_t x = 0; x < in_size(); ++x)
    for (std::size_t y = 0; y < out_size(); ++y) q[y] += p[x] * rows_[x][y];
  return FiniteDistribution(std::move(q), true);
}

JointDistribution Channel::joint(const FiniteDistribution& p) const {
  if (p.size() != in_size()) throw ValidationError("channel: source alphabet mismatch");
  Matrix mass(in_size(), std::vector<double>(out_size()));
  for (std::size_t x = 0; x < in_size(); ++x)
    for (std::size_t y = 0; y < out_size(); ++y) mass[x][y] = p[x] * rows_[x][y];
  return JointDistribution(std::move(mass), true);
}

double Channel::expected_distortion(const FiniteDistribution& p,
                                    const DistortionMatrix& delta) const {
  double d = 0.0;
  for (std::size_t x = 0; x < in_size(); ++x)
    for (std::size_t y = 0; y < out_size(); ++y) d += p[x] * rows_[x][y] * delta.at(x, y);
  return d;
}

Channel Channel::identity(std::size_t n) {
  Matrix rows(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) rows[i][i] = 1.0;
  return Channel(std::move(rows));
}

Channel Channel::constant_rows(const FiniteDistribution& row, std::size_t in_size) {
  Matrix rows(in_size, row.probs());
  return Channel(std::move(rows));
}

// ---------------------------------------------------------------------------
// Blahut-Arimoto
// ---------------------------------------------------------------------------

RdpPoint blahut_arimoto(const FiniteDistribution& p, const DistortionMatrix& delta, double slope,
                        const SolverConfig& cfg, std::vector<BaIterate>* trace) {
  if (slope > 0.0) throw ValidationError("blahut_arimoto: slope must be <= 0");
  if (delta.source_size() != p.size()) {
    throw ValidationError("blahut_arimoto: distortion rows do not match the source alphabet");
  }
  const std::size_t nx = p.size();
  const std::size_t ny = delta.recon_size();

  Matrix weight(nx, std::vector<double>(ny));
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y) weight[x][y] = std::exp2(slope * delta.at(x, y));

  // Full-support start so no reconstruction symbol is ruled out a priori.
  std::vector<double> q(ny, 1.0 / static_cast<double>(ny));
  Matrix cond(nx, std::vector<double>(ny));

  double rate = std::numeric_limits<double>::infinity();
  double dist = 0.0;
  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    for (std::size_t x = 0; x < nx; ++x) {
      double z = 0.0;
      for (std::size_t y = 0; y < ny; ++y) z += q[y] * weight[x][y];
      for (std::size_t y = 0; y < ny; ++y) cond[x][y] = q[y] * weight[x][y] / z;
    }
    std::vector<double> q_next(ny, 0.0);
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t y = 0; y < ny; ++y) q_next[y] += p[x] * cond[x][y];
    q = std::move(q_next);

    double new_rate = 0.0;
    dist = 0.0;
    for (std::size_t x = 0; x < nx; ++x) {
      for (std::size_t y = 0; y < ny; ++y) {
        const double mass = p[x] * cond[x][y];
        if (mass > 0.0) new_rate += mass * std::log2(cond[x][y] / q[y]);
        dist += mass * delta.at(x, y);
      }
    }
    new_rate = std::max(new_rate, 0.0);
    if (trace) trace->push_back(BaIterate{new_rate, dist});
    const bool settled = std::abs(new_rate - rate) < cfg.tol;
    rate = new_rate;
    if (settled) {
      Channel channel(cond);
      const double perception = kl_or_inf(p, channel.pushforward(p));
      return RdpPoint{dist, kNoPerceptionBudget, rate,    std::move(channel),
                      dist, perception,          iter,    true};
    }
  }
  throw SolverError("blahut_arimoto: no convergence within " + std::to_string(cfg.max_iters) +
                        " iterations",
                    rate, dist);
}

namespace {

// Deterministic channel sending each source symbol to its cheapest
// reconstruction; realizes D = 0 when the cheapest cost is zero.
RdpPoint zero_distortion_corner(const FiniteDistribution& p, const DistortionMatrix& delta) {
  Matrix rows(p.size(), std::vector<double>(delta.recon_size(), 0.0));
  double d = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    std::size_t best = 0;
    for (std::size_t y = 1; y < delta.recon_size(); ++y) {
      if (delta.at(x, y) < delta.at(x, best)) best = y;
    }
    rows[x][best] = 1.0;
    d += p[x] * delta.at(x, best);
  }
  if (d > 0.0) {
    throw InfeasibleError("distortion", "rd_rate_at: no channel achieves zero distortion; floor " +
                                            std::to_string(d));
  }
  Channel channel(std::move(rows));
  const double rate = mutual_information(channel.joint(p));
  const double perception = kl_or_inf(p, channel.pushforward(p));
  return RdpPoint{0.0, kNoPerceptionBudget, rate, std::move(channel), 0.0, perception, 0, true};
}

// Cheapest x-independent reconstruction; its cost is where R(D) hits zero.
std::pair<double, std::size_t> zero_rate_floor(const FiniteDistribution& p,
                                               const DistortionMatrix& delta) {
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_col = 0;
  for (std::size_t y = 0; y < delta.recon_size(); ++y) {
    double d = 0.0;
    for (std::size_t x = 0; x < p.size(); ++x) d += p[x] * delta.at(x, y);
    if (d < best) {
      best = d;
      best_col = y;
    }
  }
  return {best, best_col};
}

}  // namespace

RdpPoint rd_rate_at(const FiniteDistribution& p, const DistortionMatrix& delta, double d_target,
                    const SolverConfig& cfg) {
  if (!(d_target >= 0.0)) throw ValidationError("rd_rate_at: d_target must be >= 0");
  if (d_target == 0.0) return zero_distortion_corner(p, delta);

  const auto [d_guess, best_col] = zero_rate_floor(p, delta);
  if (d_target >= d_guess) {
    std::vector<double> row(delta.recon_size(), 0.0);
    row[best_col] = 1.0;
    Channel channel = Channel::constant_rows(FiniteDistribution(std::move(row), true), p.size());
    const double perception = kl_or_inf(p, channel.pushforward(p));
    return RdpPoint{d_target, kNoPerceptionBudget, 0.0, std::move(channel),
                    d_guess,  perception,          0,   true};
  }

  // D(slope) is non-decreasing as the slope rises towards zero; bisect it.
  double lo = -200.0;  // 2^(-200 * Delta) still representable
  double hi = -1e-12;
  RdpPoint lo_point = blahut_arimoto(p, delta, lo, cfg);
  RdpPoint hi_point = blahut_arimoto(p, delta, hi, cfg);
  if (d_target <= lo_point.achieved_d) return lo_point;
  for (int i = 0; i < cfg.bisect_iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    RdpPoint mid_point = blahut_arimoto(p, delta, mid, cfg);
    if (mid_point.achieved_d > d_target) {
      hi = mid;
      hi_point = std::move(mid_point);
    } else {
      lo = mid;
      lo_point = std::move(mid_point);
    }
  }
  if (std::abs(lo_point.achieved_d - d_target) < 1e-7) return lo_point;

  // The curve is linear across the remaining gap (constant-slope segment);
  // mix the bracketing channels to land exactly on d_target.
  const double gap = hi_point.achieved_d - lo_point.achieved_d;
  const double t = gap > 0.0 ? (d_target - lo_point.achieved_d) / gap : 0.0;
  Matrix rows(p.size(), std::vector<double>(delta.recon_size()));
  for (std::size_t x = 0; x < p.size(); ++x)
    for (std::size_t y = 0; y < delta.recon_size(); ++y)
      rows[x][y] = (1.0 - t) * lo_point.channel.at(x, y) + t * hi_point.channel.at(x, y);
  Channel channel(std::move(rows));
  const double d = channel.expected_distortion(p, delta);
  const double rate = mutual_information(channel.joint(p));
  const double perception = kl_or_inf(p, channel.pushforward(p));
  return RdpPoint{d_target,
                  kNoPerceptionBudget,
                  rate,
                  std::move(channel),
                  d,
                  perception,
                  lo_point.iters + hi_point.iters,
                  lo_point.converged && hi_point.converged};
}

// ---------------------------------------------------------------------------
// Double-Lagrangian projected-gradient solver
// ---------------------------------------------------------------------------

namespace {

struct LagrangianProblem {
  const FiniteDistribution* p;
  const DistortionMatrix* delta;
  const FiniteDistribution* perception_target;  // null disables the divergence term
  double rate_weight;                           // 1 for RDP, 0 for the LP floor
  double lambda_d;
  double lambda_p;
  PerceptionMeasure measure = PerceptionMeasure::kKl;
};

struct Evaluation {
  double objective_nats;
  double rate_bits;
  double distortion;
  double perception_bits;
};

Matrix softmax_rows(const Matrix& z) {
  Matrix q(z.size(), std::vector<double>(z[0].size()));
  for (std::size_t x = 0; x < z.size(); ++x) {
    double zmax = z[x][0];
    for (double v : z[x]) zmax = std::max(zmax, v);
    double sum = 0.0;
    for (std::size_t y = 0; y < z[x].size(); ++y) {
      q[x][y] = std::exp(z[x][y] - zmax);
      sum += q[x][y];
    }
    for (double& v : q[x]) v /= sum;
  }
  return q;
}

Evaluation evaluate(const LagrangianProblem& prob, const Matrix& rows) {
  const FiniteDistribution& p = *prob.p;
  const std::size_t nx = rows.size();
  const std::size_t ny = rows[0].size();
  std::vector<double> q(ny, 0.0);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y) q[y] += p[x] * rows[x][y];

  double mi_nats = 0.0;
  double dist = 0.0;
  for (std::size_t x = 0; x < nx; ++x) {
    if (p[x] == 0.0) continue;
    for (std::size_t y = 0; y < ny; ++y) {
      const double mass = p[x] * rows[x][y];
      if (mass > 0.0) {
        mi_nats += mass * std::log(rows[x][y] / q[y]);
        dist += mass * prob.delta->at(x, y);
      }
    }
  }
  double divergence = 0.0;  // nats for KL, plain value for total variation
  double reported = 0.0;
  if (prob.perception_target) {
    const FiniteDistribution& t = *prob.perception_target;
    if (prob.measure == PerceptionMeasure::kKl) {
      for (std::size_t y = 0; y < ny; ++y) {
        if (t[y] == 0.0) continue;
        if (q[y] <= 0.0) {
          divergence = std::numeric_limits<double>::infinity();
          break;
        }
        divergence += t[y] * std::log(t[y] / q[y]);
      }
      reported = divergence / kLn2;
    } else {
      for (std::size_t y = 0; y < ny; ++y) divergence += 0.5 * std::abs(t[y] - q[y]);
      reported = divergence;
    }
  }
  Evaluation e{};
  e.rate_bits = std::max(mi_nats, 0.0) / kLn2;
  e.distortion = dist;
  e.perception_bits = reported;
  e.objective_nats =
      prob.rate_weight * mi_nats + prob.lambda_d * dist + prob.lambda_p * divergence;
  return e;
}

// d objective / d z for softmax-parameterized rows.
Matrix logit_gradient(const LagrangianProblem& prob, const Matrix& rows) {
  const FiniteDistribution& p = *prob.p;
  const std::size_t nx = rows.size();
  const std::size_t ny = rows[0].size();
  std::vector<double> q(ny, 0.0);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y) q[y] += p[x] * rows[x][y];

  Matrix grad(nx, std::vector<double>(ny, 0.0));
  for (std::size_t x = 0; x < nx; ++x) {
    if (p[x] == 0.0) continue;
    double row_dot = 0.0;
    std::vector<double> gq(ny);
    for (std::size_t y = 0; y < ny; ++y) {
      double g = prob.lambda_d * prob.delta->at(x, y);
      if (prob.rate_weight != 0.0 && rows[x][y] > 0.0 && q[y] > 0.0) {
        g += prob.rate_weight * std::log(rows[x][y] / q[y]);
      }
      if (prob.perception_target) {
        const double t = (*prob.perception_target)[y];
        if (prob.measure == PerceptionMeasure::kKl) {
          if (q[y] > 0.0) g -= prob.lambda_p * t / q[y];
        } else {
          // subgradient of 0.5 |t - q|
          g += prob.lambda_p * 0.5 * (q[y] > t ? 1.0 : (q[y] < t ? -1.0 : 0.0));
        }
      }
      g *= p[x];
      gq[y] = g;
      row_dot += rows[x][y] * g;
    }
    for (std::size_t y = 0; y < ny; ++y) grad[x][y] = rows[x][y] * (gq[y] - row_dot);
  }
  return grad;
}

struct InnerResult {
  Matrix z;
  Matrix rows;
  Evaluation eval;
  int iters;
};

// Shift each row so its max logit is 0 and floor the rest; keeps the
// softmax away from gradient-killing saturation without moving the channel.
void normalize_logits(Matrix& z) {
  for (auto& row : z) {
    double zmax = row[0];
    for (double v : row) zmax = std::max(zmax, v);
    for (double& v : row) v = std::max(v - zmax, -50.0);
  }
}

InnerResult minimize_lagrangian(const LagrangianProblem& prob, Matrix z, const SolverConfig& cfg) {
  normalize_logits(z);
  Matrix rows = softmax_rows(z);
  Evaluation eval = evaluate(prob, rows);
  double step = 1.0;
  int stall = 0;
  int iter = 0;
  for (; iter < cfg.max_iters; ++iter) {
    const Matrix grad = logit_gradient(prob, rows);
    double grad_sq = 0.0;
    for (const auto& row : grad)
      for (double g : row) grad_sq += g * g;
    if (grad_sq < 1e-26) break;

    bool accepted = false;
    Matrix z_try(z.size(), std::vector<double>(z[0].size()));
    for (int backtrack = 0; backtrack < 60; ++backtrack) {
      for (std::size_t x = 0; x < z.size(); ++x)
        for (std::size_t y = 0; y < z[x].size(); ++y)
          z_try[x][y] = z[x][y] - step * grad[x][y];
      normalize_logits(z_try);
      Matrix rows_try = softmax_rows(z_try);
      Evaluation eval_try = evaluate(prob, rows_try);
      if (eval_try.objective_nats <= eval.objective_nats - 1e-4 * step * grad_sq) {
        const double gain = eval.objective_nats - eval_try.objective_nats;
        z.swap(z_try);
        rows = std::move(rows_try);
        eval = eval_try;
        step = std::min(step * 1.4, 1e6);
        accepted = true;
        stall = gain < cfg.tol * (1.0 + std::abs(eval.objective_nats)) ? stall + 1 : 0;
        break;
      }
      step *= 0.5;
      if (step < 1e-18) break;
    }
    if (!accepted || stall >= 8) break;
  }
  return InnerResult{std::move(z), std::move(rows), eval, iter};
}

// Deterministic starting points that track the multipliers. A stale warm
// start can sit in a softmax-saturated corner where the gradient is dead,
// so every solve races these against it and keeps the best objective.
std::vector<Matrix> deterministic_inits(const LagrangianProblem& prob) {
  const std::size_t nx = prob.p->size();
  const std::size_t ny = prob.delta->recon_size();
  std::vector<Matrix> inits;

  Matrix tilt(nx, std::vector<double>(ny));
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y) tilt[x][y] = -prob.lambda_d * prob.delta->at(x, y);
  inits.push_back(std::move(tilt));

  if (prob.perception_target) {
    // rows ~ target marginal: pushforward lands on the target exactly
    Matrix mimic(nx, std::vector<double>(ny));
    for (std::size_t x = 0; x < nx; ++x) {
      for (std::size_t y = 0; y < ny; ++y) {
        mimic[x][y] = std::log(std::max((*prob.perception_target)[y], 1e-12)) -
                      prob.lambda_d * prob.delta->at(x, y);
      }
    }
    inits.push_back(std::move(mimic));
  }
  return inits;
}

InnerResult solve_lagrangian(const LagrangianProblem& prob, const SolverConfig& cfg,
                             const Matrix* warm_start) {
  InnerResult best{};
  bool have_best = false;
  auto consider = [&](Matrix z) {
    InnerResult attempt = minimize_lagrangian(prob, std::move(z), cfg);
    if (!have_best || attempt.eval.objective_nats < best.eval.objective_nats) {
      best = std::move(attempt);
      have_best = true;
    }
  };
  if (warm_start) consider(*warm_start);
  for (Matrix& z : deterministic_inits(prob)) consider(std::move(z));
  if (!warm_start) {
    // seeded random restarts for the cold solve
    Xoshiro256 rng(cfg.seed);
    const std::size_t nx = prob.p->size();
    const std::size_t ny = prob.delta->recon_size();
    for (int r = 2; r < std::max(2, cfg.restarts); ++r) {
      Matrix z(nx, std::vector<double>(ny));
      for (auto& row : z)
        for (double& v : row) v = 2.0 * (rng.next_double() - 0.5);
      consider(std::move(z));
    }
  }
  return best;
}

}  // namespace

double channel_min_distortion(const FiniteDistribution& p, const DistortionMatrix& delta,
                              const FiniteDistribution& target_marginal, const SolverConfig& cfg,
                              Channel* best) {
  if (target_marginal.size() != delta.recon_size()) {
    throw ValidationError("channel_min_distortion: target marginal alphabet mismatch");
  }
  LagrangianProblem prob{&p, &delta, &target_marginal, 0.0, 1.0, 0.0};
  Matrix z;
  InnerResult result{};
  // Increasing penalty drives the pushforward onto the target marginal.
  for (double mu : {10.0, 1e2, 1e3, 1e4, 1e5, 1e6}) {
    prob.lambda_p = mu;
    result = solve_lagrangian(prob, cfg, z.empty() ? nullptr : &z);
    z = result.z;
  }
  if (best) *best = Channel(result.rows);
  return result.eval.distortion;
}

RdpPoint rdp_solve(const FiniteDistribution& p, const DistortionMatrix& delta, double d_target,
                   double p_target, const SolverConfig& cfg, PerceptionMeasure perception) {
  if (!(d_target >= 0.0)) throw ValidationError("rdp_solve: d_target must be >= 0");
  if (!(p_target >= 0.0)) throw ValidationError("rdp_solve: p_target must be >= 0");
  const bool perception_enabled = std::isfinite(p_target);
  if (perception_enabled && delta.recon_size() != p.size()) {
    throw ValidationError(
        "rdp_solve: perception constraint needs the reconstruction alphabet to equal the source "
        "alphabet");
  }
  if (delta.source_size() != p.size()) {
    throw ValidationError("rdp_solve: distortion rows do not match the source alphabet");
  }

  // Lossless corner: the identity channel is the unique zero-distortion
  // channel and already has perfect perception.
  if (d_target == 0.0) {
    RdpPoint corner = zero_distortion_corner(p, delta);
    corner.p_target = p_target;
    return corner;
  }

  // Zero-rate corner: with the pushforward pinned to p itself, the constant
  // channel p(xhat|x) = p(xhat) is the only zero-rate candidate.
  {
    Channel mimic = Channel::constant_rows(p, p.size());
    const double d = mimic.expected_distortion(p, delta);
    if (d <= d_target && 0.0 <= p_target) {
      return RdpPoint{d_target, p_target, 0.0, std::move(mimic), d, 0.0, 0, true};
    }
  }

  // Honest infeasibility reporting: when the perception budget is (near)
  // zero the pushforward must equal p, and the cheapest such channel sets a
  // distortion floor.
  if (perception_enabled && p_target < 1e-9) {
    const double floor = channel_min_distortion(p, delta, p, cfg);
    if (d_target < floor - 1e-6) {
      throw InfeasibleError("distortion",
                            "rdp_solve: perfect-perception distortion floor is " +
                                std::to_string(floor) + ", requested " + std::to_string(d_target));
    }
  }

  LagrangianProblem prob{&p, &delta, perception_enabled ? &p : nullptr, 1.0, 0.0, 0.0,
                         perception};

  Matrix warm;
  auto solve_at = [&](double lambda_d, double lambda_p, bool fresh) -> InnerResult {
    prob.lambda_d = lambda_d;
    prob.lambda_p = lambda_p;
    InnerResult r = solve_lagrangian(prob, cfg, (fresh || warm.empty()) ? nullptr : &warm);
    warm = r.z;
    return r;
  };

  // Smallest multiplier whose solution meets the budget; `achieved` deflates
  // monotonically as the multiplier grows.
  auto bisect_multiplier = [&](bool on_distortion, double budget, double other,
                               const char* binding) -> double {
    auto achieved = [&](const InnerResult& r) {
      return on_distortion ? r.eval.distortion : r.eval.perception_bits;
    };
    InnerResult at_zero =
        on_distortion ? solve_at(0.0, other, false) : solve_at(other, 0.0, false);
    if (achieved(at_zero) <= budget + kBisectSlack) return 0.0;
    double lo = 0.0;
    double hi = 1.0;
    for (int grow = 0;; ++grow) {
      InnerResult at_hi = on_distortion ? solve_at(hi * kLn2, other, false)
                                        : solve_at(other, hi * kLn2, false);
      if (achieved(at_hi) <= budget + kBisectSlack) break;
      lo = hi;
      hi *= 4.0;
      if (grow > 40) {
        throw InfeasibleError(binding, std::string("rdp_solve: cannot satisfy the ") + binding +
                                           " budget " + std::to_string(budget));
      }
    }
    for (int i = 0; i < cfg.bisect_iters; ++i) {
      const double mid = 0.5 * (lo + hi);
      InnerResult at_mid = on_distortion ? solve_at(mid * kLn2, other, false)
                                         : solve_at(other, mid * kLn2, false);
      if (achieved(at_mid) <= budget + kBisectSlack) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    return hi * kLn2;
  };

  double lambda_d = 0.0;
  double lambda_p = 0.0;
  const int rounds = std::max(1, cfg.outer_rounds);
  for (int round = 0; round < rounds; ++round) {
    lambda_d = bisect_multiplier(true, d_target, lambda_p, "distortion");
    if (perception_enabled) {
      lambda_p = bisect_multiplier(false, p_target, lambda_d, "perception");
    }
  }

  InnerResult final_result = solve_at(lambda_d, lambda_p, true);
  {
    InnerResult warmed = solve_at(lambda_d, lambda_p, false);
    if (warmed.eval.objective_nats < final_result.eval.objective_nats) {
      final_result = std::move(warmed);
    }
  }
  // Inflate a violated multiplier rather than returning an infeasible point.
  for (int repair = 0; repair < 60; ++repair) {
    const bool d_bad = final_result.eval.distortion > d_target + kFeasibilitySlack;
    const bool p_bad =
        perception_enabled && final_result.eval.perception_bits > p_target + kFeasibilitySlack;
    if (!d_bad && !p_bad) break;
    if (d_bad) lambda_d = std::max(0.01, lambda_d) * 2.0;
    if (p_bad) lambda_p = std::max(0.01, lambda_p) * 2.0;
    final_result = solve_at(lambda_d, lambda_p, false);
  }

  RdpPoint point{d_target,
                 p_target,
                 final_result.eval.rate_bits,
                 Channel(final_result.rows),
                 final_result.eval.distortion,
                 final_result.eval.perception_bits,
                 final_result.iters,
                 true};
  if (point.achieved_d > d_target + kFeasibilitySlack ||
      (perception_enabled && point.achieved_p > p_target + kFeasibilitySlack)) {
    throw SolverError("rdp_solve: solver could not reach a feasible channel", point.rate,
                      point.achieved_d);
  }
  return point;
}

double synonymous_rate(const FiniteDistribution& p, const SynsetPartition& s) {
  return semantic_entropy(p, s);
}

DegenerationReport degeneration_suite(const FiniteDistribution& p, const DistortionMatrix& delta,
                                      const SynsetPartition& s, const SolverConfig& cfg) {
  DegenerationReport report{};
  const double h = entropy(p);

  {
    const SynsetPartition singles = SynsetPartition::singletons(p.size());
    const double rate_residual = std::abs(synonymous_rate(p, singles) - h);
    const double corner_residual = std::abs(rd_rate_at(p, delta, 0.0, cfg).rate - h);
    report.assertions.push_back({"singleton_rate_equals_lossless_corner",
                                 std::max(rate_residual, corner_residual), false});
  }
  {
    const double d_mid = 0.5 * zero_rate_floor(p, delta).first;
    const RdpPoint rdp = rdp_solve(p, delta, d_mid, kNoPerceptionBudget, cfg);
    // compare on the curve at the distortion the solver actually achieved
    const double ba_rate = rd_rate_at(p, delta, rdp.achieved_d, cfg).rate;
    report.assertions.push_back(
        {"disabled_perception_matches_blahut_arimoto", std::abs(rdp.rate - ba_rate), false});
  }
  {
    const double excess = synonymous_rate(p, s) - h;
    report.assertions.push_back({"synonymous_rate_below_entropy", std::max(excess, 0.0), false});
  }

  report.all_pass = true;
  for (auto& assertion : report.assertions) {
    assertion.pass = assertion.residual < 1e-6;
    report.all_pass &= assertion.pass;
  }
  return report;
}

SemanticMiComparison semantic_mi_comparison(const JointDistribution& j,
                                            const SynsetPartition& s_out) {
  SemanticMiComparison out{};
  out.i_syntactic = mutual_information(j);
  out.i_semantic = single_side_semantic_mi(j, s_out);
  if (out.i_semantic > out.i_syntactic + 1e-12) {
    throw std::logic_error("semantic_mi_comparison: data-processing inequality violated");
  }
  return out;
}

}  // namespace synrdp
