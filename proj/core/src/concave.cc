// Copyright 2026 The Externet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "externet/concave.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include "externet/ascent.h"
#include "externet/contention.h"
#include "externet/error.h"
#include "externet/projection.h"

namespace externet {
namespace {

void RequireConcave(const Instance& inst, const char* op) {
  if (inst.regime() != Regime::kPositiveConcave) {
    throw Error(ErrorCode::kUnsupportedRegime,
                std::string(op) + " requires the PositiveConcave regime, got " +
                    RegimeName(inst.regime()));
  }
}

// s_j = a^i_j . x for every agent j.
std::vector<double> Influence(const Instance& inst, int item,
                              std::span<const double> x) {
  const int n = inst.n();
  const Matrix& a = inst.weights(item);
  std::vector<double> s(n, 0.0);
  for (int j = 0; j < n; ++j) {
    double acc = 0.0;
    for (int k = 0; k < n; ++k) acc += a(j, k) * x[k];
    s[j] = std::max(0.0, acc);
  }
  return s;
}

std::vector<double> InnerGradient(const Instance& inst, int item,
                                  std::span<const double> p,
                                  std::span<const double> x) {
  const int n = inst.n();
  const Matrix& a = inst.weights(item);
  const std::vector<double> s = Influence(inst, item, x);
  std::vector<double> grad(n, 0.0);
  for (int j = 0; j < n; ++j) {
    const ExternalitySpec& f = inst.externality(item, j);
    grad[j] += EvalExternality(f, s[j]) - p[j];
    const double w = x[j] * ExternalitySlope(f, s[j]);
    if (w == 0.0) continue;
    for (int l = 0; l < n; ++l) grad[l] += w * a(j, l);
  }
  return grad;
}

// (g(x) - p) . y.
double Bilinear(const Instance& inst, int item, std::span<const double> p,
                std::span<const double> x, std::span<const double> y) {
  const std::vector<double> s = Influence(inst, item, x);
  double total = 0.0;
  for (int j = 0; j < inst.n(); ++j) {
    if (y[j] == 0.0) continue;
    total += y[j] * (EvalExternality(inst.externality(item, j), s[j]) - p[j]);
  }
  return total;
}

// Projected gradient ascent on h with backtracking.
void Polish(const Instance& inst, int item, std::span<const double> p,
            int iters, std::vector<double>* x, double* value) {
  const int n = inst.n();
  std::vector<double> trial(n);
  double step = 1.0;
  for (int it = 0; it < iters; ++it) {
    const std::vector<double> grad = InnerGradient(inst, item, p, *x);
    bool improved = false;
    for (int halving = 0; halving < 40; ++halving) {
      bool moved = false;
      for (int l = 0; l < n; ++l) {
        trial[l] = std::clamp((*x)[l] + step * grad[l], 0.0, 1.0);
        if (trial[l] != (*x)[l]) moved = true;
      }
      if (!moved) break;
      const double v = InnerObjective(inst, item, p, trial);
      if (v > *value) {
        *x = trial;
        *value = v;
        improved = true;
        step *= 2.0;
        break;
      }
      step *= 0.5;
    }
    if (!improved) break;
  }
}

}  // namespace

double InnerObjective(const Instance& inst, int item, std::span<const double> p,
                      std::span<const double> x) {
  const std::vector<double> s = Influence(inst, item, x);
  double total = 0.0;
  for (int j = 0; j < inst.n(); ++j) {
    if (x[j] != 0.0) {
      total += x[j] * EvalExternality(inst.externality(item, j), s[j]);
    }
    total -= p[j] * x[j];
  }
  return total;
}

InnerResult InnerArgmax(const Instance& inst, int item,
                        std::span<const double> p, const ConcaveConfig& cfg,
                        std::span<const double> warm_start) {
  const int n = inst.n();
  if (static_cast<int>(p.size()) != n) {
    throw Error(ErrorCode::kInvalidInput, "dual vector must have n entries");
  }
  InnerResult out;
  std::vector<double> x(n, 0.5);
  if (!warm_start.empty()) {
    if (static_cast<int>(warm_start.size()) != n) {
      throw Error(ErrorCode::kInvalidInput, "warm start must have n entries");
    }
    for (int l = 0; l < n; ++l) x[l] = std::clamp(warm_start[l], 0.0, 1.0);
  }
  const std::vector<double> start = x;

  // Origin is always available and scores 0.
  out.x.assign(n, 0.0);
  out.objective = 0.0;
  auto consider = [&](const std::vector<double>& cand) {
    const double v = InnerObjective(inst, item, p, cand);
    if (v > out.objective) {
      out.objective = v;
      out.x = cand;
    }
  };

  std::vector<double> y(n, 0.0);
  double prev = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < cfg.inner_iters; ++t) {
    const std::vector<double> s = Influence(inst, item, x);
    for (int j = 0; j < n; ++j) {
      const double gain =
          EvalExternality(inst.externality(item, j), s[j]) - p[j];
      y[j] = gain > 0.0 ? 1.0 : 0.0;
    }
    out.alternating_trace.push_back(Bilinear(inst, item, p, x, y));
    consider(y);

    // The slice (g(x) - p) . y is concave and nondecreasing in x.
    for (int step = 0; step < cfg.inner_ascent_steps; ++step) {
      const std::vector<double> sx = Influence(inst, item, x);
      std::vector<double> grad(n, 0.0);
      double gmax = 0.0;
      for (int j = 0; j < n; ++j) {
        if (y[j] == 0.0) continue;
        const double slope = ExternalitySlope(inst.externality(item, j), sx[j]);
        for (int l = 0; l < n; ++l) grad[l] += slope * inst.weight(item, j, l);
      }
      for (double g : grad) gmax = std::max(gmax, g);
      if (gmax <= 0.0) break;
      const double eta = 1.0 / (gmax * std::sqrt(step + 1.0));
      bool moved = false;
      for (int l = 0; l < n; ++l) {
        const double next = std::min(1.0, x[l] + eta * grad[l]);
        if (next != x[l]) moved = true;
        x[l] = next;
      }
      if (!moved) break;
    }
    const double after = Bilinear(inst, item, p, x, y);
    out.alternating_trace.push_back(after);
    consider(x);
    if (after - prev < cfg.inner_tol) break;
    prev = after;
  }

  std::vector<std::vector<double>> starts = {out.x, start};
  if (n <= cfg.vertex_enum_max_n && n < 63) {
    // Best binary vertex: h(1_S) = value of S minus p(S).
    std::uint64_t best_mask = 0;
    double best = 0.0;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
      double v = ItemValueMask(inst, item, mask);
      for (int j = 0; j < n; ++j) {
        if (mask >> j & 1) v -= p[j];
      }
      if (v > best) {
        best = v;
        best_mask = mask;
      }
    }
    std::vector<double> vertex(n, 0.0);
    for (int j = 0; j < n; ++j) vertex[j] = (best_mask >> j & 1) ? 1.0 : 0.0;
    consider(vertex);
    starts.push_back(std::move(vertex));
  }
  for (std::vector<double>& s : starts) {
    double v = InnerObjective(inst, item, p, s);
    Polish(inst, item, p, cfg.polish_iters, &s, &v);
    if (v > out.objective) {
      out.objective = v;
      out.x = std::move(s);
    }
  }
  return out;
}

double ConcaveRelaxationObjective(const Instance& inst, const Matrix& x) {
  if (x.rows() != inst.n() || x.cols() != inst.m()) {
    throw Error(ErrorCode::kInvalidInput, "matrix must be n x m");
  }
  double total = 0.0;
  std::vector<double> p(inst.n(), 0.0);
  for (int i = 0; i < inst.m(); ++i) {
    total += InnerObjective(inst, i, p, x.Column(i));
  }
  return total;
}

PrimalDualTrace PrimalDualSolve(const Instance& inst,
                                const ConcaveConfig& cfg) {
  RequireConcave(inst, "primal-dual solver");
  const int n = inst.n();
  const int m = inst.m();
  long iters = cfg.iters;
  if (iters <= 0) {
    iters = static_cast<long>(std::ceil(n * static_cast<double>(m) * m /
                                        (cfg.epsilon * cfg.epsilon)));
  }
  iters = std::clamp<long>(iters, 1, std::max(1, cfg.max_iters));

  PrimalDualTrace trace;
  std::vector<double> p(n, 0.0);
  std::vector<std::vector<double>> cols(m);
  Matrix best_raw(n, m);
  double best_dual = std::numeric_limits<double>::infinity();
  trace.iterates.reserve(iters);
  for (long k = 0; k < iters; ++k) {
    double dual = std::accumulate(p.begin(), p.end(), 0.0);
    std::vector<double> load(n, 0.0);
    for (int i = 0; i < m; ++i) {
      InnerResult r = InnerArgmax(inst, i, p, cfg, cols[i]);
      dual += r.objective;
      for (int j = 0; j < n; ++j) load[j] += r.x[j];
      cols[i] = std::move(r.x);
    }
    trace.iterates.push_back({static_cast<int>(k), p, dual});
    if (dual < best_dual) {
      best_dual = dual;
      trace.best_k = static_cast<int>(k);
      for (int i = 0; i < m; ++i) best_raw.SetColumn(i, cols[i]);
    }
    const double alpha =
        cfg.step_scale /
        (m * std::sqrt(static_cast<double>(n) * std::max<long>(k, 1)));
    for (int j = 0; j < n; ++j) p[j] -= alpha * (1.0 - load[j]);
  }

  double infeas = 0.0;
  for (int j = 0; j < n; ++j) {
    double row = 0.0;
    for (int i = 0; i < m; ++i) row += best_raw(j, i);
    infeas += (row - 1.0) * (row - 1.0);
  }
  trace.infeasibility = std::sqrt(infeas);
  trace.x_star = ProjectRowStochastic(best_raw);
  trace.primal_value = ConcaveRelaxationObjective(inst, trace.x_star);
  trace.gap_estimate = best_dual - trace.primal_value;
  return trace;
}

std::vector<int> IndependentRoundPartial(const Matrix& x, Rng& rng) {
  std::vector<int> assign(x.rows(), -1);
  for (int j = 0; j < x.rows(); ++j) {
    const double u = rng.Uniform();
    double acc = 0.0;
    for (int i = 0; i < x.cols(); ++i) {
      acc += x(j, i);
      if (u < acc) {
        assign[j] = i;
        break;
      }
    }
  }
  return assign;
}

Allocation IndependentRound(const Instance& inst, const Matrix& x,
                            std::uint64_t seed) {
  ValidateFractional(inst, x);
  Rng rng(seed);
  Allocation out;
  out.assign = IndependentRoundPartial(x, rng);
  // Only reachable when a row sums to slightly less than one.
  for (int j = 0; j < x.rows(); ++j) {
    if (out.assign[j] >= 0) continue;
    for (int i = x.cols() - 1; i >= 0; --i) {
      if (x(j, i) > 0.0) {
        out.assign[j] = i;
        break;
      }
    }
    if (out.assign[j] < 0) out.assign[j] = 0;
  }
  return out;
}

double IndependentRoundingFactor(double eta) {
  return (1.0 - 1.0 / std::sqrt(2.0)) * (1.0 - std::exp(-eta * eta / 2.0));
}

double BetaRelaxationObjective(const Instance& inst, const Matrix& x,
                               Matrix* grad) {
  const int n = inst.n();
  const int m = inst.m();
  if (x.rows() != n || x.cols() != m) {
    throw Error(ErrorCode::kInvalidInput, "matrix must be n x m");
  }
  double total = 0.0;
  int pair[2];
  for (int i = 0; i < m; ++i) {
    const Matrix& a = inst.weights(i);
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) {
        if (a(j, k) != 0.0) s += a(j, k) * std::min(x(j, i), x(k, i));
      }
      const ExternalitySpec& f = inst.externality(i, j);
      total += EvalExternality(f, s);
      if (grad == nullptr) continue;
      const double slope = ExternalitySlope(f, s);
      if (slope == 0.0) continue;
      for (int k = 0; k < n; ++k) {
        if (a(j, k) == 0.0) continue;
        pair[0] = std::min(j, k);
        pair[1] = std::max(j, k);
        AddMinSupergradient(x, i, pair, j == k ? 1 : 2, slope * a(j, k), grad);
      }
    }
  }
  return total;
}

RelaxationSolution SolveBetaRelaxation(const Instance& inst,
                                       const SolverConfig& cfg) {
  AscentConfig ascent;
  ascent.max_iters = cfg.max_iters;
  ascent.step_constant = cfg.step_constant;
  ascent.tolerance = cfg.tolerance;
  AscentResult r = MaximizeRowStochastic(
      inst.n(), inst.m(),
      [&inst](const Matrix& x, Matrix* grad) {
        return BetaRelaxationObjective(inst, x, grad);
      },
      ascent);
  RelaxationSolution out;
  out.x = std::move(r.x);
  out.value = r.value;
  out.iterations = r.iterations;
  out.not_converged = !r.converged;
  out.solver_log = std::move(r.log);
  return out;
}

double ColumnObjective(const Instance& inst, const Matrix& xb) {
  return BetaRelaxationObjective(inst, xb);
}

SolveReport SolveConcaveBeta(const Instance& inst, const PipelineConfig& cfg) {
  RequireConcave(inst, "concave-beta");
  const auto t0 = std::chrono::steady_clock::now();
  SolveReport report;
  report.algorithm = "concave-beta";
  report.regime = RegimeName(inst.regime());
  report.n = inst.n();
  report.m = inst.m();

  RelaxationSolution rel = SolveBetaRelaxation(inst, cfg.solver);
  report.relaxation_value = rel.value;
  report.relaxation_is_upper_bound = true;
  report.fractional_value = rel.value;
  report.not_converged = rel.not_converged;
  report.iterations = rel.iterations;
  report.eta = Eta(inst, rel.x);

  const BetaCurvature beta = InstanceBeta(inst);
  report.beta = beta.value;
  report.beta_unbounded = beta.unbounded;

  TrialStats stats;
  double theta_sum = 0.0;
  for (int t = 0; t < cfg.rounding_trials; ++t) {
    Rng rng(DeriveSeed(cfg.seed, cfg.instance_index, t));
    const StageOneMatrix stage = StageOneRound(rel.x, rng);
    theta_sum += ColumnObjective(inst, stage.xb);
    const Rounded r = ResolveRows(rel.x, stage, rng);
    report.fallback_count += r.fallback_agents;
    stats.Add(Welfare(inst, r.allocation), r.allocation);
  }
  stats.WriteTo(&report);
  if (cfg.rounding_trials > 0) {
    report.theta_rounded_mean = theta_sum / cfg.rounding_trials;
    report.guarantee_bound = beta.unbounded ? 0.0 : 1.0 / beta.value;
    report.guarantee_basis = "relaxation";
    report.guarantee_value = report.theta_rounded_mean;
    report.guarantee_reference = rel.value;
  }
  report.wall_time_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
  return report;
}

SolveReport SolveConcavePrimalDual(const Instance& inst,
                                   const PipelineConfig& cfg) {
  RequireConcave(inst, "concave-pd");
  const auto t0 = std::chrono::steady_clock::now();
  SolveReport report;
  report.algorithm = "concave-pd";
  report.regime = RegimeName(inst.regime());
  report.n = inst.n();
  report.m = inst.m();

  const PrimalDualTrace trace = PrimalDualSolve(inst, cfg.concave);
  report.relaxation_value = trace.iterates[trace.best_k].dual_value;
  report.fractional_value = trace.primal_value;
  report.duality_gap = trace.gap_estimate;
  report.infeasibility = trace.infeasibility;
  report.dual_is_estimate = trace.dual_is_estimate;
  report.iterations = static_cast<int>(trace.iterates.size());
  const double eta = Eta(inst, trace.x_star);
  report.eta = eta;
  report.rounding_factor = IndependentRoundingFactor(eta);

  TrialStats stats;
  for (int t = 0; t < cfg.rounding_trials; ++t) {
    const Allocation a = IndependentRound(
        inst, trace.x_star, DeriveSeed(cfg.seed, cfg.instance_index, t));
    stats.Add(Welfare(inst, a), a);
  }
  stats.WriteTo(&report);
  if (cfg.rounding_trials > 0 && eta > 0.0) {
    report.guarantee_bound = *report.rounding_factor;
    report.guarantee_basis = "fractional";
    report.guarantee_value = report.rounded_welfare_mean;
    report.guarantee_reference = trace.primal_value;
  }
  report.wall_time_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
  return report;
}

}  // namespace externet
