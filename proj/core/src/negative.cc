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

#include "externet/negative.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <utility>

#include "externet/concave.h"
#include "externet/error.h"
#include "externet/oracle.h"

namespace externet {
namespace {

void RequireNegative(const Instance& inst, const char* op) {
  if (inst.regime() != Regime::kNegativeLinear) {
    throw Error(ErrorCode::kUnsupportedRegime,
                std::string(op) + " requires the NegativeLinear regime, got " +
                    RegimeName(inst.regime()));
  }
}

// Unbiased estimate of dF/dx_ji from inclusion samples of column i.
Matrix SampledGradient(const Instance& inst, const Matrix& x, int samples,
                       Rng& rng) {
  const int n = inst.n();
  const int m = inst.m();
  Matrix grad(n, m);
  std::vector<std::uint8_t> in(n);
  for (int i = 0; i < m; ++i) {
    const Matrix& a = inst.weights(i);
    for (int s = 0; s < samples; ++s) {
      for (int k = 0; k < n; ++k) in[k] = rng.Bernoulli(x(k, i)) ? 1 : 0;
      // f(R + j) - f(R - j) = a_jj + sum_{k in R, k != j} (a_jk + a_kj).
      for (int j = 0; j < n; ++j) {
        double g = a(j, j);
        for (int k = 0; k < n; ++k) {
          if (k != j && in[k]) g += a(j, k) + a(k, j);
        }
        grad(j, i) += g / samples;
      }
    }
  }
  return grad;
}

}  // namespace

double MultilinearExact(const Instance& inst, int item,
                        std::span<const double> x_item) {
  RequireNegative(inst, "multilinear extension");
  const int n = inst.n();
  if (static_cast<int>(x_item.size()) != n) {
    throw Error(ErrorCode::kInvalidInput, "column must have n entries");
  }
  const Matrix& a = inst.weights(item);
  double total = 0.0;
  for (int j = 0; j < n; ++j) {
    total += a(j, j) * x_item[j];
    for (int k = 0; k < n; ++k) {
      if (k != j) total += a(j, k) * x_item[j] * x_item[k];
    }
  }
  return total;
}

double MultilinearValue(const Instance& inst, const Matrix& x) {
  if (x.rows() != inst.n() || x.cols() != inst.m()) {
    throw Error(ErrorCode::kInvalidInput, "matrix must be n x m");
  }
  double total = 0.0;
  for (int i = 0; i < inst.m(); ++i) {
    total += MultilinearExact(inst, i, x.Column(i));
  }
  return total;
}

Matrix MultilinearGradient(const Instance& inst, const Matrix& x) {
  RequireNegative(inst, "multilinear gradient");
  const int n = inst.n();
  const int m = inst.m();
  if (x.rows() != n || x.cols() != m) {
    throw Error(ErrorCode::kInvalidInput, "matrix must be n x m");
  }
  Matrix grad(n, m);
  for (int i = 0; i < m; ++i) {
    const Matrix& a = inst.weights(i);
    for (int j = 0; j < n; ++j) {
      double g = a(j, j);
      for (int k = 0; k < n; ++k) {
        if (k != j) g += (a(j, k) + a(k, j)) * x(k, i);
      }
      grad(j, i) = g;
    }
  }
  return grad;
}

Estimate MultilinearSampled(const Instance& inst, const Matrix& x, int samples,
                            std::uint64_t seed) {
  if (samples < 1) {
    throw Error(ErrorCode::kInvalidInput, "samples must be >= 1");
  }
  const int n = inst.n();
  const int m = inst.m();
  if (x.rows() != n || x.cols() != m) {
    throw Error(ErrorCode::kInvalidInput, "matrix must be n x m");
  }
  Rng rng(seed);
  std::vector<std::uint8_t> in(n);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int s = 0; s < samples; ++s) {
    double v = 0.0;
    for (int i = 0; i < m; ++i) {
      for (int k = 0; k < n; ++k) in[k] = rng.Bernoulli(x(k, i)) ? 1 : 0;
      v += ItemValue(inst, i, in);
    }
    sum += v;
    sum_sq += v * v;
  }
  Estimate out;
  out.value = sum / samples;
  if (samples > 1) {
    const double var = std::max(
        0.0, (sum_sq - samples * out.value * out.value) / (samples - 1));
    out.std_error = std::sqrt(var / samples);
  }
  return out;
}

GreedyTrajectory ContinuousGreedy(const Instance& inst,
                                  const GreedyConfig& cfg) {
  RequireNegative(inst, "continuous greedy");
  if (cfg.steps < 1) {
    throw Error(ErrorCode::kInvalidInput, "greedy steps must be >= 1");
  }
  const int n = inst.n();
  const int m = inst.m();
  const double delta = 1.0 / cfg.steps;
  Rng rng(cfg.seed);
  GreedyTrajectory out;
  out.steps = cfg.steps;
  out.directions.reserve(cfg.steps);
  Matrix x(n, m);
  Matrix avg(n, m);
  for (int t = 0; t < cfg.steps; ++t) {
    const Matrix grad = cfg.mc_samples > 0
                            ? SampledGradient(inst, x, cfg.mc_samples, rng)
                            : MultilinearGradient(inst, x);
    Matrix dir(n, m);
    for (int j = 0; j < n; ++j) {
      int best = -1;
      double best_gain = 0.0;
      for (int i = 0; i < m; ++i) {
        const double gain = (1.0 - x(j, i)) * grad(j, i);
        if (gain > best_gain) {
          best_gain = gain;
          best = i;
        }
      }
      if (best >= 0) dir(j, best) = 1.0;
    }
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < m; ++i) {
        if (dir(j, i) == 0.0) continue;
        x(j, i) += delta * (1.0 - x(j, i));
        avg(j, i) += delta;
      }
    }
    out.directions.push_back(std::move(dir));
    out.f_estimates.push_back({t + 1, MultilinearValue(inst, x), 0.0});
  }
  out.x_measured = std::move(x);
  out.x_average = std::move(avg);
  out.final_is_average = MultilinearValue(inst, out.x_average) >
                         MultilinearValue(inst, out.x_measured);
  out.x_final = out.final_is_average ? out.x_average : out.x_measured;
  return out;
}

bool HasMonotoneItems(const Instance& inst) {
  RequireNegative(inst, "monotonicity test");
  const int n = inst.n();
  for (int i = 0; i < inst.m(); ++i) {
    for (int j = 0; j < n; ++j) {
      // Smallest marginal of j: every other agent already present.
      double marginal = inst.weight(i, j, j);
      for (int k = 0; k < n; ++k) {
        if (k != j) marginal += inst.weight(i, j, k) + inst.weight(i, k, j);
      }
      if (marginal < -kStructureTolerance) return false;
    }
  }
  return true;
}

int CompleteAssignment(const Instance& inst, std::vector<int>* assign) {
  const int n = inst.n();
  const int m = inst.m();
  if (static_cast<int>(assign->size()) != n) {
    throw Error(ErrorCode::kInvalidInput, "assignment must have n entries");
  }
  int forced = 0;
  for (int j = 0; j < n; ++j) {
    if ((*assign)[j] >= 0) continue;
    int best = 0;
    for (int i = 1; i < m; ++i) {
      if (inst.weight(i, j, j) > inst.weight(best, j, j)) best = i;
    }
    const double before = PartialWelfare(inst, *assign);
    (*assign)[j] = best;
    if (PartialWelfare(inst, *assign) <= before) ++forced;
  }
  return forced;
}

SolveReport SolveNegative(const Instance& inst, const PipelineConfig& cfg) {
  RequireNegative(inst, "negative-cg");
  const auto t0 = std::chrono::steady_clock::now();
  SolveReport report;
  report.algorithm = "negative-cg";
  report.regime = RegimeName(inst.regime());
  report.n = inst.n();
  report.m = inst.m();

  GreedyConfig greedy = cfg.greedy;
  greedy.seed = DeriveSeed(cfg.seed, cfg.instance_index, ~std::uint64_t{0});
  const GreedyTrajectory traj = ContinuousGreedy(inst, greedy);
  report.fractional_value = MultilinearValue(inst, traj.x_final);
  report.iterations = traj.steps;

  TrialStats stats;
  for (int t = 0; t < cfg.rounding_trials; ++t) {
    Rng rng(DeriveSeed(cfg.seed, cfg.instance_index, t));
    Allocation a;
    a.assign = IndependentRoundPartial(traj.x_final, rng);
    report.forced_assignments += CompleteAssignment(inst, &a.assign);
    stats.Add(Welfare(inst, a), a);
  }
  stats.WriteTo(&report);
  if (cfg.rounding_trials > 0) {
    report.guarantee_bound =
        HasMonotoneItems(inst) ? 1.0 - std::exp(-1.0) : std::exp(-1.0);
    report.guarantee_value = report.rounded_welfare_mean;
  }
  report.wall_time_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
  return report;
}

}  // namespace externet
