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

#include "externet/contention.h"

#include <algorithm>
#include <chrono>
#include <numeric>

#include "externet/error.h"

namespace externet {

StageOneMatrix StageOneRound(const Matrix& x, Rng& rng) {
  StageOneMatrix out{Matrix(x.rows(), x.cols()), std::vector<double>(x.cols())};
  for (int i = 0; i < x.cols(); ++i) {
    const double theta = rng.Threshold();
    out.thetas[i] = theta;
    for (int j = 0; j < x.rows(); ++j) out.xb(j, i) = x(j, i) >= theta;
  }
  return out;
}

StageOneMatrix StageOneRound(const Matrix& x, std::uint64_t seed) {
  Rng rng(seed);
  return StageOneRound(x, rng);
}

std::vector<double> FairResolutionProbabilities(
    std::span<const double> p, std::span<const int> requested) {
  const int size = static_cast<int>(requested.size());
  if (size == 0) {
    throw Error(ErrorCode::kInvalidInput, "requester set must be nonempty");
  }
  double total = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) {
      throw Error(ErrorCode::kInvalidInput, "probabilities must be >= 0");
    }
    total += v;
  }
  if (total > 1.0 + 1e-9) {
    throw Error(ErrorCode::kInvalidInput, "probabilities must sum to <= 1");
  }
  std::vector<std::uint8_t> in_set(p.size(), 0);
  for (int idx : requested) {
    if (idx < 0 || idx >= static_cast<int>(p.size()) || in_set[idx]) {
      throw Error(ErrorCode::kInvalidInput, "invalid requester index");
    }
    in_set[idx] = 1;
  }
  if (size == 1) return {1.0};
  if (!(total > 0.0)) {
    throw Error(ErrorCode::kInvalidInput,
                "contention among requesters with zero total probability");
  }
  double in_mass = 0.0;
  double out_mass = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    (in_set[k] ? in_mass : out_mass) += p[k];
  }
  std::vector<double> r(size);
  for (int t = 0; t < size; ++t) {
    const double others = in_mass - p[requested[t]];
    r[t] = (others / (size - 1) + out_mass / size) / total;
  }
  return r;
}

int FairResolve(std::span<const double> p, std::span<const int> requested,
                Rng& rng) {
  const std::vector<double> r = FairResolutionProbabilities(p, requested);
  if (r.size() == 1) return requested[0];
  const double u = rng.Uniform();
  double acc = 0.0;
  for (std::size_t t = 0; t < r.size(); ++t) {
    acc += r[t];
    if (u < acc) return requested[t];
  }
  return requested.back();
}

Rounded ResolveRows(const Matrix& x, const StageOneMatrix& stage, Rng& rng) {
  Rounded out;
  out.allocation.assign.assign(x.rows(), -1);
  std::vector<int> requested;
  for (int j = 0; j < x.rows(); ++j) {
    requested.clear();
    for (int i = 0; i < x.cols(); ++i) {
      if (stage.xb(j, i) != 0.0) requested.push_back(i);
    }
    if (requested.empty()) {
      const auto row = x.Row(j);
      out.allocation.assign[j] = static_cast<int>(
          std::max_element(row.begin(), row.end()) - row.begin());
      ++out.fallback_agents;
    } else if (requested.size() == 1) {
      out.allocation.assign[j] = requested.front();
    } else {
      out.allocation.assign[j] = FairResolve(x.Row(j), requested, rng);
    }
  }
  return out;
}

Rounded FcrRound(const Instance& inst, const Matrix& x, std::uint64_t seed) {
  if (x.rows() != inst.n() || x.cols() != inst.m()) {
    throw Error(ErrorCode::kInvalidInput, "matrix must be n x m");
  }
  Rng rng(seed);
  const StageOneMatrix stage = StageOneRound(x, rng);
  return ResolveRows(x, stage, rng);
}

SolveReport SolveConvexCurvature(const Instance& inst,
                                 const PipelineConfig& cfg) {
  if (inst.regime() != Regime::kPositiveLinear &&
      inst.regime() != Regime::kPositiveConvex) {
    throw Error(ErrorCode::kUnsupportedRegime,
                std::string("convex-fcr requires the PositiveLinear or "
                            "PositiveConvex regime, got ") +
                    RegimeName(inst.regime()));
  }
  const auto t0 = std::chrono::steady_clock::now();
  SolveReport report;
  report.algorithm = "convex-fcr";
  report.regime = RegimeName(inst.regime());
  report.n = inst.n();
  report.m = inst.m();

  const RelaxationSolution rel = SolveRelaxation(inst, cfg.solver);
  report.relaxation_value = rel.value;
  report.relaxation_is_upper_bound = true;
  report.fractional_value = rel.value;
  report.not_converged = rel.not_converged;
  report.iterations = rel.iterations;
  const double gamma = InstanceGammaQuarter(inst);
  report.gamma_quarter = gamma;

  TrialStats stats;
  for (int t = 0; t < cfg.rounding_trials; ++t) {
    const Rounded r =
        FcrRound(inst, rel.x, DeriveSeed(cfg.seed, cfg.instance_index, t));
    report.fallback_count += r.fallback_agents;
    stats.Add(Welfare(inst, r.allocation), r.allocation);
  }
  stats.WriteTo(&report);
  if (cfg.rounding_trials > 0) {
    report.guarantee_bound = gamma;
    report.guarantee_value = report.rounded_welfare_mean;
  }
  report.wall_time_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
  return report;
}

}  // namespace externet
