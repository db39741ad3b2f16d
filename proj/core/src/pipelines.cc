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

#include "externet/pipelines.h"

#include <algorithm>
#include <chrono>
#include <optional>

#include "externet/concave.h"
#include "externet/contention.h"
#include "externet/error.h"
#include "externet/lovasz.h"
#include "externet/negative.h"
#include "externet/oracle.h"

namespace externet {
namespace {

double ElapsedMs(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

SolveReport KtPipeline(const Instance& inst, const PipelineConfig& cfg,
                       const ExpandedLovasz& exp, const char* name,
                       double bound) {
  const auto t0 = std::chrono::steady_clock::now();
  SolveReport report;
  report.algorithm = name;
  report.regime = RegimeName(inst.regime());
  report.n = inst.n();
  report.m = inst.m();
  const RelaxationSolution rel = SolveRelaxation(exp, cfg.solver);
  report.relaxation_value = rel.value;
  report.relaxation_is_upper_bound = true;
  report.fractional_value = rel.value;
  report.not_converged = rel.not_converged;
  report.iterations = rel.iterations;

  TrialStats stats;
  for (int t = 0; t < cfg.rounding_trials; ++t) {
    const Rounded r =
        KtRound(inst, rel.x, DeriveSeed(cfg.seed, cfg.instance_index, t));
    report.fallback_count += r.fallback_agents;
    stats.Add(Welfare(inst, r.allocation), r.allocation);
  }
  stats.WriteTo(&report);
  if (cfg.rounding_trials > 0) {
    report.guarantee_bound = bound;
    report.guarantee_value = report.rounded_welfare_mean;
  }
  report.wall_time_ms = ElapsedMs(t0);
  return report;
}

void RequireRegime(std::string_view algorithm, const Instance& inst) {
  const std::vector<Regime> allowed = AlgorithmRegimes(algorithm);
  if (std::find(allowed.begin(), allowed.end(), inst.regime()) !=
      allowed.end()) {
    return;
  }
  std::string expected;
  for (Regime r : allowed) {
    if (!expected.empty()) expected += " or ";
    expected += RegimeName(r);
  }
  throw Error(ErrorCode::kUnsupportedRegime,
              std::string(algorithm) + " expects regime " + expected +
                  ", instance is " + RegimeName(inst.regime()));
}

}  // namespace

SolveReport SolveLovaszKt(const Instance& inst, const PipelineConfig& cfg) {
  RequireRegime("lovasz-kt", inst);
  if (!inst.AllLinear()) {
    throw Error(ErrorCode::kUnsupportedFamily,
                "lovasz-kt requires linear externalities");
  }
  return KtPipeline(inst, cfg, ExpandPolynomial(inst), "lovasz-kt", 0.5);
}

SolveReport SolvePolyLovaszKt(const Instance& inst, const PipelineConfig& cfg) {
  RequireRegime("poly-lovasz-kt", inst);
  const ExpandedLovasz exp = ExpandPolynomial(inst);
  return KtPipeline(inst, cfg, exp, "poly-lovasz-kt",
                    1.0 / std::max(1, exp.degree_bound));
}

SolveReport SolveOracle(const Instance& inst, const PipelineConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  SolveReport report;
  report.algorithm = "oracle";
  report.regime = RegimeName(inst.regime());
  report.n = inst.n();
  report.m = inst.m();
  const OracleResult opt = BruteForce(inst, std::max(1, cfg.threads));
  report.trials = 1;
  report.rounded_welfare_mean = opt.opt_value;
  report.rounded_welfare_best = opt.opt_value;
  report.best_allocation = opt.opt_alloc;
  report.oracle_opt = opt.opt_value;
  report.guarantee_bound = 1.0;
  report.guarantee_value = opt.opt_value;
  report.wall_time_ms = ElapsedMs(t0);
  return report;
}

const std::vector<std::string>& AlgorithmNames() {
  static const std::vector<std::string> names = {
      "lovasz-kt",    "poly-lovasz-kt", "convex-fcr", "concave-pd",
      "concave-beta", "negative-cg",    "oracle"};
  return names;
}

std::vector<Regime> AlgorithmRegimes(std::string_view algorithm) {
  if (algorithm == "lovasz-kt") return {Regime::kPositiveLinear};
  if (algorithm == "poly-lovasz-kt" || algorithm == "convex-fcr") {
    return {Regime::kPositiveLinear, Regime::kPositiveConvex};
  }
  if (algorithm == "concave-pd" || algorithm == "concave-beta") {
    return {Regime::kPositiveConcave};
  }
  if (algorithm == "negative-cg") return {Regime::kNegativeLinear};
  if (algorithm == "oracle") {
    return {Regime::kPositiveLinear, Regime::kPositiveConvex,
            Regime::kPositiveConcave, Regime::kNegativeLinear};
  }
  throw Error(ErrorCode::kInvalidInput,
              "unknown algorithm '" + std::string(algorithm) + "'");
}

std::string DefaultAlgorithm(Regime regime) {
  switch (regime) {
    case Regime::kPositiveLinear:
      return "lovasz-kt";
    case Regime::kPositiveConvex:
      return "poly-lovasz-kt";
    case Regime::kPositiveConcave:
      return "concave-beta";
    case Regime::kNegativeLinear:
      return "negative-cg";
  }
  return "oracle";
}

SolveReport RunAlgorithm(std::string_view algorithm, const Instance& inst,
                         const PipelineConfig& cfg) {
  RequireRegime(algorithm, inst);
  SolveReport report;
  if (algorithm == "lovasz-kt") {
    report = SolveLovaszKt(inst, cfg);
  } else if (algorithm == "poly-lovasz-kt") {
    report = SolvePolyLovaszKt(inst, cfg);
  } else if (algorithm == "convex-fcr") {
    report = SolveConvexCurvature(inst, cfg);
  } else if (algorithm == "concave-pd") {
    report = SolveConcavePrimalDual(inst, cfg);
  } else if (algorithm == "concave-beta") {
    report = SolveConcaveBeta(inst, cfg);
  } else if (algorithm == "negative-cg") {
    report = SolveNegative(inst, cfg);
  } else {
    report = SolveOracle(inst, cfg);
  }
  std::optional<double> opt = report.oracle_opt;
  if (cfg.with_oracle && !opt) {
    opt = BruteForce(inst, std::max(1, cfg.threads)).opt_value;
  }
  FinalizeGuarantee(&report, opt, cfg.guarantee_tolerance);
  return report;
}

}  // namespace externet
