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

#ifndef EXTERNET_REPORT_H_
#define EXTERNET_REPORT_H_

#include <optional>
#include <span>
#include <string>

#include "externet/lovasz.h"

namespace externet {

// Outcome of one pipeline run on one instance.
struct SolveReport {
  std::string instance_id;
  std::string algorithm;
  std::string regime;
  int n = 0;
  int m = 0;

  std::optional<double> relaxation_value;
  // Set by pipelines whose relaxation upper-bounds OPT.
  bool relaxation_is_upper_bound = false;
  // Value of the fractional point that was rounded, in the pipeline's own
  // extension (multilinear F(x) or the concave relaxation f(x)).
  std::optional<double> fractional_value;

  int trials = 0;
  double rounded_welfare_mean = 0.0;
  double rounded_welfare_stderr = 0.0;
  double rounded_welfare_best = 0.0;
  Allocation best_allocation;

  std::optional<double> oracle_opt;
  std::optional<double> empirical_ratio;

  // guarantee_satisfied <=> guarantee_value >=
  //   guarantee_bound * guarantee_reference - tolerance * |reference|.
  std::optional<double> guarantee_bound;
  std::string guarantee_basis;  // "opt", "relaxation" or "fractional"
  std::optional<double> guarantee_value;
  std::optional<double> guarantee_reference;
  std::optional<bool> guarantee_satisfied;

  // Diagnostics.
  std::optional<double> eta;
  std::optional<double> beta;
  bool beta_unbounded = false;
  std::optional<double> gamma_quarter;
  std::optional<double> rounding_factor;
  std::optional<double> duality_gap;
  std::optional<double> infeasibility;
  std::optional<double> theta_rounded_mean;
  bool dual_is_estimate = false;
  bool not_converged = false;
  int fallback_count = 0;
  int forced_assignments = 0;
  int iterations = 0;

  double wall_time_ms = 0.0;
};

// Running mean / standard error over rounding trials.
struct TrialStats {
  int count = 0;
  // Welford running mean and sum of squared deviations.
  double mean = 0.0;
  double m2 = 0.0;
  double best = 0.0;
  Allocation best_allocation;

  void Add(double value, const Allocation& alloc);
  double Mean() const;
  double StdError() const;
  void WriteTo(SolveReport* report) const;
};

// Fills oracle_opt / empirical_ratio (when `opt` is set) and resolves the
// guarantee fields from guarantee_bound, guarantee_value and the chosen
// reference.
void FinalizeGuarantee(SolveReport* report, std::optional<double> opt,
                       double tolerance);

}  // namespace externet

#endif  // EXTERNET_REPORT_H_
