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

#include "externet/report.h"

#include <algorithm>
#include <cmath>

namespace externet {

void TrialStats::Add(double value, const Allocation& alloc) {
  if (count == 0 || value > best) {
    best = value;
    best_allocation = alloc;
  }
  ++count;
  const double delta = value - mean;
  mean += delta / count;
  m2 += delta * (value - mean);
}

double TrialStats::Mean() const { return mean; }

double TrialStats::StdError() const {
  if (count < 2) return 0.0;
  return std::sqrt(std::max(0.0, m2 / (count - 1)) / count);
}

void TrialStats::WriteTo(SolveReport* report) const {
  report->trials = count;
  report->rounded_welfare_mean = Mean();
  report->rounded_welfare_stderr = StdError();
  report->rounded_welfare_best = best;
  report->best_allocation = best_allocation;
}

void FinalizeGuarantee(SolveReport* report, std::optional<double> opt,
                       double tolerance) {
  if (opt) {
    report->oracle_opt = *opt;
    if (*opt != 0.0)
      report->empirical_ratio = report->rounded_welfare_mean / *opt;
  }
  if (!report->guarantee_bound || !report->guarantee_value) return;
  if (!report->guarantee_reference) {
    if (opt) {
      report->guarantee_basis = "opt";
      report->guarantee_reference = *opt;
    } else if (report->relaxation_is_upper_bound && report->relaxation_value) {
      report->guarantee_basis = "relaxation";
      report->guarantee_reference = *report->relaxation_value;
    } else {
      return;
    }
  }
  const double ref = *report->guarantee_reference;
  report->guarantee_satisfied =
      *report->guarantee_value >=
      *report->guarantee_bound * ref - tolerance * std::abs(ref);
}

}  // namespace externet
