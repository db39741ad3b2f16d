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

#ifndef EXTERNET_LOVASZ_H_
#define EXTERNET_LOVASZ_H_

#include <cstdint>
#include <utility>
#include <vector>

#include "externet/config.h"
#include "externet/instance.h"
#include "externet/matrix.h"

namespace externet {

// One monomial b * prod_{j in agents} x_{j,item} of the expanded objective.
// Its Lovasz extension is b * min_{j in agents} x_{j,item}.
struct MinTerm {
  int item = 0;
  std::vector<int> agents;  // sorted, distinct
  double coefficient = 0.0;
};

// Multilinear expansion of sum_j f_ij(sum_k a^i_jk x_ki x_ji) over binary
// variables after merging repeated indices (x^t = x). Diagonal weights give
// singleton terms; the largest arity is the externality degree plus one.
struct ExpandedLovasz {
  int n = 0;
  int m = 0;
  int degree_bound = 0;  // largest term arity
  std::vector<MinTerm> terms;
};

inline constexpr int kMaxExpansionDegree = 3;

// Requires Linear or Polynomial externalities of degree <= 3 with nonnegative
// weights. Throws Error(kUnsupportedDegree) or Error(kUnsupportedFamily).
ExpandedLovasz ExpandPolynomial(const Instance& inst);

// sum over terms of b * min over the term's agents in its item column.
double EvalExpandedLovasz(const ExpandedLovasz& exp, const Matrix& x);

// Same, and also accumulates a supergradient (argmin routing, ties split).
double ExpandedLovaszWithSupergradient(const ExpandedLovasz& exp,
                                       const Matrix& x, Matrix* grad);

// sum_i sum_{j,k} a^i_jk min(x_ji, x_ki). PositiveLinear only.
double LovaszLinearClosedForm(const Instance& inst, const Matrix& x);

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

// Monte Carlo Lovasz extension: each sample draws one uniform threshold per
// column, thresholds the column, and evaluates the set objective.
Estimate LovaszSampled(const Instance& inst, const Matrix& x, int samples,
                       std::uint64_t seed);

struct RelaxationSolution {
  Matrix x;
  double value = 0.0;
  int iterations = 0;
  bool not_converged = false;
  std::vector<std::pair<int, double>> solver_log;
};

// Maximizes the (concave, piecewise-linear) Lovasz extension over
// row-stochastic matrices by projected supergradient ascent.
RelaxationSolution SolveRelaxation(const Instance& inst,
                                   const SolverConfig& cfg);
// Same, with a precomputed expansion.
RelaxationSolution SolveRelaxation(const ExpandedLovasz& exp,
                                   const SolverConfig& cfg);

struct Rounded {
  Allocation allocation;
  // Agents placed by a fallback rule instead of the rounding scheme proper.
  int fallback_agents = 0;
};

// Iterative randomized rounding: draw an item (first) and a threshold (second)
// uniformly, give that item to every unassigned agent whose entry reaches the
// threshold, repeat. After 50 * n * m rounds the leftovers take their row
// argmax and are counted in `fallback_agents`.
Rounded KtRound(const Instance& inst, const Matrix& x, std::uint64_t seed);

}  // namespace externet

#endif  // EXTERNET_LOVASZ_H_
