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

#ifndef EXTERNET_CONCAVE_H_
#define EXTERNET_CONCAVE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "externet/config.h"
#include "externet/instance.h"
#include "externet/lovasz.h"
#include "externet/matrix.h"
#include "externet/random.h"
#include "externet/report.h"

namespace externet {

// Item subproblem of the Lagrangian:
//   h_i(x; p) = sum_j x_j f_ij(a^i_j . x) - p . x,   x in [0, 1]^n.
double InnerObjective(const Instance& inst, int item, std::span<const double> p,
                      std::span<const double> x);

struct InnerResult {
  std::vector<double> x;
  double objective = 0.0;
  // Bilinear objective (g(x) - p) . y after every half-step of the
  // alternating scheme; nondecreasing.
  std::vector<double> alternating_trace;
};

// Approximate argmax of h_i(.; p) over the box. Alternates y <- 1[g(x) > p]
// (exact) with projected ascent on (g(x) - p) . y in x, then scores the
// alternating iterates, the best binary vertex (n <= vertex_enum_max_n) and a
// local projected-gradient refinement, and returns the best point found. This
// is a stationary point, not a certified global maximum. `warm_start` empty
// means the constant 0.5 vector.
InnerResult InnerArgmax(const Instance& inst, int item,
                        std::span<const double> p, const ConcaveConfig& cfg,
                        std::span<const double> warm_start = {});

struct DualIterate {
  int k = 0;
  std::vector<double> p;
  double dual_value = 0.0;
};

struct PrimalDualTrace {
  std::vector<DualIterate> iterates;
  int best_k = 0;
  // Projection of [x_1(k*) | ... | x_m(k*)] onto row-stochastic matrices.
  Matrix x_star;
  // ||sum_i x_i(k*) - 1|| before projection.
  double infeasibility = 0.0;
  // sum_{i,j} x_ji f_ij(a^i_j . x_i) at x_star.
  double primal_value = 0.0;
  // D(p(k*)) - primal_value.
  double gap_estimate = 0.0;
  // Dual values use the local inner solver, so they are estimates of D.
  bool dual_is_estimate = true;
};

// Dual subgradient method on D(p) = sum_i z_i(p) + p . 1 from p(0) = 0, with
// step alpha_k = step_scale / (m sqrt(n max(k, 1))).
PrimalDualTrace PrimalDualSolve(const Instance& inst, const ConcaveConfig& cfg);

// sum_{i,j} x_ji f_ij(sum_k a^i_jk x_ki): the relaxation the primal-dual
// method works on.
double ConcaveRelaxationObjective(const Instance& inst, const Matrix& x);

// Independent row rounding: agent j takes item i with probability x(j, i).
// Rows summing to less than one leave the agent unassigned (-1) with the
// remaining probability.
std::vector<int> IndependentRoundPartial(const Matrix& x, Rng& rng);
Allocation IndependentRound(const Instance& inst, const Matrix& x,
                            std::uint64_t seed);

// (1 - 1/sqrt(2)) (1 - exp(-eta^2 / 2)).
double IndependentRoundingFactor(double eta);

// sum_{i,j} f_ij(sum_k a^i_jk min(x_ji, x_ki)); with a supergradient when
// `grad` is non-null.
double BetaRelaxationObjective(const Instance& inst, const Matrix& x,
                               Matrix* grad = nullptr);

// Maximizes BetaRelaxationObjective over row-stochastic matrices.
RelaxationSolution SolveBetaRelaxation(const Instance& inst,
                                       const SolverConfig& cfg);

// Column objective sum_i f_i(column i of xb) of a (possibly infeasible)
// binary matrix.
double ColumnObjective(const Instance& inst, const Matrix& xb);

// Concave relaxation with min-coupled influence, per-column theta rounding,
// then row contention resolution to restore feasibility.
SolveReport SolveConcaveBeta(const Instance& inst, const PipelineConfig& cfg);

// Primal-dual method followed by independent rounding of x_star.
SolveReport SolveConcavePrimalDual(const Instance& inst,
                                   const PipelineConfig& cfg);

}  // namespace externet

#endif  // EXTERNET_CONCAVE_H_
