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

#ifndef EXTERNET_NEGATIVE_H_
#define EXTERNET_NEGATIVE_H_

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

// Multilinear extension of S -> chi_S' A_i chi_S at x_i:
//   sum_j a_jj x_j + sum_{j != k} a_jk x_j x_k.
// NegativeLinear regime only.
double MultilinearExact(const Instance& inst, int item,
                        std::span<const double> x_item);

// Sum of MultilinearExact over the columns of x.
double MultilinearValue(const Instance& inst, const Matrix& x);

// dF/dx_ji = a_jj + sum_{k != j} (a_jk + a_kj) x_ki.
Matrix MultilinearGradient(const Instance& inst, const Matrix& x);

// Average of sum_i f_i(R_i) over independent inclusion samples R_i ~ x_i.
Estimate MultilinearSampled(const Instance& inst, const Matrix& x, int samples,
                            std::uint64_t seed);

struct FEstimate {
  int step = 0;
  double value = 0.0;
  double std_error = 0.0;
};

struct GreedyTrajectory {
  // Better of x_measured and x_average under the multilinear extension.
  Matrix x_final;
  Matrix x_measured;
  // (1/T) sum_t I(t), an average of polytope vertices.
  Matrix x_average;
  bool final_is_average = false;
  int steps = 0;
  std::vector<Matrix> directions;
  std::vector<FEstimate> f_estimates;
};

// Measured continuous greedy over {x >= 0 : sum_i x_ji <= 1} with step 1/T:
// x <- x + (1/T) I (.) (1 - x), where I takes, per row, the item with the
// largest positive weighted gain (1 - x_ji) dF/dx_ji, or nothing.
GreedyTrajectory ContinuousGreedy(const Instance& inst,
                                  const GreedyConfig& cfg);

// Assigns every agent with assign[j] < 0 to argmax_i a^i_jj, in agent order.
// Returns the number of those assignments that did not strictly increase
// welfare.
// True when every f_i is monotone: each agent's marginal stays nonnegative
// even with all other agents present. The 1 - 1/e bound needs this.
bool HasMonotoneItems(const Instance& inst);

int CompleteAssignment(const Instance& inst, std::vector<int>* assign);

// Continuous greedy, independent row rounding of the sub-stochastic point,
// then CompleteAssignment.
SolveReport SolveNegative(const Instance& inst, const PipelineConfig& cfg);

}  // namespace externet

#endif  // EXTERNET_NEGATIVE_H_
