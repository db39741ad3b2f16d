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

#ifndef EXTERNET_ASCENT_H_
#define EXTERNET_ASCENT_H_

#include <functional>
#include <utility>
#include <vector>

#include "externet/matrix.h"

namespace externet {

struct AscentConfig {
  int max_iters = 5000;
  // Multiplies the base step 1 / (largest supergradient column norm at x0).
  double step_constant = 1.0;
  // Relative improvement of the best value below which a stall counts.
  double tolerance = 1e-9;
  // Stop after this many iterations without a relative gain above
  // `tolerance`.
  int stall_window = 1500;
};

struct AscentResult {
  Matrix x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  // (iteration, objective at the iterate), sampled every 50 iterations.
  std::vector<std::pair<int, double>> log;
};

// Evaluates a concave objective at x; when `supergradient` is non-null also
// writes a supergradient (same shape as x) into it.
using ConcaveObjective =
    std::function<double(const Matrix& x, Matrix* supergradient)>;

// Projected supergradient ascent over n x m row-stochastic matrices from the
// uniform matrix, step c / sqrt(t). Every iterate's row-argmax rounding is
// scored too, and the best point seen is returned.
AscentResult MaximizeRowStochastic(int n, int m,
                                   const ConcaveObjective& objective,
                                   const AscentConfig& cfg);

// Adds a supergradient of coef * min_{a in agents} x(a, item) into `grad`;
// ties within 1e-12 share the weight equally.
void AddMinSupergradient(const Matrix& x, int item, const int* agents,
                         int count, double coef, Matrix* grad);

// Row-wise argmax (lowest index on ties) as a binary matrix.
Matrix RowArgmaxBinary(const Matrix& x);

}  // namespace externet

#endif  // EXTERNET_ASCENT_H_
