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

#ifndef EXTERNET_PROJECTION_H_
#define EXTERNET_PROJECTION_H_

#include <span>
#include <vector>

#include "externet/matrix.h"

namespace externet {

// Euclidean projection of `v` onto the probability simplex {w >= 0, sum w = 1}
// (sort-based, exact up to rounding).
std::vector<double> ProjectToSimplex(std::span<const double> v);

// Row-wise simplex projection, i.e. the Euclidean projection onto the set of
// row-stochastic matrices.
Matrix ProjectRowStochastic(const Matrix& x);

// Euclidean projection onto {w >= 0, sum w <= 1}.
std::vector<double> ProjectToSubSimplex(std::span<const double> v);

}  // namespace externet

#endif  // EXTERNET_PROJECTION_H_
