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

#include "externet/projection.h"

#include <algorithm>
#include <functional>

namespace externet {

std::vector<double> ProjectToSimplex(std::span<const double> v) {
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double prefix = 0.0;
  double tau = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    prefix += sorted[k];
    const double candidate = (prefix - 1.0) / static_cast<double>(k + 1);
    if (sorted[k] - candidate > 0.0) tau = candidate;
  }
  std::vector<double> out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = std::max(v[k] - tau, 0.0);
  return out;
}

Matrix ProjectRowStochastic(const Matrix& x) {
  Matrix out(x.rows(), x.cols());
  for (int r = 0; r < x.rows(); ++r) {
    const std::vector<double> row = ProjectToSimplex(x.Row(r));
    std::copy(row.begin(), row.end(), out.Row(r).begin());
  }
  return out;
}

std::vector<double> ProjectToSubSimplex(std::span<const double> v) {
  std::vector<double> clipped(v.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    clipped[k] = std::max(v[k], 0.0);
    sum += clipped[k];
  }
  if (sum <= 1.0) return clipped;
  return ProjectToSimplex(v);
}

}  // namespace externet
