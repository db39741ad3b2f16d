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

#include "externet/ascent.h"

#include <algorithm>
#include <cmath>

#include "externet/projection.h"

namespace externet {

void AddMinSupergradient(const Matrix& x, int item, const int* agents,
                         int count, double coef, Matrix* grad) {
  constexpr double kTie = 1e-12;
  double lo = x(agents[0], item);
  for (int t = 1; t < count; ++t) lo = std::min(lo, x(agents[t], item));
  int ties = 0;
  for (int t = 0; t < count; ++t) {
    if (x(agents[t], item) <= lo + kTie) ++ties;
  }
  const double share = coef / ties;
  for (int t = 0; t < count; ++t) {
    if (x(agents[t], item) <= lo + kTie) (*grad)(agents[t], item) += share;
  }
}

Matrix RowArgmaxBinary(const Matrix& x) {
  Matrix out(x.rows(), x.cols());
  for (int r = 0; r < x.rows(); ++r) {
    const auto row = x.Row(r);
    const auto it = std::max_element(row.begin(), row.end());
    out(r, static_cast<int>(it - row.begin())) = 1.0;
  }
  return out;
}

AscentResult MaximizeRowStochastic(int n, int m,
                                   const ConcaveObjective& objective,
                                   const AscentConfig& cfg) {
  AscentResult result;
  Matrix x(n, m, 1.0 / m);
  Matrix grad(n, m);
  double value = objective(x, &grad);
  result.x = x;
  result.value = value;
  result.log.emplace_back(0, value);

  auto consider = [&](const Matrix& candidate, double v) {
    if (v > result.value) {
      result.x = candidate;
      result.value = v;
      return true;
    }
    return false;
  };
  {
    const Matrix rounded = RowArgmaxBinary(x);
    consider(rounded, objective(rounded, nullptr));
  }

  double max_col_norm = 0.0;
  for (int c = 0; c < m; ++c) {
    double s = 0.0;
    for (int r = 0; r < n; ++r) s += grad(r, c) * grad(r, c);
    max_col_norm = std::max(max_col_norm, std::sqrt(s));
  }
  if (max_col_norm == 0.0 || m == 1) {
    result.converged = true;
    return result;
  }
  const double c = cfg.step_constant / max_col_norm;

  double reference = result.value;
  int last_gain = 0;
  int t = 1;
  for (; t <= cfg.max_iters; ++t) {
    const double step = c / std::sqrt(static_cast<double>(t));
    for (std::size_t k = 0; k < x.data().size(); ++k) {
      x.data()[k] += step * grad.data()[k];
    }
    x = ProjectRowStochastic(x);
    std::fill(grad.data().begin(), grad.data().end(), 0.0);
    value = objective(x, &grad);
    consider(x, value);
    const Matrix rounded = RowArgmaxBinary(x);
    consider(rounded, objective(rounded, nullptr));
    if (t % 50 == 0) result.log.emplace_back(t, value);

    if (result.value >
        reference + cfg.tolerance * std::max(1.0, std::abs(reference))) {
      reference = result.value;
      last_gain = t;
    } else if (t - last_gain >= cfg.stall_window) {
      result.converged = true;
      break;
    }
  }
  result.iterations = std::min(t, cfg.max_iters);
  if (result.log.back().first != result.iterations) {
    result.log.emplace_back(result.iterations, value);
  }
  return result;
}

}  // namespace externet
