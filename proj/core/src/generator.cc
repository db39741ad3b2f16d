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

#include "externet/generator.h"

#include <algorithm>
#include <utility>

#include "externet/error.h"
#include "externet/random.h"

namespace externet {
namespace {

void NormalizeRows(Matrix* a) {
  for (int j = 0; j < a->rows(); ++j) {
    double sum = 0.0;
    for (double v : a->Row(j)) sum += v;
    if (sum <= 0.0) continue;
    for (double& v : a->Row(j)) v /= sum;
  }
}

ExternalitySpec RegimeExternality(const GeneratorConfig& cfg) {
  switch (cfg.regime) {
    case Regime::kPositiveConvex:
      return ExternalitySpec::Polynomial(cfg.convex_coefficients);
    case Regime::kPositiveConcave:
      return cfg.concave_log
                 ? ExternalitySpec::LogConcave()
                 : ExternalitySpec::PowerConcave(cfg.concave_exponent);
    case Regime::kPositiveLinear:
    case Regime::kNegativeLinear:
      break;
  }
  return ExternalitySpec::Linear();
}

// Largest t in (0, 1] such that D(S) + t O(S) >= 0 for all S, where D and O
// are the diagonal and off-diagonal parts of chi_S' A chi_S.
double NonnegativeScale(const Matrix& a) {
  const int n = a.rows();
  double t = 1.0;
  if (n <= 20) {
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
      double diag = 0.0;
      double off = 0.0;
      for (int j = 0; j < n; ++j) {
        if (!(mask >> j & 1)) continue;
        diag += a(j, j);
        for (int k = 0; k < n; ++k) {
          if (k != j && (mask >> k & 1)) off += a(j, k);
        }
      }
      if (diag + t * off < 0.0) t = diag / -off;
    }
  } else {
    for (int j = 0; j < n; ++j) {
      double off = 0.0;
      for (int k = 0; k < n; ++k) {
        if (k != j) off += a(j, k);
      }
      if (a(j, j) + t * off < 0.0) t = a(j, j) / -off;
    }
  }
  return t;
}

void ScaleOffDiagonal(Matrix* a, double t) {
  for (int j = 0; j < a->rows(); ++j) {
    for (int k = 0; k < a->cols(); ++k) {
      if (k != j) (*a)(j, k) *= t;
    }
  }
}

Matrix NegativeWeights(int n, bool dominant, bool nonnegative, Rng& rng) {
  Matrix a(n, n);
  for (int j = 0; j < n; ++j) {
    const double diag = rng.Uniform(1.0, 5.0);
    a(j, j) = diag;
    double off = 0.0;
    for (int k = 0; k < n; ++k) {
      if (k == j) continue;
      a(j, k) = -rng.Uniform(0.0, 2.0 * diag / (n - 1));
      off += a(j, k);
    }
    if (dominant && diag + off < 0.0) {
      const double scale = diag / -off;
      for (int k = 0; k < n; ++k) {
        if (k != j) a(j, k) *= scale;
      }
    }
  }
  if (dominant) {
    // Row sums alone leave the column terms of a marginal unbounded; shrink
    // every off-diagonal until a_jj + sum_{k != j} (a_jk + a_kj) >= 0.
    double t = 1.0;
    for (int j = 0; j < n; ++j) {
      double off = 0.0;
      for (int k = 0; k < n; ++k) {
        if (k != j) off += a(j, k) + a(k, j);
      }
      if (a(j, j) + off < 0.0) t = std::min(t, a(j, j) / -off);
    }
    if (t < 1.0) ScaleOffDiagonal(&a, t);
  }
  if (nonnegative) {
    const double t = NonnegativeScale(a);
    if (t < 1.0) ScaleOffDiagonal(&a, t);
  }
  return a;
}

}  // namespace

Instance GenerateInstance(const GeneratorConfig& cfg, std::uint64_t index) {
  if (cfg.n < 1 || cfg.m < 1) {
    throw Error(ErrorCode::kInvalidInput, "n and m must be >= 1");
  }
  if (cfg.graph && cfg.regime == Regime::kNegativeLinear) {
    throw Error(ErrorCode::kInvalidInput,
                "graph mode needs a positive regime (NegativeLinear requires "
                "positive diagonals)");
  }
  if (cfg.graph &&
      !(cfg.edge_probability >= 0.0 && cfg.edge_probability <= 1.0)) {
    throw Error(ErrorCode::kInvalidInput, "edge probability must be in [0, 1]");
  }
  const int n = cfg.n;
  Rng rng(DeriveSeed(cfg.seed, index));
  std::vector<Matrix> weights;
  weights.reserve(cfg.m);
  if (cfg.graph) {
    Matrix adj(n, n);
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        if (k != j && rng.Bernoulli(cfg.edge_probability)) adj(j, k) = 1.0;
      }
    }
    if (cfg.regime == Regime::kPositiveConcave) NormalizeRows(&adj);
    weights.assign(cfg.m, adj);
  } else {
    for (int i = 0; i < cfg.m; ++i) {
      if (cfg.regime == Regime::kNegativeLinear) {
        weights.push_back(NegativeWeights(n, cfg.diagonally_dominant,
                                          cfg.nonnegative_sets, rng));
        continue;
      }
      Matrix a(n, n);
      for (double& v : a.data()) v = rng.Uniform();
      if (cfg.regime == Regime::kPositiveConcave) NormalizeRows(&a);
      weights.push_back(std::move(a));
    }
  }
  const bool dominant =
      cfg.regime == Regime::kNegativeLinear && cfg.diagonally_dominant;
  return Instance(cfg.regime, std::move(weights), {RegimeExternality(cfg)},
                  dominant);
}

}  // namespace externet
