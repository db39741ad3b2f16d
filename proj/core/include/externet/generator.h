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

#ifndef EXTERNET_GENERATOR_H_
#define EXTERNET_GENERATOR_H_

#include <cstdint>
#include <vector>

#include "externet/instance.h"

namespace externet {

struct GeneratorConfig {
  Regime regime = Regime::kPositiveLinear;
  int n = 6;
  int m = 2;
  std::uint64_t seed = 0;
  // Convex regime externality; the default is y^2.
  std::vector<double> convex_coefficients = {0.0, 1.0};
  // Concave regime externality: PowerConcave(concave_exponent), or
  // ln(1 + y) when concave_log is set.
  double concave_exponent = 0.5;
  bool concave_log = false;
  // NegativeLinear: shrink off-diagonals so every row sums to >= 0.
  bool diagonally_dominant = false;
  // NegativeLinear: shrink each item's off-diagonals by a common factor so
  // that chi_S' A_i chi_S >= 0 for every set S. Exact for n <= 20; larger n
  // fall back to the row-sum condition.
  bool nonnegative_sets = true;
  // Graph mode: a^i_jk = 1 iff k is an out-neighbor of j in one random
  // digraph shared by all items (edge probability edge_probability).
  bool graph = false;
  double edge_probability = 0.5;
};

// Draws a random instance satisfying the regime invariants. Instance
// `index` of a batch uses the stream DeriveSeed(seed, index).
//   Linear / Convex: a^i_jk ~ U[0, 1].
//   Concave: U[0, 1] rows normalized to sum 1.
//   NegativeLinear: a^i_jj ~ U[1, 5], a^i_jk ~ -U[0, 2 a^i_jj / (n - 1)].
Instance GenerateInstance(const GeneratorConfig& cfg, std::uint64_t index = 0);

}  // namespace externet

#endif  // EXTERNET_GENERATOR_H_
