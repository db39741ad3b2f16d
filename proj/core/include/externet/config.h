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

#ifndef EXTERNET_CONFIG_H_
#define EXTERNET_CONFIG_H_

#include <cstdint>

namespace externet {

// Lovasz / beta relaxation solver (projected supergradient ascent).
struct SolverConfig {
  int max_iters = 5000;
  double step_constant = 1.0;
  double tolerance = 1e-9;
  std::uint64_t seed = 0;
};

// Primal-dual subgradient method for concave externalities.
struct ConcaveConfig {
  // Outer iterations; 0 picks ceil(n m^2 / epsilon^2), capped at max_iters.
  int iters = 0;
  double epsilon = 0.1;
  int max_iters = 100000;
  // Step alpha_k = step_scale / (m sqrt(n max(k, 1))).
  double step_scale = 1.0;
  // Alternating maximization of the per-item subproblem.
  int inner_iters = 100;
  double inner_tol = 1e-8;
  int inner_ascent_steps = 20;
  // Local projected-gradient refinement of the subproblem's best candidate.
  int polish_iters = 30;
  // Subproblems with at most this many agents also score every binary vertex.
  int vertex_enum_max_n = 10;
};

// Measured continuous greedy.
struct GreedyConfig {
  int steps = 100;
  // 0 uses exact multilinear gradients; otherwise gradient entries are
  // estimated from this many samples per step.
  int mc_samples = 0;
  std::uint64_t seed = 0;
};

struct PipelineConfig {
  SolverConfig solver;
  ConcaveConfig concave;
  GreedyConfig greedy;
  int rounding_trials = 200;
  std::uint64_t seed = 0;
  // Stream coordinate for per-trial seeds DeriveSeed(seed, instance, trial).
  std::uint64_t instance_index = 0;
  bool with_oracle = false;
  // Relative slack allowed when checking a guarantee against Monte Carlo
  // means.
  double guarantee_tolerance = 0.02;
  int threads = 1;
};

}  // namespace externet

#endif  // EXTERNET_CONFIG_H_
