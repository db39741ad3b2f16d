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

#ifndef EXTERNET_ORACLE_H_
#define EXTERNET_ORACLE_H_

#include <cstdint>
#include <optional>
#include <string>

#include "externet/instance.h"

namespace externet {

struct OracleResult {
  double opt_value = 0.0;
  Allocation opt_alloc;
  std::uint64_t enumerated = 0;
};

inline constexpr std::uint64_t kBruteForceLimit = 10'000'000;

// Exhaustive search over all m^n assignments. Ties go to the lexicographically
// smallest assignment vector. `threads` > 1 splits the search over the first
// agent's item; the reduction is order-fixed, so the result does not depend on
// the thread count. Throws Error(kSizeLimit) when m^n > kBruteForceLimit.
OracleResult BruteForce(const Instance& inst, int threads = 1);

// A violating configuration of a set-function inequality. Sets are bitmasks
// over agents.
struct StructureWitness {
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  int element = -1;      // -1 for monotonicity witnesses
  double value_a = 0.0;  // marginal of `element` at a (or f(a))
  double value_b = 0.0;  // marginal of `element` at b (or f(b))

  std::string ToString() const;
};

struct StructureCheck {
  bool holds = true;
  std::optional<StructureWitness> witness;
};

inline constexpr int kStructureCheckMaxAgents = 12;
inline constexpr double kStructureTolerance = 1e-9;

// Exhaustive checks of f_i(S) = sum_{j in S} f_ij(sum_{k in S} a^i_jk) over
// all nested pairs A subset B and elements l outside B. Each returns the first
// violation in enumeration order. Throw Error(kSizeLimit) for n > 12.
StructureCheck CheckSupermodular(const Instance& inst, int item);
StructureCheck CheckSubmodular(const Instance& inst, int item);
StructureCheck CheckMonotone(const Instance& inst, int item);

}  // namespace externet

#endif  // EXTERNET_ORACLE_H_
