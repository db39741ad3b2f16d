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

#include "externet/oracle.h"

#include <algorithm>
#include <sstream>
#include <thread>
#include <vector>

#include "externet/error.h"

namespace externet {

namespace {

struct Best {
  double value = 0.0;
  std::vector<int> assign;
  bool found = false;
};

// Enumerates assignments whose first agent holds `first_item`, in
// lexicographic order, keeping the first strict maximum.
void EnumerateFrom(const Instance& inst, int first_item, Best* best) {
  const int n = inst.n();
  const int m = inst.m();
  std::vector<int> assign(n, 0);
  assign[0] = first_item;
  while (true) {
    const double v = PartialWelfare(inst, assign);
    if (!best->found || v > best->value) {
      best->value = v;
      best->assign = assign;
      best->found = true;
    }
    int pos = n - 1;
    while (pos >= 1 && assign[pos] == m - 1) {
      assign[pos] = 0;
      --pos;
    }
    if (pos < 1) break;
    ++assign[pos];
  }
}

std::vector<double> AllSubsetValues(const Instance& inst, int item) {
  if (inst.n() > kStructureCheckMaxAgents) {
    throw Error(ErrorCode::kSizeLimit,
                "structure checks are limited to n <= 12");
  }
  if (item < 0 || item >= inst.m()) {
    throw Error(ErrorCode::kInvalidInput, "item index out of range");
  }
  const std::uint64_t count = std::uint64_t{1} << inst.n();
  std::vector<double> values(count);
  for (std::uint64_t s = 0; s < count; ++s) {
    values[s] = ItemValueMask(inst, item, s);
  }
  return values;
}

// Walks every nested pair A subset B (B over all sets, A over subsets of B)
// and every l outside B; `violated(marginal_a, marginal_b)` decides failure.
template <typename Violated>
StructureCheck CheckMarginals(const Instance& inst, int item,
                              Violated violated) {
  const std::vector<double> f = AllSubsetValues(inst, item);
  const int n = inst.n();
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  for (std::uint64_t b = 0; b <= full; ++b) {
    for (std::uint64_t a = b;; a = (a - 1) & b) {
      for (int l = 0; l < n; ++l) {
        const std::uint64_t bit = std::uint64_t{1} << l;
        if (b & bit) continue;
        const double ma = f[a | bit] - f[a];
        const double mb = f[b | bit] - f[b];
        if (violated(ma, mb)) {
          return {false, StructureWitness{a, b, l, ma, mb}};
        }
      }
      if (a == 0) break;
    }
  }
  return {};
}

std::string MaskToString(std::uint64_t mask) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (int j = 0; mask >> j; ++j) {
    if ((mask >> j) & 1U) {
      if (!first) os << ',';
      os << j;
      first = false;
    }
  }
  os << '}';
  return os.str();
}

}  // namespace

OracleResult BruteForce(const Instance& inst, int threads) {
  const int n = inst.n();
  const int m = inst.m();
  std::uint64_t total = 1;
  for (int j = 0; j < n; ++j) {
    total *= static_cast<std::uint64_t>(m);
    if (total > kBruteForceLimit) {
      throw Error(ErrorCode::kSizeLimit,
                  "m^n exceeds the brute-force limit of 1e7 assignments");
    }
  }
  std::vector<Best> partial(m);
  threads = std::clamp(threads, 1, m);
  if (threads == 1) {
    for (int i = 0; i < m; ++i) EnumerateFrom(inst, i, &partial[i]);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (int i = t; i < m; i += threads)
          EnumerateFrom(inst, i, &partial[i]);
      });
    }
    for (auto& th : pool) th.join();
  }
  OracleResult result;
  result.enumerated = total;
  bool found = false;
  for (const Best& b : partial) {
    if (!found || b.value > result.opt_value) {
      result.opt_value = b.value;
      result.opt_alloc.assign = b.assign;
      found = true;
    }
  }
  return result;
}

std::string StructureWitness::ToString() const {
  std::ostringstream os;
  os << "A=" << MaskToString(a) << " B=" << MaskToString(b);
  if (element >= 0) {
    os << " l=" << element << " marginal(A)=" << value_a
       << " marginal(B)=" << value_b;
  } else {
    os << " f(A)=" << value_a << " f(B)=" << value_b;
  }
  return os.str();
}

StructureCheck CheckSupermodular(const Instance& inst, int item) {
  return CheckMarginals(inst, item, [](double ma, double mb) {
    return ma > mb + kStructureTolerance;
  });
}

StructureCheck CheckSubmodular(const Instance& inst, int item) {
  return CheckMarginals(inst, item, [](double ma, double mb) {
    return ma < mb - kStructureTolerance;
  });
}

StructureCheck CheckMonotone(const Instance& inst, int item) {
  const std::vector<double> f = AllSubsetValues(inst, item);
  const std::uint64_t full = (std::uint64_t{1} << inst.n()) - 1;
  // Monotone iff no single-element extension decreases f.
  for (std::uint64_t a = 0; a <= full; ++a) {
    for (int l = 0; l < inst.n(); ++l) {
      const std::uint64_t bit = std::uint64_t{1} << l;
      if (a & bit) continue;
      if (f[a | bit] < f[a] - kStructureTolerance) {
        return {false, StructureWitness{a, a | bit, -1, f[a], f[a | bit]}};
      }
    }
  }
  return {};
}

}  // namespace externet
