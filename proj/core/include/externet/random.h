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

#ifndef EXTERNET_RANDOM_H_
#define EXTERNET_RANDOM_H_

#include <cstdint>
#include <random>

namespace externet {

// Mixes a base seed with stream coordinates (instance id, trial index, ...)
// so that every trial owns an independent, schedule-independent generator.
std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t a,
                         std::uint64_t b = 0);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1).
  double Uniform() { return unit_(engine_); }
  // Uniform on (0, 1]. Thresholds are drawn from here so that a zero entry is
  // never selected.
  double Threshold() { return 1.0 - unit_(engine_); }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  // Uniform integer in [0, n).
  int Index(int n) {
    return std::uniform_int_distribution<int>(0, n - 1)(engine_);
  }
  bool Bernoulli(double p) { return Uniform() < p; }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

}  // namespace externet

#endif  // EXTERNET_RANDOM_H_
