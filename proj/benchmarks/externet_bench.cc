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

#include <benchmark/benchmark.h>

#include "externet/concave.h"
#include "externet/contention.h"
#include "externet/generator.h"
#include "externet/lovasz.h"
#include "externet/negative.h"
#include "externet/oracle.h"

namespace {

using externet::GenerateInstance;
using externet::GeneratorConfig;
using externet::Regime;

GeneratorConfig Config(Regime regime, int n, int m) {
  GeneratorConfig cfg;
  cfg.regime = regime;
  cfg.n = n;
  cfg.m = m;
  cfg.seed = 2026;
  return cfg;
}

void BM_BruteForce(benchmark::State& state) {
  const auto inst = GenerateInstance(
      Config(Regime::kPositiveLinear, static_cast<int>(state.range(0)), 3));
  for (auto _ : state) {
    benchmark::DoNotOptimize(externet::BruteForce(inst).opt_value);
  }
}
BENCHMARK(BM_BruteForce)->Arg(6)->Arg(8)->Arg(10);

void BM_LovaszRelaxation(benchmark::State& state) {
  const auto inst = GenerateInstance(
      Config(Regime::kPositiveLinear, static_cast<int>(state.range(0)), 3));
  const auto exp = externet::ExpandPolynomial(inst);
  for (auto _ : state) {
    benchmark::DoNotOptimize(externet::SolveRelaxation(exp, {}).value);
  }
}
BENCHMARK(BM_LovaszRelaxation)->Arg(8)->Arg(16)->Arg(32);

void BM_PolyRelaxation(benchmark::State& state) {
  const auto inst = GenerateInstance(
      Config(Regime::kPositiveConvex, static_cast<int>(state.range(0)), 2));
  const auto exp = externet::ExpandPolynomial(inst);
  for (auto _ : state) {
    benchmark::DoNotOptimize(externet::SolveRelaxation(exp, {}).value);
  }
}
BENCHMARK(BM_PolyRelaxation)->Arg(6)->Arg(10);

void BM_KtRound(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto inst = GenerateInstance(Config(Regime::kPositiveLinear, n, 4));
  externet::Matrix x(n, 4, 0.25);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(externet::KtRound(inst, x, seed++));
  }
}
BENCHMARK(BM_KtRound)->Arg(16)->Arg(128);

void BM_FcrRound(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto inst = GenerateInstance(Config(Regime::kPositiveLinear, n, 4));
  externet::Matrix x(n, 4, 0.25);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(externet::FcrRound(inst, x, seed++));
  }
}
BENCHMARK(BM_FcrRound)->Arg(16)->Arg(128);

void BM_ContinuousGreedy(benchmark::State& state) {
  const auto inst = GenerateInstance(
      Config(Regime::kNegativeLinear, static_cast<int>(state.range(0)), 3));
  for (auto _ : state) {
    benchmark::DoNotOptimize(externet::ContinuousGreedy(inst, {}).x_final);
  }
}
BENCHMARK(BM_ContinuousGreedy)->Arg(8)->Arg(32);

void BM_PrimalDual(benchmark::State& state) {
  const auto inst = GenerateInstance(
      Config(Regime::kPositiveConcave, static_cast<int>(state.range(0)), 2));
  externet::ConcaveConfig cfg;
  cfg.iters = 200;
  for (auto _ : state) {
    benchmark::DoNotOptimize(externet::PrimalDualSolve(inst, cfg).best_k);
  }
}
BENCHMARK(BM_PrimalDual)->Arg(4)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
