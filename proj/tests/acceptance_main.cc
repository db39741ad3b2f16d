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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "externet/concave.h"
#include "externet/contention.h"
#include "externet/experiment.h"
#include "externet/generator.h"
#include "externet/lovasz.h"
#include "externet/negative.h"
#include "externet/oracle.h"
#include "externet/pipelines.h"

namespace externet {
namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string Format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), fmt, args...);
  return buf;
}

Matrix RandomStochastic(int n, int m, Rng& rng) {
  Matrix x(n, m);
  for (int j = 0; j < n; ++j) {
    double sum = 0.0;
    for (int i = 0; i < m; ++i) sum += x(j, i) = rng.Uniform() + 1e-3;
    for (int i = 0; i < m; ++i) x(j, i) /= sum;
  }
  return x;
}

Instance Generate(Regime regime, int n, int m, std::uint64_t seed,
                  std::uint64_t index,
                  const std::function<void(GeneratorConfig*)>& tweak = {}) {
  GeneratorConfig g;
  g.regime = regime;
  g.n = n;
  g.m = m;
  g.seed = seed;
  if (tweak) tweak(&g);
  return GenerateInstance(g, index);
}

// Shared harness for the relaxation-and-round pipelines: per-instance ratio of
// mean rounded welfare to OPT, plus relaxation >= OPT.
Outcome RatioHarness(const std::string& algorithm, Regime regime,
                     std::uint64_t seed, double min_ratio,
                     const std::function<void(GeneratorConfig*)>& tweak) {
  Outcome out;
  double worst = std::numeric_limits<double>::infinity();
  double sum = 0.0;
  double worst_slack = std::numeric_limits<double>::infinity();
  const auto t0 = std::chrono::steady_clock::now();
  constexpr int kInstances = 100;
  for (int t = 0; t < kInstances; ++t) {
    const int n = 4 + t % 5;
    const int m = 2 + (t / 5) % 2;
    const Instance inst = Generate(regime, n, m, seed, t, tweak);
    PipelineConfig pc;
    pc.rounding_trials = 200;
    pc.seed = seed;
    pc.instance_index = t;
    pc.with_oracle = true;
    const SolveReport r = RunAlgorithm(algorithm, inst, pc);
    const double ratio = r.rounded_welfare_mean / *r.oracle_opt;
    worst = std::min(worst, ratio);
    sum += ratio;
    const double slack = *r.relaxation_value - *r.oracle_opt;
    worst_slack = std::min(worst_slack, slack);
    if (ratio < min_ratio || slack < -1e-6) out.pass = false;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  if (secs >= 300.0) out.pass = false;
  out.detail = Format(
      "min ratio %.4f, mean ratio %.4f (need >= %.4f), min relaxation - OPT "
      "%.3g, %.1f s",
      worst, sum / kInstances, min_ratio, worst_slack, secs);
  return out;
}

Outcome LinearRatio() {
  return RatioHarness("lovasz-kt", Regime::kPositiveLinear, 1001, 0.5 - 0.02,
                      {});
}

Outcome QuadraticRatio() {
  return RatioHarness(
      "poly-lovasz-kt", Regime::kPositiveConvex, 1002, 1.0 / 3 - 0.02,
      [](GeneratorConfig* g) { g->convex_coefficients = {0.0, 1.0}; });
}

Outcome FairResolution() {
  Outcome out;
  Rng rng(1003);
  double worst_err = 0.0;
  double worst_freq = 1.0;
  constexpr int kSamples = 100000;
  for (int v = 0; v < 20; ++v) {
    const int m = 2 + rng.Index(5);
    std::vector<double> p(m);
    double total = 0.0;
    for (double& e : p) total += e = rng.Uniform() + 1e-3;
    // Half the vectors sum to one, the rest to a random value below one.
    const double scale = v % 2 ? rng.Uniform(0.2, 1.0) : 1.0;
    for (double& e : p) e *= scale / total;
    const int item = rng.Index(m);
    double prod = 1.0;
    double sum = 0.0;
    for (double e : p) {
      prod *= 1.0 - e;
      sum += e;
    }
    const double exact = (1.0 - prod) / sum;
    int kept = 0;
    std::vector<int> requested;
    for (int s = 0; s < kSamples; ++s) {
      requested.clear();
      for (int k = 0; k < m; ++k) {
        if (k == item || rng.Bernoulli(p[k])) requested.push_back(k);
      }
      kept += FairResolve(p, requested, rng) == item;
    }
    const double freq = kept / static_cast<double>(kSamples);
    worst_err = std::max(worst_err, std::abs(freq - exact));
    worst_freq = std::min(worst_freq, freq);
    if (std::abs(freq - exact) > 0.01) out.pass = false;
    if (freq < 1.0 - std::exp(-1.0) - 0.01) out.pass = false;
  }
  out.detail = Format(
      "max |freq - exact| %.4f (tol 0.01), min retention %.4f (need >= %.4f)",
      worst_err, worst_freq, 1.0 - std::exp(-1.0) - 0.01);
  return out;
}

Outcome ConvexCurvature() {
  Outcome ratio = RatioHarness("convex-fcr", Regime::kPositiveLinear, 1004,
                               0.25 - 0.02, {});
  // Pairwise retention: both agents keep an item given both requested it.
  Rng rng(1005);
  double worst = 1.0;
  constexpr int kConditional = 100000;
  for (int v = 0; v < 10; ++v) {
    const Matrix x = RandomStochastic(4, 3, rng);
    int item = 0;
    for (int i = 1; i < 3; ++i) {
      if (std::min(x(0, i), x(1, i)) > std::min(x(0, item), x(1, item))) {
        item = i;
      }
    }
    int hits = 0;
    int both = 0;
    for (long s = 0; hits < kConditional && s < 50'000'000; ++s) {
      Rng trial(DeriveSeed(1005, v, s));
      const StageOneMatrix st = StageOneRound(x, trial);
      if (st.xb(0, item) == 0.0 || st.xb(1, item) == 0.0) continue;
      ++hits;
      const Allocation a = ResolveRows(x, st, trial).allocation;
      both += a.assign[0] == item && a.assign[1] == item;
    }
    worst = std::min(worst, both / static_cast<double>(hits));
  }
  Outcome out;
  out.pass = ratio.pass && worst >= 0.25 - 0.01;
  out.detail = ratio.detail +
               Format("; min pairwise retention %.4f (need >= 0.24)", worst);
  return out;
}

Outcome Structure() {
  Outcome out;
  int super_fail = 0;
  int sub_fail = 0;
  for (int t = 0; t < 100; ++t) {
    const int n = 3 + t % 4;
    const Instance conv = Generate(
        t % 2 ? Regime::kPositiveConvex : Regime::kPositiveLinear, n, 2, 1006,
        t, [](GeneratorConfig* g) { g->convex_coefficients = {0.5, 1.0}; });
    const Instance neg =
        Generate(Regime::kNegativeLinear, n, 2, 1007, t,
                 [t](GeneratorConfig* g) { g->diagonally_dominant = t % 2; });
    for (int i = 0; i < 2; ++i) {
      super_fail += !CheckSupermodular(conv, i).holds;
      sub_fail += !CheckSubmodular(neg, i).holds;
    }
  }
  Matrix a(3, 3);
  a(0, 0) = 1.0;
  a(1, 0) = a(1, 2) = 0.5;
  a(2, 0) = a(2, 1) = 0.5;
  const Instance conc(Regime::kPositiveConcave, {a},
                      {ExternalitySpec::PowerConcave(0.5)});
  const StructureCheck c = CheckSupermodular(conc, 0);
  const bool witnessed = !c.holds && c.witness.has_value();
  out.pass = super_fail == 0 && sub_fail == 0 && witnessed;
  out.detail = Format(
      "supermodularity failures %d/200, submodularity failures %d/200, concave "
      "counterexample %s",
      super_fail, sub_fail,
      witnessed ? c.witness->ToString().c_str() : "not found");
  return out;
}

Outcome LovaszConsistency() {
  Outcome out;
  Rng rng(1008);
  double worst_z = 0.0;
  double worst_expand = 0.0;
  double worst_binary = 0.0;
  for (int t = 0; t < 50; ++t) {
    const int n = 3 + t % 5;
    const int m = 2 + t % 2;
    const Instance inst = Generate(Regime::kPositiveLinear, n, m, 1008, t);
    const ExpandedLovasz exp = ExpandPolynomial(inst);
    const Matrix x = RandomStochastic(n, m, rng);
    const double closed = LovaszLinearClosedForm(inst, x);
    const double expanded = EvalExpandedLovasz(exp, x);
    const Estimate sampled = LovaszSampled(inst, x, 20000, DeriveSeed(1008, t));
    worst_expand = std::max(worst_expand, std::abs(closed - expanded));
    const double z = std::max(std::abs(sampled.value - closed),
                              std::abs(sampled.value - expanded)) /
                     std::max(sampled.std_error, 1e-300);
    worst_z = std::max(worst_z, z);
    if (z > 3.0 || std::abs(closed - expanded) > 3 * sampled.std_error) {
      out.pass = false;
    }

    Matrix b(n, m);
    for (int j = 0; j < n; ++j) b(j, rng.Index(m)) = 1.0;
    const double w = WelfareBinary(inst, b);
    const double err = std::max(
        {std::abs(LovaszLinearClosedForm(inst, b) - w),
         std::abs(EvalExpandedLovasz(exp, b) - w),
         std::abs(LovaszSampled(inst, b, 100, DeriveSeed(1009, t)).value - w)});
    worst_binary = std::max(worst_binary, err);
    if (err > 1e-9) out.pass = false;
  }
  out.detail = Format(
      "max sampled deviation %.2f stderr (tol 3), max |closed - expanded| "
      "%.3g, max binary error %.3g (tol 1e-9)",
      worst_z, worst_expand, worst_binary);
  return out;
}

Outcome IndependentRounding() {
  Outcome out;
  Rng rng(1010);
  int tested = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  for (int t = 0; tested < 30 && t < 1000; ++t) {
    const int n = 3 + t % 4;
    const int m = 2 + t % 2;
    const Instance inst =
        Generate(Regime::kPositiveConcave, n, m, 1010, t,
                 [t](GeneratorConfig* g) { g->concave_log = t % 2; });
    const Matrix x = RandomStochastic(n, m, rng);
    const double eta = Eta(inst, x);
    if (!(eta > 0.3)) continue;
    ++tested;
    const double fx = ConcaveRelaxationObjective(inst, x);
    TrialStats stats;
    for (int s = 0; s < 500; ++s) {
      const Allocation a = IndependentRound(inst, x, DeriveSeed(1010, t, s));
      stats.Add(Welfare(inst, a), a);
    }
    const double margin = stats.Mean() - (IndependentRoundingFactor(eta) * fx -
                                          3 * stats.StdError());
    worst_margin = std::min(worst_margin, margin);
    if (margin < 0.0) out.pass = false;
  }
  if (tested < 30) out.pass = false;
  out.detail =
      Format("%d instances with eta > 0.3, min (mean - bound + 3 stderr) %.4f",
             tested, worst_margin);
  return out;
}

Outcome PrimalDual() {
  Outcome out;
  double worst = std::numeric_limits<double>::infinity();
  long iterates = 0;
  for (int t = 0; t < 50; ++t) {
    const int n = 2 + t % 5;
    const Instance inst =
        Generate(Regime::kPositiveConcave, n, 2, 1011, t,
                 [t](GeneratorConfig* g) { g->concave_log = t % 2; });
    const double opt = BruteForce(inst).opt_value;
    const PrimalDualTrace tr = PrimalDualSolve(inst, ConcaveConfig{});
    if (!tr.dual_is_estimate) out.pass = false;
    for (const DualIterate& it : tr.iterates) {
      worst = std::min(worst, it.dual_value + 1e-6 - opt);
      ++iterates;
    }
  }
  if (worst < 0.0) out.pass = false;

  Rng rng(1012);
  double worst_grid = std::numeric_limits<double>::infinity();
  for (int t = 0; t < 20; ++t) {
    const Instance inst =
        Generate(Regime::kPositiveConcave, 2, 2, 1012, t,
                 [t](GeneratorConfig* g) { g->concave_log = t % 2; });
    const std::vector<double> p = {rng.Uniform(-0.3, 1.2),
                                   rng.Uniform(-0.3, 1.2)};
    const int item = t % 2;
    const InnerResult r = InnerArgmax(inst, item, p, ConcaveConfig{});
    double grid = -std::numeric_limits<double>::infinity();
    std::vector<double> x(2);
    for (int a = 0; a <= 200; ++a) {
      for (int b = 0; b <= 200; ++b) {
        x[0] = a / 200.0;
        x[1] = b / 200.0;
        grid = std::max(grid, InnerObjective(inst, item, p, x));
      }
    }
    worst_grid = std::min(worst_grid, r.objective - grid);
  }
  if (worst_grid < -1e-3) out.pass = false;
  out.detail = Format(
      "min D(p(k)) + 1e-6 - OPT %.3g over %ld estimated iterates, min inner - "
      "grid %.3g (tol -1e-3)",
      worst, iterates, worst_grid);
  return out;
}

Outcome ContinuousGreedyBounds() {
  Outcome out;
  const double inv_e = std::exp(-1.0);
  double worst_f = std::numeric_limits<double>::infinity();
  double worst_f_dd = std::numeric_limits<double>::infinity();
  double worst_round = std::numeric_limits<double>::infinity();
  int forced = 0;
  for (int t = 0; t < 100; ++t) {
    const int n = 2 + t % 7;
    const int m = 1 + (t / 7) % 3;
    const bool dd = t % 2;
    const Instance inst =
        Generate(Regime::kNegativeLinear, n, m, 1013, t,
                 [dd](GeneratorConfig* g) { g->diagonally_dominant = dd; });
    PipelineConfig pc;
    pc.seed = 1013;
    pc.instance_index = t;
    pc.rounding_trials = 200;
    pc.with_oracle = true;
    const SolveReport r = RunAlgorithm("negative-cg", inst, pc);
    const double opt = *r.oracle_opt;
    const double f = *r.fractional_value;
    worst_f = std::min(worst_f, f - inv_e * opt);
    if (f < inv_e * opt - 1e-9) out.pass = false;
    if (dd) {
      worst_f_dd = std::min(worst_f_dd, f - (1 - inv_e) * opt);
      if (f < (1 - inv_e) * opt - 1e-9) out.pass = false;
    }
    const double margin =
        r.rounded_welfare_mean - (inv_e * opt - 3 * r.rounded_welfare_stderr);
    worst_round = std::min(worst_round, margin);
    if (margin < -1e-9) out.pass = false;
    forced += r.forced_assignments;
  }

  Rng rng(1014);
  double worst_grad = 0.0;
  constexpr double kH = 1e-5;
  for (int t = 0; t < 20; ++t) {
    const Instance inst = Generate(Regime::kNegativeLinear, 5, 3, 1014, t);
    Matrix x = RandomStochastic(5, 3, rng);
    for (double& v : x.data()) v = 0.1 + 0.8 * v;
    const Matrix g = MultilinearGradient(inst, x);
    for (int j = 0; j < 5; ++j) {
      for (int i = 0; i < 3; ++i) {
        Matrix up = x;
        Matrix down = x;
        up(j, i) += kH;
        down(j, i) -= kH;
        const double fd =
            (MultilinearValue(inst, up) - MultilinearValue(inst, down)) /
            (2 * kH);
        worst_grad = std::max(worst_grad, std::abs(fd - g(j, i)));
      }
    }
  }
  if (worst_grad > 1e-6) out.pass = false;
  out.detail = Format(
      "min F - OPT/e %.4g, min F - (1-1/e)OPT on dominant %.4g, min rounded "
      "margin %.4g, max gradient error %.2g, forced assignments %d",
      worst_f, worst_f_dd, worst_round, worst_grad, forced);
  return out;
}

std::string Slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome Determinism(const std::string& cli, const std::string& workdir,
                    std::chrono::steady_clock::time_point start) {
  Outcome out;
  std::string first;
  std::string second;
  std::string how;
  if (!cli.empty()) {
    std::filesystem::create_directories(workdir);
    const std::filesystem::path a =
        std::filesystem::path(workdir) / "run_a.csv";
    const std::filesystem::path b =
        std::filesystem::path(workdir) / "run_b.csv";
    const std::string base =
        "\"" + cli +
        "\" batch --regime PositiveConvex -n 5 -m 2 --seed 1015 "
        "--instance-count 8 --rounding-trials 100 --csv ";
    const int rc_a = std::system((base + "\"" + a.string() + "\"").c_str());
    const int rc_b = std::system((base + "\"" + b.string() + "\"").c_str());
    if (rc_a != 0 || rc_b != 0) {
      out.pass = false;
      out.detail = Format("batch exited with %d / %d", rc_a, rc_b);
      return out;
    }
    first = Slurp(a);
    second = Slurp(b);
    how = "command-line batch";
  } else {
    ExperimentConfig cfg;
    cfg.generator.regime = Regime::kPositiveConvex;
    cfg.generator.n = 5;
    cfg.generator.m = 2;
    cfg.generator.seed = 1015;
    cfg.instance_count = 8;
    cfg.pipeline.rounding_trials = 100;
    first = BatchToCsv(RunBatch(cfg).reports, false);
    second = BatchToCsv(RunBatch(cfg).reports, false);
    how = "in-process batch";
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  const bool same = !first.empty() && first == second;
  out.pass = same && secs < 1800.0;
  out.detail =
      Format("%s %s (%zu bytes), suite time %.1f s (limit 1800)", how.c_str(),
             same ? "identical" : "differs", first.size(), secs);
  return out;
}

}  // namespace
}  // namespace externet

int main(int argc, char** argv) {
  using namespace externet;
  CLI::App app{"acceptance checks"};
  std::string cli;
  std::string workdir = "acceptance_work";
  app.add_option("--cli", cli, "externet binary for the batch check");
  app.add_option("--workdir", workdir, "scratch directory");
  CLI11_PARSE(app, argc, argv);

  const auto start = std::chrono::steady_clock::now();
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"linear relaxation-and-round ratio", LinearRatio},
      {"quadratic relaxation-and-round ratio", QuadraticRatio},
      {"fair contention resolution retention", FairResolution},
      {"convex contention pipeline", ConvexCurvature},
      {"set-function structure", Structure},
      {"Lovasz extension consistency", LovaszConsistency},
      {"independent rounding constant", IndependentRounding},
      {"primal-dual weak duality and inner solver", PrimalDual},
      {"continuous greedy bounds", ContinuousGreedyBounds},
      {"determinism and runtime",
       [&] { return Determinism(cli, workdir, start); }},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failures += !o.pass;
    std::printf("%s [%zu] %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1,
                criteria[k].name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
