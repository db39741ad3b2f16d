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

// Command-line front end: generate, solve, batch, oracle-check.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "externet/error.h"
#include "externet/experiment.h"
#include "externet/generator.h"
#include "externet/instance_io.h"
#include "externet/oracle.h"
#include "externet/pipelines.h"

namespace {

using externet::ExperimentConfig;

constexpr int kExitError = 1;
constexpr int kExitViolation = 2;

// Flags shared by every verb. Values are applied over the --config file only
// when given on the command line.
class Flags {
 public:
  void AddConfig(CLI::App* app) {
    app->add_option("--config", config_path_, "JSON config file")
        ->check(CLI::ExistingFile);
  }

  void AddGenerator(CLI::App* app) {
    Add(app, "--regime", regime_,
        "PositiveLinear, PositiveConvex, "
        "PositiveConcave or NegativeLinear",
        [this](ExperimentConfig* c) {
          c->generator.regime = externet::ParseRegime(regime_);
        });
    Add(app, "-n,--agents", n_, "agents per instance",
        [this](ExperimentConfig* c) { c->generator.n = n_; });
    Add(app, "-m,--items", m_, "items per instance",
        [this](ExperimentConfig* c) { c->generator.m = m_; });
    Add(app, "--seed", seed_, "64-bit master seed",
        [this](ExperimentConfig* c) {
          c->generator.seed = seed_;
          c->pipeline.seed = seed_;
        });
    Add(app, "--instance-count", count_, "number of instances",
        [this](ExperimentConfig* c) { c->instance_count = count_; });
    AddFlag(app, "--diagonally-dominant", dominant_,
            "NegativeLinear: clip rows to nonnegative sums",
            [this](ExperimentConfig* c) {
              c->generator.diagonally_dominant = dominant_;
            });
    AddFlag(app, "--graph", graph_, "graph-based 0/1 weights",
            [this](ExperimentConfig* c) { c->generator.graph = graph_; });
    Add(app, "--edge-probability", edge_p_, "digraph edge probability",
        [this](ExperimentConfig* c) {
          c->generator.edge_probability = edge_p_;
        });
    Add(app, "--convex-coefficients", coefficients_,
        "polynomial coefficients c_1..c_d", [this](ExperimentConfig* c) {
          c->generator.convex_coefficients = coefficients_;
        });
    Add(app, "--concave-exponent", exponent_, "PowerConcave exponent",
        [this](ExperimentConfig* c) {
          c->generator.concave_exponent = exponent_;
        });
    AddFlag(app, "--concave-log", log_, "use ln(1 + y)",
            [this](ExperimentConfig* c) { c->generator.concave_log = log_; });
  }

  void AddSolver(CLI::App* app) {
    Add(app, "-a,--algorithm", algorithm_,
        "lovasz-kt, poly-lovasz-kt, convex-fcr, concave-pd, concave-beta, "
        "negative-cg or oracle",
        [this](ExperimentConfig* c) { c->algorithm = algorithm_; });
    Add(app, "--rounding-trials", trials_, "rounding trials per instance",
        [this](ExperimentConfig* c) { c->pipeline.rounding_trials = trials_; });
    Add(app, "--max-iters", max_iters_, "relaxation solver iterations",
        [this](ExperimentConfig* c) {
          c->pipeline.solver.max_iters = max_iters_;
        });
    Add(app, "--step-scale", step_scale_, "step-size constant",
        [this](ExperimentConfig* c) {
          c->pipeline.solver.step_constant = step_scale_;
          c->pipeline.concave.step_scale = step_scale_;
        });
    Add(app, "--pd-iters", pd_iters_, "primal-dual iterations (0 = auto)",
        [this](ExperimentConfig* c) { c->pipeline.concave.iters = pd_iters_; });
    Add(app, "--greedy-steps", greedy_steps_, "continuous greedy steps",
        [this](ExperimentConfig* c) {
          c->pipeline.greedy.steps = greedy_steps_;
        });
    Add(app, "--mc-samples", mc_samples_,
        "sampled greedy gradients (0 = exact)", [this](ExperimentConfig* c) {
          c->pipeline.greedy.mc_samples = mc_samples_;
        });
    Add(app, "--guarantee-tolerance", tolerance_,
        "relative slack for guarantee checks", [this](ExperimentConfig* c) {
          c->pipeline.guarantee_tolerance = tolerance_;
        });
    Add(app, "--threads", threads_, "worker threads (0 = all cores)",
        [this](ExperimentConfig* c) { c->threads = threads_; });
    AddFlag(app, "--timing", timing_, "include wall_time_ms in output",
            [this](ExperimentConfig* c) { c->timing = timing_; });
  }

  void AddOracleSwitch(CLI::App* app) {
    AddFlag(app, "--with-oracle,!--no-oracle", with_oracle_,
            "compare against brute force", [this](ExperimentConfig* c) {
              c->pipeline.with_oracle = with_oracle_;
            });
  }

  ExperimentConfig Build(bool oracle_default, int count_default = 10) const {
    ExperimentConfig cfg;
    cfg.pipeline.with_oracle = oracle_default;
    cfg.instance_count = count_default;
    if (!config_path_.empty()) externet::ApplyConfigFile(config_path_, &cfg);
    for (const auto& [opt, apply] : setters_) {
      if (opt->count() > 0) apply(&cfg);
    }
    return cfg;
  }

 private:
  using Setter = std::function<void(ExperimentConfig*)>;

  template <typename T>
  void Add(CLI::App* app, const std::string& name, T& value,
           const std::string& help, Setter apply) {
    setters_.emplace_back(app->add_option(name, value, help), std::move(apply));
  }

  void AddFlag(CLI::App* app, const std::string& name, bool& value,
               const std::string& help, Setter apply) {
    setters_.emplace_back(app->add_flag(name, value, help), std::move(apply));
  }

  std::string config_path_;
  std::string regime_;
  int n_ = 0;
  int m_ = 0;
  std::uint64_t seed_ = 0;
  int count_ = 0;
  bool dominant_ = false;
  bool graph_ = false;
  double edge_p_ = 0.0;
  std::vector<double> coefficients_;
  double exponent_ = 0.0;
  bool log_ = false;
  std::string algorithm_;
  int trials_ = 0;
  int max_iters_ = 0;
  double step_scale_ = 0.0;
  int pd_iters_ = 0;
  int greedy_steps_ = 0;
  int mc_samples_ = 0;
  double tolerance_ = 0.0;
  int threads_ = 0;
  bool timing_ = false;
  bool with_oracle_ = false;
  std::vector<std::pair<CLI::Option*, Setter>> setters_;
};

void WriteOutput(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    externet::WriteTextFile(path, text);
  }
}

externet::PipelineConfig SolvePipeline(const ExperimentConfig& cfg) {
  externet::PipelineConfig pipe = cfg.pipeline;
  pipe.threads = externet::ResolveThreads(cfg.threads);
  return pipe;
}

int RunGenerate(const Flags& flags, const std::string& out_dir) {
  ExperimentConfig cfg = flags.Build(false, 1);
  if (!out_dir.empty()) cfg.instances_dir = out_dir;
  externet::ValidateExperiment(cfg);
  if (cfg.instances_dir.empty()) {
    if (cfg.instance_count != 1) {
      throw externet::Error(externet::ErrorCode::kInvalidInput,
                            "--out-dir is required for more than one instance");
    }
    std::cout << externet::InstanceToJson(
        externet::GenerateInstance(cfg.generator, 0));
    return 0;
  }
  std::filesystem::create_directories(cfg.instances_dir);
  for (int idx = 0; idx < cfg.instance_count; ++idx) {
    const std::string path = (std::filesystem::path(cfg.instances_dir) /
                              (externet::InstanceId(idx) + ".json"))
                                 .string();
    externet::WriteInstanceFile(path,
                                externet::GenerateInstance(cfg.generator, idx));
    std::cout << path << "\n";
  }
  return 0;
}

int RunSolve(const Flags& flags, const std::string& instance_path,
             const std::string& out) {
  const ExperimentConfig cfg = flags.Build(false);
  externet::ValidateExperiment(cfg);
  const externet::Instance inst = externet::ReadInstanceFile(instance_path);
  const std::string algorithm = cfg.algorithm.empty()
                                    ? externet::DefaultAlgorithm(inst.regime())
                                    : cfg.algorithm;
  externet::SolveReport report =
      externet::RunAlgorithm(algorithm, inst, SolvePipeline(cfg));
  report.instance_id = std::filesystem::path(instance_path).stem().string();
  WriteOutput(out, externet::ReportToJson(report, cfg.timing));
  return externet::IsViolation(report) ? kExitViolation : 0;
}

int RunBatch(const Flags& flags, const std::string& csv,
             const std::string& instances_dir) {
  ExperimentConfig cfg = flags.Build(true);
  if (!csv.empty()) cfg.csv_path = csv;
  if (!instances_dir.empty()) cfg.instances_dir = instances_dir;
  const externet::BatchResult result = externet::RunBatch(cfg);
  WriteOutput(cfg.csv_path, externet::BatchToCsv(result.reports, cfg.timing));
  if (result.violations > 0) {
    std::cerr << "externet: " << result.violations << " of "
              << result.reports.size() << " instances violate their bound\n";
    return kExitViolation;
  }
  return 0;
}

int RunOracleCheck(const Flags& flags, const std::string& instance_path,
                   const std::string& out) {
  ExperimentConfig cfg = flags.Build(true);
  cfg.pipeline.with_oracle = true;
  externet::ValidateExperiment(cfg);
  const externet::Instance inst = externet::ReadInstanceFile(instance_path);
  const std::string algorithm =
      cfg.algorithm.empty() ? "oracle" : cfg.algorithm;
  externet::SolveReport report =
      externet::RunAlgorithm(algorithm, inst, SolvePipeline(cfg));
  report.instance_id = std::filesystem::path(instance_path).stem().string();
  WriteOutput(out, externet::ReportToJson(report, cfg.timing));
  return externet::IsViolation(report) ? kExitViolation : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Welfare maximization under network externalities"};
  app.require_subcommand(1);

  Flags gen_flags;
  std::string gen_out_dir;
  CLI::App* generate = app.add_subcommand("generate", "write random instances");
  gen_flags.AddConfig(generate);
  gen_flags.AddGenerator(generate);
  generate->add_option("-o,--out-dir", gen_out_dir,
                       "directory for instance files (stdout if omitted and "
                       "one instance is requested)");

  Flags solve_flags;
  std::string solve_instance;
  std::string solve_out;
  CLI::App* solve =
      app.add_subcommand("solve", "run a pipeline on one instance");
  solve_flags.AddConfig(solve);
  solve_flags.AddSolver(solve);
  solve_flags.AddOracleSwitch(solve);
  solve->add_option("instance", solve_instance, "instance JSON")
      ->required()
      ->check(CLI::ExistingFile);
  solve->add_option("-o,--out", solve_out, "report path (stdout by default)");

  Flags batch_flags;
  std::string batch_csv;
  std::string batch_instances;
  CLI::App* batch =
      app.add_subcommand("batch", "generate instances, solve, emit CSV");
  batch_flags.AddConfig(batch);
  batch_flags.AddGenerator(batch);
  batch_flags.AddSolver(batch);
  batch_flags.AddOracleSwitch(batch);
  batch->add_option("--csv", batch_csv, "CSV path (stdout by default)");
  batch->add_option("--instances-dir", batch_instances,
                    "also write the generated instances here");

  Flags check_flags;
  std::string check_instance;
  std::string check_out;
  CLI::App* check = app.add_subcommand(
      "oracle-check", "compare a pipeline (default: oracle) with brute force");
  check_flags.AddConfig(check);
  check_flags.AddSolver(check);
  check->add_option("instance", check_instance, "instance JSON")
      ->required()
      ->check(CLI::ExistingFile);
  check->add_option("-o,--out", check_out, "report path (stdout by default)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed()) return RunGenerate(gen_flags, gen_out_dir);
    if (solve->parsed())
      return RunSolve(solve_flags, solve_instance, solve_out);
    if (batch->parsed())
      return RunBatch(batch_flags, batch_csv, batch_instances);
    if (check->parsed()) {
      return RunOracleCheck(check_flags, check_instance, check_out);
    }
  } catch (const externet::Error& e) {
    std::cerr << "externet: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "externet: " << e.what() << "\n";
    return kExitError;
  }
  return 0;
}
