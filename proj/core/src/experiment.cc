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

#include "externet/experiment.h"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "externet/error.h"
#include "externet/instance_io.h"
#include "externet/pipelines.h"
#include "json.hpp"

namespace externet {
namespace {

using nlohmann::json;

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string Cell(const std::optional<double>& v) {
  return v ? FormatDouble(*v) : std::string();
}

std::string Cell(bool v) { return v ? "true" : "false"; }

template <typename T>
T Get(const json& doc, const char* key) {
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::kInvalidInput,
                std::string("config key '") + key + "' has the wrong type");
  }
}

}  // namespace

void ApplyConfigJson(std::string_view text, ExperimentConfig* cfg) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::kInvalidInput,
                std::string("malformed config JSON: ") + ex.what());
  }
  if (!doc.is_object()) {
    throw Error(ErrorCode::kInvalidInput, "config must be a JSON object");
  }
  GeneratorConfig& gen = cfg->generator;
  PipelineConfig& pipe = cfg->pipeline;
  for (const auto& [key, value] : doc.items()) {
    const char* k = key.c_str();
    if (key == "regime") {
      gen.regime = ParseRegime(Get<std::string>(doc, k));
    } else if (key == "n") {
      gen.n = Get<int>(doc, k);
    } else if (key == "m") {
      gen.m = Get<int>(doc, k);
    } else if (key == "instance_count") {
      cfg->instance_count = Get<int>(doc, k);
    } else if (key == "rounding_trials") {
      pipe.rounding_trials = Get<int>(doc, k);
    } else if (key == "seed") {
      if (!value.is_number_unsigned()) {
        throw Error(ErrorCode::kInvalidInput,
                    "config key 'seed' must be an unsigned 64-bit integer");
      }
      gen.seed = value.get<std::uint64_t>();
      pipe.seed = gen.seed;
    } else if (key == "algorithm") {
      cfg->algorithm = Get<std::string>(doc, k);
    } else if (key == "max_iters") {
      pipe.solver.max_iters = Get<int>(doc, k);
    } else if (key == "step_scale") {
      pipe.solver.step_constant = Get<double>(doc, k);
      pipe.concave.step_scale = pipe.solver.step_constant;
    } else if (key == "tolerance") {
      pipe.solver.tolerance = Get<double>(doc, k);
    } else if (key == "pd_iters") {
      pipe.concave.iters = Get<int>(doc, k);
    } else if (key == "epsilon") {
      pipe.concave.epsilon = Get<double>(doc, k);
    } else if (key == "inner_iters") {
      pipe.concave.inner_iters = Get<int>(doc, k);
    } else if (key == "greedy_steps") {
      pipe.greedy.steps = Get<int>(doc, k);
    } else if (key == "mc_samples") {
      pipe.greedy.mc_samples = Get<int>(doc, k);
    } else if (key == "with_oracle") {
      pipe.with_oracle = Get<bool>(doc, k);
    } else if (key == "guarantee_tolerance") {
      pipe.guarantee_tolerance = Get<double>(doc, k);
    } else if (key == "threads") {
      cfg->threads = Get<int>(doc, k);
    } else if (key == "timing") {
      cfg->timing = Get<bool>(doc, k);
    } else if (key == "diagonally_dominant") {
      gen.diagonally_dominant = Get<bool>(doc, k);
    } else if (key == "graph") {
      gen.graph = Get<bool>(doc, k);
    } else if (key == "edge_probability") {
      gen.edge_probability = Get<double>(doc, k);
    } else if (key == "convex_coefficients") {
      gen.convex_coefficients = Get<std::vector<double>>(doc, k);
    } else if (key == "concave_exponent") {
      gen.concave_exponent = Get<double>(doc, k);
    } else if (key == "concave_log") {
      gen.concave_log = Get<bool>(doc, k);
    } else if (key == "csv") {
      cfg->csv_path = Get<std::string>(doc, k);
    } else if (key == "instances_dir") {
      cfg->instances_dir = Get<std::string>(doc, k);
    } else {
      throw Error(ErrorCode::kInvalidInput, "unknown config key '" + key + "'");
    }
  }
}

void ApplyConfigFile(const std::string& path, ExperimentConfig* cfg) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  ApplyConfigJson(buf.str(), cfg);
}

void ValidateExperiment(const ExperimentConfig& cfg) {
  const auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::kInvalidInput, what);
  };
  require(cfg.generator.n >= 1, "n must be >= 1");
  require(cfg.generator.m >= 1, "m must be >= 1");
  require(cfg.instance_count >= 1, "instance_count must be >= 1");
  require(cfg.pipeline.rounding_trials >= 1, "rounding_trials must be >= 1");
  require(cfg.pipeline.solver.max_iters >= 1, "max_iters must be >= 1");
  require(cfg.pipeline.solver.step_constant > 0.0, "step_scale must be > 0");
  require(cfg.pipeline.concave.iters >= 0, "pd_iters must be >= 0");
  require(cfg.pipeline.concave.epsilon > 0.0, "epsilon must be > 0");
  require(cfg.pipeline.greedy.steps >= 1, "greedy_steps must be >= 1");
  require(cfg.pipeline.greedy.mc_samples >= 0, "mc_samples must be >= 0");
  require(cfg.threads >= 0, "threads must be >= 0");
  if (!cfg.algorithm.empty()) AlgorithmRegimes(cfg.algorithm);
}

int ResolveThreads(int requested) {
  int threads = requested > 0
                    ? requested
                    : static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("EXTERNET_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap >= 1) {
      threads = std::min<long>(threads, cap);
    }
  }
  return std::max(1, threads);
}

std::string InstanceId(std::uint64_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "inst-%06llu",
                static_cast<unsigned long long>(index));
  return buf;
}

bool IsViolation(const SolveReport& report) {
  if (report.guarantee_satisfied && !*report.guarantee_satisfied) return true;
  return report.relaxation_is_upper_bound && report.relaxation_value &&
         report.oracle_opt &&
         *report.relaxation_value + 1e-6 < *report.oracle_opt;
}

BatchResult RunBatch(const ExperimentConfig& cfg) {
  ValidateExperiment(cfg);
  const std::string algorithm = cfg.algorithm.empty()
                                    ? DefaultAlgorithm(cfg.generator.regime)
                                    : cfg.algorithm;
  if (!cfg.instances_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.instances_dir, ec);
    if (ec) {
      throw Error(ErrorCode::kIo,
                  "cannot create '" + cfg.instances_dir + "': " + ec.message());
    }
  }
  BatchResult result;
  result.reports.resize(cfg.instance_count);
  const int workers = std::min(ResolveThreads(cfg.threads), cfg.instance_count);
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto work = [&]() {
    for (int idx = next++; idx < cfg.instance_count; idx = next++) {
      try {
        const Instance inst = GenerateInstance(cfg.generator, idx);
        const std::string id = InstanceId(idx);
        if (!cfg.instances_dir.empty()) {
          WriteInstanceFile(
              (std::filesystem::path(cfg.instances_dir) / (id + ".json"))
                  .string(),
              inst);
        }
        PipelineConfig pipe = cfg.pipeline;
        pipe.instance_index = static_cast<std::uint64_t>(idx);
        pipe.threads = 1;
        SolveReport report = RunAlgorithm(algorithm, inst, pipe);
        report.instance_id = id;
        result.reports[idx] = std::move(report);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = cfg.instance_count;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  for (const SolveReport& r : result.reports) {
    if (IsViolation(r)) ++result.violations;
  }
  return result;
}

const std::vector<std::string>& CsvColumns(bool with_timing) {
  static const std::vector<std::string> base = {"instance_id",
                                                "algorithm",
                                                "regime",
                                                "n",
                                                "m",
                                                "relaxation_value",
                                                "fractional_value",
                                                "trials",
                                                "rounded_welfare_mean",
                                                "rounded_welfare_stderr",
                                                "rounded_welfare_best",
                                                "best_allocation",
                                                "oracle_opt",
                                                "empirical_ratio",
                                                "guarantee_bound",
                                                "guarantee_basis",
                                                "guarantee_value",
                                                "guarantee_reference",
                                                "guarantee_satisfied",
                                                "eta",
                                                "beta",
                                                "beta_unbounded",
                                                "gamma_quarter",
                                                "rounding_factor",
                                                "duality_gap",
                                                "infeasibility",
                                                "theta_rounded_mean",
                                                "dual_is_estimate",
                                                "not_converged",
                                                "fallback_count",
                                                "forced_assignments",
                                                "iterations"};
  static const std::vector<std::string> timed = [] {
    std::vector<std::string> cols = base;
    cols.push_back("wall_time_ms");
    return cols;
  }();
  return with_timing ? timed : base;
}

std::string CsvEscape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string CsvHeader(bool with_timing) {
  std::string out;
  for (const std::string& col : CsvColumns(with_timing)) {
    if (!out.empty()) out += ',';
    out += CsvEscape(col);
  }
  return out + "\r\n";
}

std::string CsvRow(const SolveReport& r, bool with_timing) {
  std::string alloc;
  for (int a : r.best_allocation.assign) {
    if (!alloc.empty()) alloc += ' ';
    alloc += std::to_string(a);
  }
  std::vector<std::string> cells = {
      r.instance_id,
      r.algorithm,
      r.regime,
      std::to_string(r.n),
      std::to_string(r.m),
      Cell(r.relaxation_value),
      Cell(r.fractional_value),
      std::to_string(r.trials),
      FormatDouble(r.rounded_welfare_mean),
      FormatDouble(r.rounded_welfare_stderr),
      FormatDouble(r.rounded_welfare_best),
      alloc,
      Cell(r.oracle_opt),
      Cell(r.empirical_ratio),
      Cell(r.guarantee_bound),
      r.guarantee_basis,
      Cell(r.guarantee_value),
      Cell(r.guarantee_reference),
      r.guarantee_satisfied ? Cell(*r.guarantee_satisfied) : std::string(),
      Cell(r.eta),
      Cell(r.beta),
      Cell(r.beta_unbounded),
      Cell(r.gamma_quarter),
      Cell(r.rounding_factor),
      Cell(r.duality_gap),
      Cell(r.infeasibility),
      Cell(r.theta_rounded_mean),
      Cell(r.dual_is_estimate),
      Cell(r.not_converged),
      std::to_string(r.fallback_count),
      std::to_string(r.forced_assignments),
      std::to_string(r.iterations)};
  if (with_timing) cells.push_back(FormatDouble(r.wall_time_ms));
  std::string out;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (c > 0) out += ',';
    out += CsvEscape(cells[c]);
  }
  return out + "\r\n";
}

std::string BatchToCsv(const std::vector<SolveReport>& reports,
                       bool with_timing) {
  std::string out = CsvHeader(with_timing);
  for (const SolveReport& r : reports) out += CsvRow(r, with_timing);
  return out;
}

}  // namespace externet
