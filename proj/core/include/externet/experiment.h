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

#ifndef EXTERNET_EXPERIMENT_H_
#define EXTERNET_EXPERIMENT_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "externet/config.h"
#include "externet/generator.h"
#include "externet/report.h"

namespace externet {

struct ExperimentConfig {
  GeneratorConfig generator;
  // Empty selects DefaultAlgorithm(generator.regime).
  std::string algorithm;
  int instance_count = 10;
  PipelineConfig pipeline;
  // Worker threads for batch runs; 0 means hardware concurrency. Both are
  // capped by EXTERNET_THREADS when set.
  int threads = 0;
  bool timing = false;
  std::string csv_path;
  std::string instances_dir;

  ExperimentConfig() { pipeline.with_oracle = true; }
};

// Overlays the keys of a JSON object onto `cfg`. Recognized keys:
// regime, n, m, instance_count, rounding_trials, seed, algorithm, max_iters,
// step_scale, tolerance, pd_iters, epsilon, inner_iters, greedy_steps,
// mc_samples, with_oracle, guarantee_tolerance, threads, timing,
// diagonally_dominant, graph, edge_probability, convex_coefficients,
// concave_exponent, concave_log, csv, instances_dir. Unknown keys and
// invalid values throw Error(kInvalidInput).
void ApplyConfigJson(std::string_view text, ExperimentConfig* cfg);
void ApplyConfigFile(const std::string& path, ExperimentConfig* cfg);

// Checks count and range constraints.
void ValidateExperiment(const ExperimentConfig& cfg);

// min(requested or hardware concurrency, EXTERNET_THREADS), at least 1.
int ResolveThreads(int requested);

// "inst-000042".
std::string InstanceId(std::uint64_t index);

struct BatchResult {
  std::vector<SolveReport> reports;
  // Reports whose guarantee check failed or whose upper-bounding relaxation
  // fell below the oracle optimum by more than 1e-6.
  int violations = 0;
};

bool IsViolation(const SolveReport& report);

// Generates instance_count instances and runs the pipeline on each with a
// worker pool. Results are ordered by instance index. Writes instance files
// when instances_dir is set.
BatchResult RunBatch(const ExperimentConfig& cfg);

// RFC 4180 CSV: header row, CRLF line ends, floats with 12 significant
// digits, empty cells for absent values.
const std::vector<std::string>& CsvColumns(bool with_timing);
std::string CsvHeader(bool with_timing);
std::string CsvRow(const SolveReport& report, bool with_timing);
std::string BatchToCsv(const std::vector<SolveReport>& reports,
                       bool with_timing);

// Quotes a field when it contains a comma, quote, CR or LF.
std::string CsvEscape(std::string_view field);

}  // namespace externet

#endif  // EXTERNET_EXPERIMENT_H_
