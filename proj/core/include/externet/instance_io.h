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

#ifndef EXTERNET_INSTANCE_IO_H_
#define EXTERNET_INSTANCE_IO_H_

#include <string>
#include <string_view>

#include "externet/instance.h"
#include "externet/report.h"

namespace externet {

// Instance JSON:
//   {"n": 2, "m": 1, "regime": "PositiveLinear", "diagonally_dominant": false,
//    "weights": [[[1, 2], [2, 1]]],
//    "externality": {"all": {"family": "Linear", "params": {}}}}
// Non-uniform externalities list every pair instead of "all", keyed "(i,j)"
// with 0-based item i and agent j. Params: {"coefficients": [c_1, ...]} for
// Polynomial, {"exponent": p} for PowerConcave.
std::string InstanceToJson(const Instance& inst);
Instance InstanceFromJson(std::string_view text);

void WriteInstanceFile(const std::string& path, const Instance& inst);
Instance ReadInstanceFile(const std::string& path);

// Absent optional fields are written as null. wall_time_ms is omitted unless
// `with_timing` is set, so repeated runs produce identical output.
std::string ReportToJson(const SolveReport& report, bool with_timing = false);

// Writes `text` to `path`, throwing Error(kIo) on failure.
void WriteTextFile(const std::string& path, std::string_view text);

}  // namespace externet

#endif  // EXTERNET_INSTANCE_IO_H_
