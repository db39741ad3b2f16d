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

#ifndef EXTERNET_PIPELINES_H_
#define EXTERNET_PIPELINES_H_

#include <string>
#include <string_view>
#include <vector>

#include "externet/config.h"
#include "externet/instance.h"
#include "externet/report.h"

namespace externet {

// Lovasz relaxation with KT rounding for linear externalities (bound 1/2).
SolveReport SolveLovaszKt(const Instance& inst, const PipelineConfig& cfg);

// Polynomial expansion of the Lovasz extension with KT rounding; the bound is
// one over the largest monomial arity.
SolveReport SolvePolyLovaszKt(const Instance& inst, const PipelineConfig& cfg);

// Exhaustive search; rounded_welfare_mean holds OPT.
SolveReport SolveOracle(const Instance& inst, const PipelineConfig& cfg);

// Names accepted by RunAlgorithm, in a fixed order.
const std::vector<std::string>& AlgorithmNames();

// Regimes an algorithm accepts, for error messages and batch defaults.
std::vector<Regime> AlgorithmRegimes(std::string_view algorithm);

// Default pipeline for a regime.
std::string DefaultAlgorithm(Regime regime);

// Dispatches to the named pipeline. With cfg.with_oracle the brute-force
// optimum is attached and the guarantee is resolved. Throws kInvalidInput for
// an unknown name and kUnsupportedRegime when the regime does not match.
SolveReport RunAlgorithm(std::string_view algorithm, const Instance& inst,
                         const PipelineConfig& cfg);

}  // namespace externet

#endif  // EXTERNET_PIPELINES_H_
