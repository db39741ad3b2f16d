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

#ifndef EXTERNET_CONTENTION_H_
#define EXTERNET_CONTENTION_H_

#include <cstdint>
#include <span>
#include <vector>

#include "externet/config.h"
#include "externet/instance.h"
#include "externet/lovasz.h"
#include "externet/matrix.h"
#include "externet/random.h"
#include "externet/report.h"

namespace externet {

// First stage of the two-stage rounding: column i is thresholded at its own
// uniform thetas[i], so xb(j, i) = 1 iff x(j, i) >= thetas[i]. Rows may hold
// any number of ones.
struct StageOneMatrix {
  Matrix xb;
  std::vector<double> thetas;
};

StageOneMatrix StageOneRound(const Matrix& x, std::uint64_t seed);
StageOneMatrix StageOneRound(const Matrix& x, Rng& rng);

// Winning probabilities r_iA of fair contention resolution for the requesters
// in `requested` (indices into p). Entry t of the result belongs to
// requested[t]. A singleton set wins with probability 1.
std::vector<double> FairResolutionProbabilities(std::span<const double> p,
                                                std::span<const int> requested);

// Picks one index from `requested` with probability r_iA. Throws
// Error(kInvalidInput) for an empty set or invalid p.
int FairResolve(std::span<const double> p, std::span<const int> requested,
                Rng& rng);

// Second stage: each row of `stage` with several ones keeps one of them via
// FairResolve(p = that row of x); rows with no ones fall back to the row
// argmax of x (counted in fallback_agents).
Rounded ResolveRows(const Matrix& x, const StageOneMatrix& stage, Rng& rng);

// StageOneRound followed by ResolveRows, from a single seeded stream.
Rounded FcrRound(const Instance& inst, const Matrix& x, std::uint64_t seed);

// Lovasz relaxation, then FcrRound over cfg.rounding_trials seeds. The bound
// is Gamma_{1/4} times the relaxation value.
SolveReport SolveConvexCurvature(const Instance& inst,
                                 const PipelineConfig& cfg);

}  // namespace externet

#endif  // EXTERNET_CONTENTION_H_
