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

#include "externet/lovasz.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "externet/ascent.h"
#include "externet/error.h"
#include "externet/random.h"

namespace externet {

namespace {

std::vector<double> ConvexCoefficients(const ExternalitySpec& spec) {
  switch (spec.family) {
    case Family::kLinear:
      return {1.0};
    case Family::kPolynomial:
      return spec.coefficients;
    case Family::kPowerConcave:
      if (spec.exponent == 1.0) return {1.0};
      break;
    case Family::kLogConcave:
      break;
  }
  throw Error(ErrorCode::kUnsupportedFamily,
              std::string("polynomial expansion needs Linear or Polynomial "
                          "externalities, got ") +
                  FamilyName(spec.family));
}

using TermKey = std::pair<int, std::vector<int>>;

// Expands x_j * (sum_k a_jk x_k)^power by walking all k-tuples, adding
// coef * prod(a) to the monomial over {j} union tuple.
void ExpandPower(const Matrix& a, int item, int j, int power, double coef,
                 std::vector<int>* tuple, std::map<TermKey, double>* acc) {
  if (static_cast<int>(tuple->size()) == power) {
    std::vector<int> agents(*tuple);
    agents.push_back(j);
    std::sort(agents.begin(), agents.end());
    agents.erase(std::unique(agents.begin(), agents.end()), agents.end());
    (*acc)[{item, std::move(agents)}] += coef;
    return;
  }
  const int n = a.rows();
  for (int k = 0; k < n; ++k) {
    const double w = a(j, k);
    if (w == 0.0) continue;
    tuple->push_back(k);
    ExpandPower(a, item, j, power, coef * w, tuple, acc);
    tuple->pop_back();
  }
}

double ColumnMin(const Matrix& x, const MinTerm& term) {
  double lo = x(term.agents[0], term.item);
  for (std::size_t t = 1; t < term.agents.size(); ++t) {
    lo = std::min(lo, x(term.agents[t], term.item));
  }
  return lo;
}

void RequirePositive(const Instance& inst) {
  if (inst.regime() == Regime::kNegativeLinear) {
    throw Error(ErrorCode::kUnsupportedRegime,
                "Lovasz machinery needs a positive regime");
  }
}

}  // namespace

ExpandedLovasz ExpandPolynomial(const Instance& inst) {
  if (inst.regime() != Regime::kPositiveLinear &&
      inst.regime() != Regime::kPositiveConvex) {
    throw Error(ErrorCode::kUnsupportedRegime,
                std::string("polynomial expansion needs a positive convex "
                            "regime, got ") +
                    RegimeName(inst.regime()));
  }
  std::map<TermKey, double> acc;
  int max_degree = 0;
  std::vector<int> tuple;
  for (int i = 0; i < inst.m(); ++i) {
    for (int j = 0; j < inst.n(); ++j) {
      const ExternalitySpec& spec = inst.externality(i, j);
      const std::vector<double> coeffs = ConvexCoefficients(spec);
      const int degree = spec.family == Family::kPolynomial ? spec.Degree() : 1;
      if (degree > kMaxExpansionDegree) {
        throw Error(ErrorCode::kUnsupportedDegree,
                    "polynomial expansion is limited to degree 3, got " +
                        std::to_string(degree));
      }
      max_degree = std::max(max_degree, degree);
      for (int t = 1; t <= static_cast<int>(coeffs.size()); ++t) {
        if (coeffs[t - 1] == 0.0) continue;
        ExpandPower(inst.weights(i), i, j, t, coeffs[t - 1], &tuple, &acc);
      }
    }
  }
  ExpandedLovasz out;
  out.n = inst.n();
  out.m = inst.m();
  for (auto& [key, coef] : acc) {
    if (coef == 0.0) continue;
    out.degree_bound =
        std::max(out.degree_bound, static_cast<int>(key.second.size()));
    out.terms.push_back(MinTerm{key.first, key.second, coef});
  }
  return out;
}

double EvalExpandedLovasz(const ExpandedLovasz& exp, const Matrix& x) {
  if (x.rows() != exp.n || x.cols() != exp.m) {
    throw Error(ErrorCode::kInvalidInput,
                "matrix shape does not match the expansion");
  }
  double total = 0.0;
  for (const MinTerm& term : exp.terms) {
    total += term.coefficient * ColumnMin(x, term);
  }
  return total;
}

double ExpandedLovaszWithSupergradient(const ExpandedLovasz& exp,
                                       const Matrix& x, Matrix* grad) {
  const double value = EvalExpandedLovasz(exp, x);
  if (grad != nullptr) {
    *grad = Matrix(exp.n, exp.m);
    for (const MinTerm& term : exp.terms) {
      AddMinSupergradient(x, term.item, term.agents.data(),
                          static_cast<int>(term.agents.size()),
                          term.coefficient, grad);
    }
  }
  return value;
}

double LovaszLinearClosedForm(const Instance& inst, const Matrix& x) {
  if (inst.regime() != Regime::kPositiveLinear) {
    throw Error(ErrorCode::kUnsupportedRegime,
                std::string("closed form needs PositiveLinear, got ") +
                    RegimeName(inst.regime()));
  }
  if (x.rows() != inst.n() || x.cols() != inst.m()) {
    throw Error(ErrorCode::kInvalidInput, "matrix must be n x m");
  }
  double total = 0.0;
  for (int i = 0; i < inst.m(); ++i) {
    const Matrix& a = inst.weights(i);
    for (int j = 0; j < inst.n(); ++j) {
      for (int k = 0; k < inst.n(); ++k) {
        total += a(j, k) * std::min(x(j, i), x(k, i));
      }
    }
  }
  return total;
}

Estimate LovaszSampled(const Instance& inst, const Matrix& x, int samples,
                       std::uint64_t seed) {
  RequirePositive(inst);
  if (samples < 1) {
    throw Error(ErrorCode::kInvalidInput, "samples must be >= 1");
  }
  if (x.rows() != inst.n() || x.cols() != inst.m()) {
    throw Error(ErrorCode::kInvalidInput, "matrix must be n x m");
  }
  Rng rng(seed);
  std::vector<std::uint8_t> members(inst.n());
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int s = 0; s < samples; ++s) {
    double v = 0.0;
    for (int i = 0; i < inst.m(); ++i) {
      const double theta = rng.Threshold();
      for (int j = 0; j < inst.n(); ++j) members[j] = x(j, i) >= theta;
      v += ItemValue(inst, i, members);
    }
    sum += v;
    sum_sq += v * v;
  }
  Estimate est;
  est.value = sum / samples;
  if (samples > 1) {
    const double var = std::max(
        0.0, (sum_sq - samples * est.value * est.value) / (samples - 1));
    est.std_error = std::sqrt(var / samples);
  }
  return est;
}

RelaxationSolution SolveRelaxation(const ExpandedLovasz& exp,
                                   const SolverConfig& cfg) {
  AscentConfig ascent;
  ascent.max_iters = cfg.max_iters;
  ascent.step_constant = cfg.step_constant;
  ascent.tolerance = cfg.tolerance;
  AscentResult r = MaximizeRowStochastic(
      exp.n, exp.m,
      [&exp](const Matrix& x, Matrix* grad) {
        return ExpandedLovaszWithSupergradient(exp, x, grad);
      },
      ascent);
  RelaxationSolution out;
  out.x = std::move(r.x);
  out.value = r.value;
  out.iterations = r.iterations;
  out.not_converged = !r.converged;
  out.solver_log = std::move(r.log);
  return out;
}

RelaxationSolution SolveRelaxation(const Instance& inst,
                                   const SolverConfig& cfg) {
  return SolveRelaxation(ExpandPolynomial(inst), cfg);
}

Rounded KtRound(const Instance& inst, const Matrix& x, std::uint64_t seed) {
  const int n = inst.n();
  const int m = inst.m();
  if (x.rows() != n || x.cols() != m) {
    throw Error(ErrorCode::kInvalidInput, "matrix must be n x m");
  }
  Rng rng(seed);
  Rounded out;
  out.allocation.assign.assign(n, -1);
  int remaining = n;
  const long cap = 50L * n * m;
  for (long round = 0; round < cap && remaining > 0; ++round) {
    const int item = rng.Index(m);
    const double theta = rng.Threshold();
    for (int j = 0; j < n; ++j) {
      if (out.allocation.assign[j] < 0 && x(j, item) >= theta) {
        out.allocation.assign[j] = item;
        --remaining;
      }
    }
  }
  for (int j = 0; j < n && remaining > 0; ++j) {
    if (out.allocation.assign[j] >= 0) continue;
    const auto row = x.Row(j);
    out.allocation.assign[j] = static_cast<int>(
        std::max_element(row.begin(), row.end()) - row.begin());
    ++out.fallback_agents;
    --remaining;
  }
  return out;
}

}  // namespace externet
