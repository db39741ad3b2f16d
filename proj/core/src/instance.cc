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

#include "externet/instance.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "externet/error.h"

namespace externet {

namespace {

constexpr double kWeightTolerance = 1e-9;

std::string Where(int item, int j, int k) {
  std::ostringstream os;
  os << "item " << item << ", agents (" << j << ", " << k << ")";
  return os.str();
}

// f applied to a possibly negative argument. Only the linear family is ever
// evaluated on negative influence sums (the NegativeLinear regime).
double EvalSigned(const ExternalitySpec& spec, double y) {
  if (spec.family == Family::kLinear) return y;
  return EvalExternality(spec, y);
}

}  // namespace

const char* FamilyName(Family family) {
  switch (family) {
    case Family::kLinear:
      return "Linear";
    case Family::kPolynomial:
      return "Polynomial";
    case Family::kPowerConcave:
      return "PowerConcave";
    case Family::kLogConcave:
      return "LogConcave";
  }
  return "Unknown";
}

Family ParseFamily(std::string_view name) {
  for (Family f : {Family::kLinear, Family::kPolynomial, Family::kPowerConcave,
                   Family::kLogConcave}) {
    if (name == FamilyName(f)) return f;
  }
  throw Error(ErrorCode::kInvalidInput,
              "unknown externality family '" + std::string(name) + "'");
}

ExternalitySpec ExternalitySpec::Polynomial(std::vector<double> coefficients) {
  ExternalitySpec spec;
  spec.family = Family::kPolynomial;
  spec.coefficients = std::move(coefficients);
  ValidateExternality(spec);
  return spec;
}

ExternalitySpec ExternalitySpec::PowerConcave(double exponent) {
  ExternalitySpec spec;
  spec.family = Family::kPowerConcave;
  spec.exponent = exponent;
  ValidateExternality(spec);
  return spec;
}

ExternalitySpec ExternalitySpec::LogConcave() {
  ExternalitySpec spec;
  spec.family = Family::kLogConcave;
  return spec;
}

int ExternalitySpec::Degree() const {
  if (family != Family::kPolynomial) return 1;
  int degree = 0;
  for (std::size_t t = 0; t < coefficients.size(); ++t) {
    if (coefficients[t] != 0.0) degree = static_cast<int>(t) + 1;
  }
  return degree;
}

bool ExternalitySpec::IsConvex() const {
  return family == Family::kLinear || family == Family::kPolynomial ||
         (family == Family::kPowerConcave && exponent == 1.0);
}

bool ExternalitySpec::IsConcave() const {
  return family == Family::kLinear || family == Family::kPowerConcave ||
         family == Family::kLogConcave ||
         (family == Family::kPolynomial && Degree() <= 1);
}

void ValidateExternality(const ExternalitySpec& spec) {
  switch (spec.family) {
    case Family::kLinear:
    case Family::kLogConcave:
      return;
    case Family::kPolynomial:
      for (double c : spec.coefficients) {
        if (!(c >= 0.0) || !std::isfinite(c)) {
          throw Error(ErrorCode::kInvalidInput,
                      "polynomial coefficients must be finite and >= 0");
        }
      }
      return;
    case Family::kPowerConcave:
      if (!(spec.exponent > 0.0 && spec.exponent <= 1.0)) {
        throw Error(ErrorCode::kInvalidInput,
                    "PowerConcave exponent must lie in (0, 1]");
      }
      return;
  }
}

double EvalExternality(const ExternalitySpec& spec, double y) {
  if (!(y >= 0.0)) {
    throw Error(ErrorCode::kDomain, "externality argument must be >= 0");
  }
  switch (spec.family) {
    case Family::kLinear:
      return y;
    case Family::kPolynomial: {
      double acc = 0.0;
      for (auto c = spec.coefficients.rbegin(); c != spec.coefficients.rend();
           ++c) {
        acc = (acc + *c) * y;
      }
      return acc;
    }
    case Family::kPowerConcave:
      return std::pow(y, spec.exponent);
    case Family::kLogConcave:
      return std::log1p(y);
  }
  return 0.0;
}

double ExternalitySlope(const ExternalitySpec& spec, double y) {
  y = std::max(y, 0.0);
  switch (spec.family) {
    case Family::kLinear:
      return 1.0;
    case Family::kPolynomial: {
      double acc = 0.0;
      const int d = static_cast<int>(spec.coefficients.size());
      for (int t = d; t >= 1; --t) acc = acc * y + t * spec.coefficients[t - 1];
      return acc;
    }
    case Family::kPowerConcave:
      if (spec.exponent == 1.0) return 1.0;
      if (y == 0.0) return kMaxSlope;
      return std::min(kMaxSlope,
                      spec.exponent * std::pow(y, spec.exponent - 1));
    case Family::kLogConcave:
      return 1.0 / (1.0 + y);
  }
  return 0.0;
}

const char* RegimeName(Regime regime) {
  switch (regime) {
    case Regime::kPositiveLinear:
      return "PositiveLinear";
    case Regime::kPositiveConvex:
      return "PositiveConvex";
    case Regime::kPositiveConcave:
      return "PositiveConcave";
    case Regime::kNegativeLinear:
      return "NegativeLinear";
  }
  return "Unknown";
}

Regime ParseRegime(std::string_view name) {
  for (Regime r : {Regime::kPositiveLinear, Regime::kPositiveConvex,
                   Regime::kPositiveConcave, Regime::kNegativeLinear}) {
    if (name == RegimeName(r)) return r;
  }
  throw Error(ErrorCode::kInvalidInput,
              "unknown regime '" + std::string(name) + "'");
}

Instance::Instance(Regime regime, std::vector<Matrix> weights,
                   std::vector<ExternalitySpec> externality,
                   bool diagonally_dominant)
    : regime_(regime),
      diagonally_dominant_(diagonally_dominant),
      weights_(std::move(weights)),
      externality_(std::move(externality)) {
  m_ = static_cast<int>(weights_.size());
  n_ = m_ > 0 ? weights_.front().rows() : 0;
  uniform_ = externality_.size() == 1;
  Validate();
}

bool Instance::AllLinear() const {
  return std::all_of(
      externality_.begin(), externality_.end(),
      [](const ExternalitySpec& s) { return s.family == Family::kLinear; });
}

int Instance::MaxDegree() const {
  int degree = 1;
  for (const auto& s : externality_) degree = std::max(degree, s.Degree());
  return degree;
}

void Instance::Validate() const {
  if (m_ < 1 || n_ < 1) {
    throw Error(ErrorCode::kInvalidInput, "instance needs n >= 1 and m >= 1");
  }
  for (const Matrix& w : weights_) {
    if (w.rows() != n_ || w.cols() != n_) {
      throw Error(ErrorCode::kInvalidInput,
                  "every weight matrix must be n x n");
    }
    for (double v : w.data()) {
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kInvalidInput, "weights must be finite");
      }
    }
  }
  if (!(externality_.size() == 1 ||
        externality_.size() == static_cast<std::size_t>(m_) * n_)) {
    throw Error(ErrorCode::kInvalidInput,
                "externality must hold 1 or m * n entries");
  }
  for (const auto& spec : externality_) {
    ValidateExternality(spec);
    const bool ok = [&] {
      switch (regime_) {
        case Regime::kPositiveLinear:
        case Regime::kNegativeLinear:
          return spec.family == Family::kLinear;
        case Regime::kPositiveConvex:
          return spec.IsConvex();
        case Regime::kPositiveConcave:
          return spec.IsConcave();
      }
      return false;
    }();
    if (!ok) {
      throw Error(ErrorCode::kInvalidInput,
                  std::string("externality family ") + FamilyName(spec.family) +
                      " is not allowed in regime " + RegimeName(regime_));
    }
  }
  for (int i = 0; i < m_; ++i) {
    for (int j = 0; j < n_; ++j) {
      double row_sum = 0.0;
      for (int k = 0; k < n_; ++k) {
        const double a = weights_[i](j, k);
        row_sum += a;
        if (regime_ == Regime::kNegativeLinear) {
          if (j == k && !(a > 0.0)) {
            throw Error(
                ErrorCode::kInvalidInput,
                "NegativeLinear needs positive diagonal at " + Where(i, j, k));
          }
          if (j != k && a > 0.0) {
            throw Error(ErrorCode::kInvalidInput,
                        "NegativeLinear needs nonpositive off-diagonal at " +
                            Where(i, j, k));
          }
        } else if (a < 0.0) {
          throw Error(
              ErrorCode::kInvalidInput,
              "positive regimes need nonnegative weights at " + Where(i, j, k));
        }
      }
      // Rows with no influence at all are allowed in the concave regime; they
      // cannot be normalized and carry zero externality.
      if (regime_ == Regime::kPositiveConcave && row_sum != 0.0 &&
          std::abs(row_sum - 1.0) > kWeightTolerance) {
        throw Error(ErrorCode::kInvalidInput,
                    "PositiveConcave needs rows summing to 1 (item " +
                        std::to_string(i) + ", agent " + std::to_string(j) +
                        ")");
      }
      if (regime_ == Regime::kNegativeLinear && diagonally_dominant_ &&
          row_sum < -kWeightTolerance) {
        throw Error(ErrorCode::kInvalidInput,
                    "diagonally dominant instance has a negative row sum "
                    "(item " +
                        std::to_string(i) + ", agent " + std::to_string(j) +
                        ")");
      }
    }
  }
}

void ValidateAllocation(const Instance& inst, const Allocation& alloc) {
  if (static_cast<int>(alloc.assign.size()) != inst.n()) {
    throw Error(ErrorCode::kInvalidInput,
                "allocation length does not match the agent count");
  }
  for (int item : alloc.assign) {
    if (item < 0 || item >= inst.m()) {
      throw Error(ErrorCode::kInvalidInput, "allocation item out of range");
    }
  }
}

Matrix ToBinaryMatrix(const Allocation& alloc, int m) {
  Matrix x(static_cast<int>(alloc.assign.size()), m);
  for (int j = 0; j < x.rows(); ++j) x(j, alloc.assign[j]) = 1.0;
  return x;
}

Allocation FromBinaryMatrix(const Matrix& x) {
  Allocation alloc;
  alloc.assign.resize(x.rows(), -1);
  for (int j = 0; j < x.rows(); ++j) {
    int ones = 0;
    for (int i = 0; i < x.cols(); ++i) {
      const double v = x(j, i);
      if (v == 1.0) {
        ++ones;
        alloc.assign[j] = i;
      } else if (v != 0.0) {
        throw Error(ErrorCode::kInvalidInput, "matrix is not binary");
      }
    }
    if (ones != 1) {
      throw Error(ErrorCode::kInvalidInput,
                  "row " + std::to_string(j) + " does not hold exactly one 1");
    }
  }
  return alloc;
}

void ValidateFractional(const Instance& inst, const Matrix& x) {
  if (x.rows() != inst.n() || x.cols() != inst.m()) {
    throw Error(ErrorCode::kInvalidInput,
                "fractional allocation must be n x m");
  }
  for (int j = 0; j < x.rows(); ++j) {
    double sum = 0.0;
    for (double v : x.Row(j)) {
      if (!(v >= -kRowSumTolerance && v <= 1.0 + kRowSumTolerance)) {
        throw Error(ErrorCode::kInvalidInput, "entries must lie in [0, 1]");
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
      throw Error(ErrorCode::kInvalidInput,
                  "row " + std::to_string(j) + " does not sum to 1");
    }
  }
}

double ItemValue(const Instance& inst, int item,
                 std::span<const std::uint8_t> members) {
  const Matrix& a = inst.weights(item);
  double total = 0.0;
  for (int j = 0; j < inst.n(); ++j) {
    if (!members[j]) continue;
    double y = 0.0;
    for (int k = 0; k < inst.n(); ++k) {
      if (members[k]) y += a(j, k);
    }
    total += EvalSigned(inst.externality(item, j), y);
  }
  return total;
}

double ItemValueMask(const Instance& inst, int item, std::uint64_t mask) {
  if (inst.n() > 64) {
    throw Error(ErrorCode::kSizeLimit, "bitmask evaluation needs n <= 64");
  }
  const Matrix& a = inst.weights(item);
  double total = 0.0;
  for (int j = 0; j < inst.n(); ++j) {
    if (!((mask >> j) & 1U)) continue;
    double y = 0.0;
    for (int k = 0; k < inst.n(); ++k) {
      if ((mask >> k) & 1U) y += a(j, k);
    }
    total += EvalSigned(inst.externality(item, j), y);
  }
  return total;
}

double PartialWelfare(const Instance& inst, std::span<const int> assign) {
  if (static_cast<int>(assign.size()) != inst.n()) {
    throw Error(ErrorCode::kInvalidInput,
                "assignment length does not match the agent count");
  }
  double total = 0.0;
  for (int j = 0; j < inst.n(); ++j) {
    const int item = assign[j];
    if (item < 0) continue;
    if (item >= inst.m()) {
      throw Error(ErrorCode::kInvalidInput, "assignment item out of range");
    }
    double y = 0.0;
    for (int k = 0; k < inst.n(); ++k) {
      if (assign[k] == item) y += inst.weight(item, j, k);
    }
    total += EvalSigned(inst.externality(item, j), y);
  }
  return total;
}

double Welfare(const Instance& inst, const Allocation& alloc) {
  ValidateAllocation(inst, alloc);
  return PartialWelfare(inst, alloc.assign);
}

double WelfareBinary(const Instance& inst, const Matrix& x) {
  if (x.rows() != inst.n() || x.cols() != inst.m()) {
    throw Error(ErrorCode::kInvalidInput, "binary matrix must be n x m");
  }
  FromBinaryMatrix(x);
  double total = 0.0;
  for (int i = 0; i < inst.m(); ++i) {
    for (int j = 0; j < inst.n(); ++j) {
      double y = 0.0;
      for (int k = 0; k < inst.n(); ++k) y += inst.weight(i, j, k) * x(k, i);
      total += x(j, i) * EvalSigned(inst.externality(i, j), y);
    }
  }
  return total;
}

double WelfareBinaryProductForm(const Instance& inst, const Matrix& x) {
  if (x.rows() != inst.n() || x.cols() != inst.m()) {
    throw Error(ErrorCode::kInvalidInput, "binary matrix must be n x m");
  }
  FromBinaryMatrix(x);
  double total = 0.0;
  for (int i = 0; i < inst.m(); ++i) {
    for (int j = 0; j < inst.n(); ++j) {
      double y = 0.0;
      for (int k = 0; k < inst.n(); ++k) {
        y += inst.weight(i, j, k) * x(j, i) * x(k, i);
      }
      total += EvalSigned(inst.externality(i, j), y);
    }
  }
  return total;
}

double GammaCurvature(const ExternalitySpec& spec, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::kInvalidInput, "alpha must lie in (0, 1)");
  }
  if (!spec.IsConvex()) {
    throw Error(ErrorCode::kUnsupportedFamily,
                std::string("alpha-curvature needs a convex family, got ") +
                    FamilyName(spec.family));
  }
  const int degree = spec.Degree();
  if (degree == 0) return 1.0;  // f == 0 loses nothing.
  // Grid over z in [1, 1e4], log-spaced, plus the z -> infinity limit given by
  // the leading monomial.
  constexpr int kGrid = 512;
  double best = std::pow(alpha, degree);
  for (int t = 0; t < kGrid; ++t) {
    const double z = std::pow(10.0, 4.0 * t / (kGrid - 1));
    const double denom = EvalExternality(spec, z);
    if (denom > 0.0) {
      best = std::min(best, EvalExternality(spec, alpha * z) / denom);
    }
  }
  return best;
}

BetaCurvature ComputeBeta(const ExternalitySpec& spec) {
  if (!spec.IsConcave()) {
    throw Error(ErrorCode::kUnsupportedFamily,
                std::string("beta-curvature needs a concave family, got ") +
                    FamilyName(spec.family));
  }
  if (spec.family == Family::kLinear || spec.family == Family::kPolynomial ||
      (spec.family == Family::kPowerConcave && spec.exponent == 1.0)) {
    return {1.0, false};
  }
  // Two-point laws X in {0, y} with P(X = y) = q: ratio f(q y) / (q f(y)).
  constexpr int kGrid = 400;
  constexpr double kMin = 0.01;
  auto ratio = [&](double q, double y) {
    return EvalExternality(spec, q * y) / (q * EvalExternality(spec, y));
  };
  BetaCurvature out{1.0, false};
  double best_y = 1.0;
  for (int a = 0; a < kGrid; ++a) {
    const double q = kMin + (1.0 - kMin) * a / (kGrid - 1);
    for (int b = 0; b < kGrid; ++b) {
      const double y = kMin + (1.0 - kMin) * b / (kGrid - 1);
      const double r = ratio(q, y);
      if (r > out.value) {
        out.value = r;
        best_y = y;
      }
    }
  }
  // Probe one decade below the grid; a relative gain above 1% means the
  // supremum is escaping through q -> 0.
  if (ratio(kMin / 10.0, best_y) > 1.01 * out.value) out.unbounded = true;
  return out;
}

double Eta(const Instance& inst, const Matrix& x) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < inst.m(); ++i) {
    for (int j = 0; j < inst.n(); ++j) {
      double dot = 0.0;
      double norm2 = 0.0;
      for (int k = 0; k < inst.n(); ++k) {
        const double a = inst.weight(i, j, k);
        dot += a * x(k, i);
        norm2 += a * a;
      }
      if (norm2 == 0.0) continue;
      best = std::min(best, dot / std::sqrt(norm2));
    }
  }
  // No influence anywhere: welfare is identically zero and eta is moot.
  return std::isfinite(best) ? best : 0.0;
}

double InstanceGammaQuarter(const Instance& inst) {
  double gamma = 1.0;
  for (int i = 0; i < inst.m(); ++i) {
    for (int j = 0; j < inst.n(); ++j) {
      gamma = std::min(gamma, GammaCurvature(inst.externality(i, j), 0.25));
      if (inst.uniform_externality()) return gamma;
    }
  }
  return gamma;
}

BetaCurvature InstanceBeta(const Instance& inst) {
  BetaCurvature out{1.0, false};
  for (int i = 0; i < inst.m(); ++i) {
    for (int j = 0; j < inst.n(); ++j) {
      const BetaCurvature b = ComputeBeta(inst.externality(i, j));
      out.value = std::max(out.value, b.value);
      out.unbounded = out.unbounded || b.unbounded;
      if (inst.uniform_externality()) return out;
    }
  }
  return out;
}

}  // namespace externet
