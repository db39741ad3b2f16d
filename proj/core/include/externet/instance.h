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

#ifndef EXTERNET_INSTANCE_H_
#define EXTERNET_INSTANCE_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "externet/matrix.h"

namespace externet {

// Families of externality functions f: R+ -> R+ with f(0) = 0, nondecreasing.
//   kLinear        f(y) = y
//   kPolynomial    f(y) = c_1 y + c_2 y^2 + ... + c_d y^d, all c_t >= 0
//   kPowerConcave  f(y) = y^p, p in (0, 1]
//   kLogConcave    f(y) = ln(1 + y)
enum class Family { kLinear, kPolynomial, kPowerConcave, kLogConcave };

const char* FamilyName(Family family);
Family ParseFamily(std::string_view name);

struct ExternalitySpec {
  Family family = Family::kLinear;
  // Polynomial only: coefficients[t - 1] multiplies y^t. No constant term.
  std::vector<double> coefficients;
  // PowerConcave only.
  double exponent = 1.0;

  static ExternalitySpec Linear() { return {}; }
  static ExternalitySpec Polynomial(std::vector<double> coefficients);
  static ExternalitySpec PowerConcave(double exponent);
  static ExternalitySpec LogConcave();

  // Polynomial degree; 1 for kLinear. Meaningless for the concave families.
  int Degree() const;
  bool IsConvex() const;
  bool IsConcave() const;

  bool operator==(const ExternalitySpec&) const = default;
};

// Throws Error(kInvalidInput) when parameters leave the family's domain.
void ValidateExternality(const ExternalitySpec& spec);

// f(y). Throws Error(kDomain) for y < 0.
double EvalExternality(const ExternalitySpec& spec, double y);

// Right derivative f'(y+), capped at kMaxSlope where it is unbounded (y^p at
// zero).
inline constexpr double kMaxSlope = 1e6;
double ExternalitySlope(const ExternalitySpec& spec, double y);

enum class Regime {
  kPositiveLinear,
  kPositiveConvex,
  kPositiveConcave,
  kNegativeLinear,
};

const char* RegimeName(Regime regime);
Regime ParseRegime(std::string_view name);

// A multi-item welfare instance: n agents, m items, one n x n influence
// matrix per item (weight(i, j, k) is how much agent j is influenced by agent
// k when both hold item i), and an externality function per (item, agent).
class Instance {
 public:
  // `externality` holds either a single spec shared by every (item, agent)
  // pair or m * n specs indexed item-major. Validates every regime invariant
  // and throws Error(kInvalidInput) on violation.
  Instance(Regime regime, std::vector<Matrix> weights,
           std::vector<ExternalitySpec> externality,
           bool diagonally_dominant = false);

  int n() const { return n_; }
  int m() const { return m_; }
  Regime regime() const { return regime_; }
  bool diagonally_dominant() const { return diagonally_dominant_; }

  double weight(int item, int j, int k) const { return weights_[item](j, k); }
  const Matrix& weights(int item) const { return weights_[item]; }
  const std::vector<Matrix>& all_weights() const { return weights_; }

  const ExternalitySpec& externality(int item, int agent) const {
    return uniform_ ? externality_.front()
                    : externality_[static_cast<std::size_t>(item) * n_ + agent];
  }
  bool uniform_externality() const { return uniform_; }

  // True when every externality is kLinear.
  bool AllLinear() const;
  // Largest polynomial degree over all externalities (1 for linear).
  int MaxDegree() const;

 private:
  void Validate() const;

  int n_ = 0;
  int m_ = 0;
  Regime regime_;
  bool diagonally_dominant_ = false;
  std::vector<Matrix> weights_;
  std::vector<ExternalitySpec> externality_;
  bool uniform_ = true;
};

// One item per agent; assign[j] is the 0-based item of agent j.
struct Allocation {
  std::vector<int> assign;
  bool operator==(const Allocation&) const = default;
};

void ValidateAllocation(const Instance& inst, const Allocation& alloc);
Matrix ToBinaryMatrix(const Allocation& alloc, int m);
// Throws Error(kInvalidInput) unless x is binary with unit row sums.
Allocation FromBinaryMatrix(const Matrix& x);

inline constexpr double kRowSumTolerance = 1e-9;
// Entries in [0, 1] and row sums equal to one. Throws Error(kInvalidInput).
void ValidateFractional(const Instance& inst, const Matrix& x);

// f_i(S) = sum_{j in S} f_ij(sum_{k in S} a^i_jk); members[j] != 0 marks j in
// S.
double ItemValue(const Instance& inst, int item,
                 std::span<const std::uint8_t> members);
// Same, with S given as a bitmask (n <= 64).
double ItemValueMask(const Instance& inst, int item, std::uint64_t mask);

double Welfare(const Instance& inst, const Allocation& alloc);
// Welfare of a partial assignment; assign[j] < 0 leaves agent j unassigned.
double PartialWelfare(const Instance& inst, std::span<const int> assign);

// sum_{i,j} x_ji f_ij(sum_k a^i_jk x_ki) on a binary assignment matrix.
double WelfareBinary(const Instance& inst, const Matrix& x);
// sum_{i,j} f_ij(sum_k a^i_jk x_ji x_ki), the product form of the same
// integer program.
double WelfareBinaryProductForm(const Instance& inst, const Matrix& x);

// inf_{z >= 1} h(alpha z) / h(z) for a convex family.
double GammaCurvature(const ExternalitySpec& spec, double alpha);

struct BetaCurvature {
  double value = 1.0;
  // Set when the supremum keeps growing at the grid's lower boundary; value is
  // then the clipped grid supremum.
  bool unbounded = false;
};
// sup over [0,1]-valued X of f(E X) / E f(X) for a concave family.
BetaCurvature ComputeBeta(const ExternalitySpec& spec);

// min over (i, j) with a^i_j != 0 of (a^i_j . x_i) / ||a^i_j||.
double Eta(const Instance& inst, const Matrix& x);

struct CurvatureReport {
  double gamma_quarter = 1.0;
  double beta = 1.0;
  bool beta_unbounded = false;
  double eta = 0.0;
};

// Gamma_{1/4} minimized over all (item, agent) externalities.
double InstanceGammaQuarter(const Instance& inst);
// beta maximized over all (item, agent) externalities.
BetaCurvature InstanceBeta(const Instance& inst);

}  // namespace externet

#endif  // EXTERNET_INSTANCE_H_
