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

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "externet/error.h"
#include "externet/generator.h"
#include "test_util.h"

namespace externet {
namespace {

using testing::MakeMatrix;
using testing::SingleItem;
using testing::TwoByTwo;

TEST(WelfareTest, SingleItemGrandCoalition) {
  const Instance inst =
      SingleItem(Regime::kPositiveLinear, MakeMatrix({{1, 2}, {0, 1}}));
  EXPECT_DOUBLE_EQ(Welfare(inst, Allocation{{0, 0}}), 4.0);
  EXPECT_DOUBLE_EQ(WelfareBinary(inst, MakeMatrix({{1}, {1}})), 4.0);
}

TEST(WelfareTest, TwoItemsBothOnSecond) {
  const Instance inst = TwoByTwo();
  EXPECT_DOUBLE_EQ(Welfare(inst, Allocation{{1, 1}}), 6.0);
  EXPECT_DOUBLE_EQ(Welfare(inst, Allocation{{0, 0}}), 4.0);
  EXPECT_DOUBLE_EQ(Welfare(inst, Allocation{{0, 1}}), 4.0);
  EXPECT_DOUBLE_EQ(Welfare(inst, Allocation{{1, 0}}), 3.0);
}

TEST(WelfareTest, ZeroWeightsGiveZero) {
  const Instance inst =
      Instance(Regime::kPositiveConvex, {Matrix(3, 3), Matrix(3, 3)},
               {ExternalitySpec::Polynomial({0, 1})});
  EXPECT_EQ(Welfare(inst, Allocation{{0, 1, 0}}), 0.0);
}

TEST(WelfareTest, DimensionMismatchThrows) {
  const Instance inst = TwoByTwo();
  EXPECT_THROW(Welfare(inst, Allocation{{0}}), Error);
  EXPECT_THROW(Welfare(inst, Allocation{{0, 2}}), Error);
}

TEST(WelfareTest, BinaryRejectsEmptyRow) {
  const Instance inst = TwoByTwo();
  try {
    WelfareBinary(inst, MakeMatrix({{1, 0}, {0, 0}}));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidInput);
  }
  EXPECT_THROW(WelfareBinary(inst, MakeMatrix({{0.5, 0.5}, {0, 1}})), Error);
}

TEST(WelfareTest, IpFormsAgreeOnRandomInstances) {
  Rng rng(17);
  for (int t = 0; t < 100; ++t) {
    GeneratorConfig cfg;
    cfg.regime = t % 2 ? Regime::kPositiveConvex : Regime::kPositiveLinear;
    cfg.n = 2 + t % 5;
    cfg.m = 1 + t % 3;
    cfg.seed = 5;
    const Instance inst = GenerateInstance(cfg, t);
    const Allocation a = testing::RandomAllocation(cfg.n, cfg.m, rng);
    const Matrix x = ToBinaryMatrix(a, cfg.m);
    const double w = Welfare(inst, a);
    EXPECT_NEAR(WelfareBinary(inst, x), w, 1e-9);
    EXPECT_NEAR(WelfareBinaryProductForm(inst, x), w, 1e-9);
  }
}

TEST(WelfareTest, MonotoneInWeights) {
  Rng rng(3);
  for (int t = 0; t < 30; ++t) {
    GeneratorConfig cfg;
    cfg.n = 5;
    cfg.m = 2;
    cfg.seed = 9;
    const Instance inst = GenerateInstance(cfg, t);
    const Allocation a = testing::RandomAllocation(5, 2, rng);
    std::vector<Matrix> w = inst.all_weights();
    w[rng.Index(2)](rng.Index(5), rng.Index(5)) += rng.Uniform();
    const Instance raised(inst.regime(), w, {ExternalitySpec::Linear()});
    EXPECT_GE(Welfare(raised, a), Welfare(inst, a));
  }
}

TEST(ExternalityTest, Families) {
  EXPECT_DOUBLE_EQ(EvalExternality(ExternalitySpec::Polynomial({0, 1}), 3.0),
                   9.0);
  EXPECT_DOUBLE_EQ(EvalExternality(ExternalitySpec::PowerConcave(0.5), 4.0),
                   2.0);
  EXPECT_DOUBLE_EQ(EvalExternality(ExternalitySpec::Linear(), 7.25), 7.25);
  EXPECT_DOUBLE_EQ(EvalExternality(ExternalitySpec::LogConcave(), 1.0),
                   std::log(2.0));
}

TEST(ExternalityTest, NegativeArgumentIsDomainError) {
  try {
    EvalExternality(ExternalitySpec::Linear(), -1.0);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDomain);
  }
}

TEST(ExternalityTest, ZeroAtOriginAndNondecreasing) {
  const std::vector<ExternalitySpec> specs = {
      ExternalitySpec::Linear(), ExternalitySpec::Polynomial({0.5, 0, 2}),
      ExternalitySpec::PowerConcave(0.3), ExternalitySpec::LogConcave()};
  for (const ExternalitySpec& f : specs) {
    EXPECT_EQ(EvalExternality(f, 0.0), 0.0);
    double prev = 0.0;
    for (int k = 1; k <= 100; ++k) {
      const double v = EvalExternality(f, 0.05 * k);
      EXPECT_GE(v, prev);
      prev = v;
    }
  }
}

TEST(ExternalityTest, InvalidParameters) {
  EXPECT_THROW(ExternalitySpec::PowerConcave(0.0), Error);
  EXPECT_THROW(ExternalitySpec::PowerConcave(1.5), Error);
  EXPECT_THROW(ExternalitySpec::Polynomial({1, -1}), Error);
}

TEST(GammaTest, Monomials) {
  EXPECT_NEAR(GammaCurvature(ExternalitySpec::Polynomial({0, 1}), 0.25),
              1.0 / 16, 1e-12);
  EXPECT_NEAR(GammaCurvature(ExternalitySpec::Linear(), 0.25), 0.25, 1e-12);
  for (int d = 1; d <= 4; ++d) {
    std::vector<double> c(d, 0.0);
    c.back() = 2.0;
    EXPECT_NEAR(GammaCurvature(ExternalitySpec::Polynomial(c), 0.3),
                std::pow(0.3, d), 1e-12);
  }
}

TEST(GammaTest, MixedPolynomialMatchesAnalyticInfimum) {
  // (z/4 + z^2/16) / (z + z^2) = (4 + z) / (16 (1 + z)) decreases to 1/16.
  const double got = GammaCurvature(ExternalitySpec::Polynomial({1, 1}), 0.25);
  EXPECT_NEAR(got, 1.0 / 16, 1e-12);
  EXPECT_LE(got, (4.0 + 1e4) / (16.0 * (1.0 + 1e4)));
}

TEST(GammaTest, ConcaveFamilyRejected) {
  try {
    GammaCurvature(ExternalitySpec::LogConcave(), 0.25);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnsupportedFamily);
  }
}

TEST(BetaTest, LinearIsExactlyOne) {
  const BetaCurvature b = ComputeBeta(ExternalitySpec::Linear());
  EXPECT_EQ(b.value, 1.0);
  EXPECT_FALSE(b.unbounded);
}

TEST(BetaTest, SquareRootIsFlaggedUnbounded) {
  // Ratio sqrt(q y) / (q sqrt(y)) = q^{-1/2}, largest at q = 0.01.
  const BetaCurvature b = ComputeBeta(ExternalitySpec::PowerConcave(0.5));
  EXPECT_NEAR(b.value, 10.0, 1e-9);
  EXPECT_TRUE(b.unbounded);
}

TEST(BetaTest, LogMatchesGridCorner) {
  // ln(1 + q y) / (q ln(1 + y)) is largest at q = 0.01, y = 1 on the grid;
  // the true supremum is 1 / ln 2.
  const BetaCurvature b = ComputeBeta(ExternalitySpec::LogConcave());
  EXPECT_NEAR(b.value, std::log(1.01) / (0.01 * std::log(2.0)), 1e-9);
  EXPECT_LE(b.value, 1.0 / std::log(2.0));
  EXPECT_FALSE(b.unbounded);
}

TEST(BetaTest, ConvexFamilyRejected) {
  EXPECT_THROW(ComputeBeta(ExternalitySpec::Polynomial({0, 1})), Error);
}

TEST(EtaTest, HandComputedValue) {
  const Matrix a = MakeMatrix({{0.5, 0.5}, {0.5, 0.5}});
  const Instance inst(Regime::kPositiveConcave, {a, a},
                      {ExternalitySpec::PowerConcave(0.5)});
  const Matrix x = MakeMatrix({{0.5, 0.5}, {0.5, 0.5}});
  EXPECT_NEAR(Eta(inst, x), 0.5 / std::sqrt(0.5), 1e-12);
}

TEST(EtaTest, AlignedUnitAndVanishingCases) {
  const Instance inst(Regime::kPositiveConcave, {MakeMatrix({{1, 0}, {0, 1}})},
                      {ExternalitySpec::LogConcave()});
  EXPECT_NEAR(Eta(inst, MakeMatrix({{1}, {1}})), 1.0, 1e-12);
  const Instance two(
      Regime::kPositiveConcave,
      {MakeMatrix({{1, 0}, {0, 1}}), MakeMatrix({{1, 0}, {0, 1}})},
      {ExternalitySpec::LogConcave()});
  EXPECT_EQ(Eta(two, MakeMatrix({{1, 0}, {1, 0}})), 0.0);
}

TEST(InstanceTest, RegimeInvariants) {
  EXPECT_THROW(
      SingleItem(Regime::kPositiveLinear, MakeMatrix({{1, -1}, {0, 1}})),
      Error);
  EXPECT_THROW(
      SingleItem(Regime::kNegativeLinear, MakeMatrix({{1, 1}, {0, 1}})), Error);
  EXPECT_THROW(
      SingleItem(Regime::kNegativeLinear, MakeMatrix({{0, -1}, {0, 1}})),
      Error);
  EXPECT_THROW(
      SingleItem(Regime::kPositiveConcave, MakeMatrix({{0.5, 0.6}, {0, 1}}),
                 ExternalitySpec::LogConcave()),
      Error);
  EXPECT_THROW(SingleItem(Regime::kPositiveConvex, MakeMatrix({{1, 0}, {0, 1}}),
                          ExternalitySpec::LogConcave()),
               Error);
  EXPECT_NO_THROW(
      SingleItem(Regime::kNegativeLinear, MakeMatrix({{2, -1}, {-1, 3}})));
}

TEST(InstanceTest, PerPairExternalities) {
  std::vector<ExternalitySpec> ext = {
      ExternalitySpec::Linear(), ExternalitySpec::Polynomial({0, 1}),
      ExternalitySpec::Polynomial({1, 1}), ExternalitySpec::Linear()};
  const Instance inst(
      Regime::kPositiveConvex,
      {MakeMatrix({{1, 1}, {1, 1}}), MakeMatrix({{1, 1}, {1, 1}})}, ext);
  EXPECT_FALSE(inst.uniform_externality());
  EXPECT_EQ(inst.externality(0, 1), ext[1]);
  EXPECT_EQ(inst.externality(1, 0), ext[2]);
  // Item 0: agent 0 gets 2, agent 1 gets 2^2.
  EXPECT_DOUBLE_EQ(Welfare(inst, Allocation{{0, 0}}), 6.0);
  EXPECT_EQ(inst.MaxDegree(), 2);
}

TEST(FractionalTest, RowSumsChecked) {
  const Instance inst = TwoByTwo();
  EXPECT_NO_THROW(ValidateFractional(inst, MakeMatrix({{0.3, 0.7}, {1, 0}})));
  EXPECT_THROW(ValidateFractional(inst, MakeMatrix({{0.3, 0.6}, {1, 0}})),
               Error);
  EXPECT_THROW(ValidateFractional(inst, MakeMatrix({{-0.1, 1.1}, {1, 0}})),
               Error);
}

}  // namespace
}  // namespace externet
