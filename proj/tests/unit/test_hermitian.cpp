// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <random>

#include "duallink/errors.hpp"
#include "duallink/hermitian.hpp"
#include "../support/oracles.hpp"

using namespace duallink;

namespace {

Matrix diag(std::initializer_list<double> d) {
  Matrix m = Matrix::Zero(d.size(), d.size());
  int i = 0;
  for (double v : d) {
    m(i, i) = v;
    ++i;
  }
  return m;
}

}  // namespace

TEST(Symmetrize, IdentityUnchanged) {
  EXPECT_TRUE(symmetrize(Matrix::Identity(3, 3)).isApprox(Matrix::Identity(3, 3)));
}

TEST(Symmetrize, HermitianInputUnchanged) {
  Matrix a(2, 2);
  a << 1.0, Complex(2, 1), Complex(2, -1), 3.0;
  EXPECT_LT((symmetrize(a) - a).norm(), 1e-15);
}

TEST(Symmetrize, AveragesWithAdjoint) {
  Matrix a(2, 2);
  a << 1.0, 2.0, 0.0, 1.0;
  Matrix expected(2, 2);
  expected << 1.0, 1.0, 1.0, 1.0;
  EXPECT_LT((symmetrize(a) - expected).norm(), 1e-15);
}

TEST(Symmetrize, RejectsNonSquare) {
  EXPECT_THROW(symmetrize(Matrix::Zero(2, 3)), SpecError);
}

TEST(InvPd, DiagonalCases) {
  EXPECT_LT((inv_pd(Matrix::Identity(2, 2)) - Matrix::Identity(2, 2)).norm(), 1e-15);
  EXPECT_LT((inv_pd(diag({2, 4})) - diag({0.5, 0.25})).norm(), 1e-15);
}

TEST(InvPd, MultiplyBack) {
  std::mt19937_64 gen(1);
  for (int t = 0; t < 20; ++t) {
    const Matrix a = oracle::random_pd(gen, 3);
    const Matrix b = inv_pd(a);
    EXPECT_LT((a * b - Matrix::Identity(3, 3)).norm(), 1e-8);
    EXPECT_TRUE(is_hermitian_psd(b));
  }
}

TEST(InvPd, RejectsSingularAndIndefinite) {
  EXPECT_THROW(inv_pd(diag({1, 0})), NumericalError);
  EXPECT_THROW(inv_pd(diag({1, -1})), NumericalError);
  EXPECT_THROW(inv_pd(diag({1, 1e-14})), NumericalError);
}

TEST(InvSqrtPd, DiagonalCases) {
  EXPECT_LT((inv_sqrt_pd(Matrix::Identity(2, 2)) - Matrix::Identity(2, 2)).norm(), 1e-15);
  EXPECT_LT((inv_sqrt_pd(diag({4, 9})) - diag({0.5, 1.0 / 3.0})).norm(), 1e-14);
}

TEST(InvSqrtPd, MultiplyBackAndCommutes) {
  std::mt19937_64 gen(2);
  for (int t = 0; t < 20; ++t) {
    const Matrix a = oracle::random_pd(gen, 4);
    const Matrix s = inv_sqrt_pd(a);
    EXPECT_LT((s * a * s - Matrix::Identity(4, 4)).norm(), 1e-8);
    EXPECT_LT((s * a - a * s).norm(), 1e-8 * (s * a).norm());
    EXPECT_TRUE(is_hermitian_psd(s));
    EXPECT_GT(min_eigenvalue(s), 0.0);
  }
}

TEST(InvSqrtPd, RejectsIndefinite) {
  EXPECT_THROW(inv_sqrt_pd(diag({1, -2})), NumericalError);
}

TEST(SqrtPsd, SquaresBack) {
  std::mt19937_64 gen(3);
  const Matrix a = oracle::random_psd(gen, 4, 2);
  const Matrix r = sqrt_psd(a);
  EXPECT_LT((r * r - a).norm(), 1e-10 * a.norm());
}

TEST(LogdetPd, DiagonalCases) {
  EXPECT_NEAR(logdet_pd(Matrix::Identity(3, 3)), 0.0, 1e-15);
  EXPECT_NEAR(logdet_pd(diag({std::exp(1.0), std::exp(2.0)})), 3.0, 1e-14);
}

TEST(LogdetPd, MatchesEigenvalueSum) {
  std::mt19937_64 gen(4);
  for (int t = 0; t < 20; ++t) {
    const Matrix a = oracle::random_pd(gen, 5);
    EXPECT_NEAR(logdet_pd(a), oracle::logdet(a), 1e-10);
  }
}

TEST(LogdetPd, RejectsIndefinite) {
  EXPECT_THROW(logdet_pd(diag({1, -1})), NumericalError);
}

TEST(WaterFill, SingleChannelTakesEverything) {
  const std::vector<double> g{1.0};
  const WaterFilling wf = water_fill(g, 1.0, 7.0);
  ASSERT_EQ(wf.power.size(), 1u);
  EXPECT_NEAR(wf.power[0], 7.0, 1e-14);
}

TEST(WaterFill, TwoChannelClosedForm) {
  const std::vector<double> g{1.0, 4.0};
  const WaterFilling wf = water_fill(g, 1.0, 1.0);
  EXPECT_NEAR(wf.level, 1.125, 1e-14);
  EXPECT_NEAR(wf.power[0], 0.125, 1e-14);
  EXPECT_NEAR(wf.power[1], 0.875, 1e-14);
}

TEST(WaterFill, WeakChannelStaysDry) {
  const std::vector<double> g{1.0, 0.01};
  const WaterFilling wf = water_fill(g, 1.0, 0.5);
  EXPECT_NEAR(wf.power[0], 0.5, 1e-14);
  EXPECT_EQ(wf.power[1], 0.0);
  // Scalar KKT: the dry channel's floor 1/g lies above the level.
  EXPECT_LE(wf.level, 1.0 / 0.01);
}

TEST(WaterFill, AllZeroGainsThrow) {
  const std::vector<double> g{0.0, 0.0};
  EXPECT_THROW(water_fill(g, 1.0, 1.0), NumericalError);
}

TEST(WaterFill, BudgetAndComplementarySlackness) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.01, 5.0);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> g(7), w(7);
    for (auto& x : g) x = u(gen);
    for (auto& x : w) x = 0.5 + 0.1 * u(gen);
    const double budget = 0.1 + u(gen);
    const WaterFilling wf = water_fill(g, w, budget);
    double sum = 0.0;
    for (double p : wf.power) sum += p;
    EXPECT_NEAR(sum, budget, 1e-10 * budget);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (wf.power[i] > 0) {
        EXPECT_NEAR(wf.level * w[i] - 1.0 / g[i], wf.power[i], 1e-9);
      } else {
        EXPECT_LE(wf.level * w[i], 1.0 / g[i] + 1e-9);
      }
    }
  }
}

TEST(WaterFill, MatchesBisectionOracle) {
  std::mt19937_64 gen(6);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int t = 0; t < 30; ++t) {
    std::vector<double> g(6);
    for (auto& x : g) x = u(gen);
    const WaterFilling wf = water_fill(g, 1.0, 4.0);
    const std::vector<double> ref = oracle::water_fill_bisect(g, 4.0);
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(wf.power[i], ref[i], 1e-9);
  }
}

TEST(WaterFill, CostsChargePower) {
  const std::vector<double> g{1.0, 4.0};
  const std::vector<double> w{1.0, 1.0};
  const std::vector<double> c{2.0, 2.0};
  // Unit costs of 2 halve the usable budget.
  const WaterFilling a = water_fill(g, w, c, 2.0);
  const WaterFilling b = water_fill(g, 1.0, 1.0);
  EXPECT_NEAR(a.power[0], b.power[0], 1e-14);
  EXPECT_NEAR(a.power[1], b.power[1], 1e-14);
}
