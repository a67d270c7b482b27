// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <random>

#include "duallink/dual_link.hpp"
#include "duallink/errors.hpp"
#include "duallink/whitening.hpp"
#include "../support/fixtures.hpp"

using namespace duallink;
using fixture::scalar;

namespace {

struct Colored {
  NetworkSpec spec;
  NoiseModel noise;
  PowerWeights pw;
};

Colored random_colored(std::mt19937_64& gen) {
  Colored c{fixture::random_network(gen, 3, 2, 3, 10.0), {}, {}};
  for (int l = 0; l < 3; ++l) {
    c.noise.W.push_back(oracle::random_pd(gen, 3, 0.3));
    c.pw.What.push_back(oracle::random_pd(gen, 2, 0.3));
  }
  return c;
}

}  // namespace

TEST(ToEquivalent, IdentityWhiteningIsNoop) {
  std::mt19937_64 gen(1);
  const NetworkSpec s = fixture::random_network(gen, 3, 2, 3);
  const NetworkSpec e = to_equivalent(s, white_noise(s), unit_power_weights(s));
  for (std::size_t l = 0; l < 3; ++l)
    for (std::size_t k = 0; k < 3; ++k) EXPECT_LT((e.channel(l, k) - s.channel(l, k)).norm(), 1e-14);
}

TEST(ToEquivalent, ScalarArithmetic) {
  const NetworkSpec s = make_network({{scalar(2)}}, {1.0}, 1.0);
  const NetworkSpec e = to_equivalent(s, NoiseModel{{scalar(4)}}, PowerWeights{{scalar(1)}});
  EXPECT_NEAR(e.direct(0)(0, 0).real(), 1.0, 1e-15);
  EXPECT_EQ(e.total_power, s.total_power);
}

TEST(ToEquivalent, UsesTransmitterWeight) {
  // H'_{1,2} is pre-whitened by transmitter 2's weight.
  const NetworkSpec s =
      make_network({{scalar(1), scalar(1)}, {scalar(1), scalar(1)}}, {1.0, 1.0}, 1.0);
  const NetworkSpec e =
      to_equivalent(s, white_noise(s), PowerWeights{{scalar(1), scalar(4)}});
  EXPECT_NEAR(e.channel(0, 1)(0, 0).real(), 0.5, 1e-15);
  EXPECT_NEAR(e.channel(1, 0)(0, 0).real(), 1.0, 1e-15);
}

TEST(ToEquivalent, RejectsIndefinite) {
  const NetworkSpec s = make_network({{scalar(1)}}, {1.0}, 1.0);
  EXPECT_THROW(to_equivalent(s, NoiseModel{{scalar(-1)}}, unit_power_weights(s)), NumericalError);
  EXPECT_THROW(to_equivalent(s, white_noise(s), PowerWeights{{scalar(0)}}), NumericalError);
  EXPECT_THROW(to_equivalent(s, NoiseModel{{}}, unit_power_weights(s)), SpecError);
}

TEST(RecoverSolution, Scalar) {
  const CovarianceSet r = recover_solution({Direction::forward, {scalar(8)}}, PowerWeights{{scalar(4)}});
  EXPECT_NEAR(r[0](0, 0).real(), 2.0, 1e-15);
  EXPECT_NEAR(weighted_power(r, PowerWeights{{scalar(4)}}), 8.0, 1e-14);
}

TEST(RecoverSolution, IdentityWeightsNoop) {
  std::mt19937_64 gen(2);
  const Matrix m = oracle::random_pd(gen, 3);
  const CovarianceSet r = recover_solution({Direction::forward, {m}}, PowerWeights{{Matrix::Identity(3, 3)}});
  EXPECT_LT((r[0] - m).norm(), 1e-14);
}

TEST(RecoverSolution, RoundTrip) {
  std::mt19937_64 gen(3);
  const Colored c = random_colored(gen);
  const CovarianceSet sigma = fixture::random_sigma(gen, c.spec);
  const CovarianceSet back = recover_solution(to_equivalent_covariances(sigma, c.pw), c.pw);
  for (std::size_t l = 0; l < 3; ++l) EXPECT_LT((back[l] - sigma[l]).norm(), 1e-10 * sigma[l].norm());
}

TEST(Whitening, RateAndPowerEquivalence) {
  std::mt19937_64 gen(4);
  for (int t = 0; t < 10; ++t) {
    const Colored c = random_colored(gen);
    const NetworkSpec e = to_equivalent(c.spec, c.noise, c.pw);
    const CovarianceSet prime = fixture::random_sigma(gen, e);
    const CovarianceSet sigma = recover_solution(prime, c.pw);
    const double colored = oracle::wsr(c.spec, sigma.sigma, &c.noise.W);
    const double white = weighted_sum_rate(e, prime);
    EXPECT_NEAR(colored, white, 1e-10 * white);
    EXPECT_NEAR(weighted_power(sigma, c.pw), prime.total_trace(), 1e-10 * prime.total_trace());
  }
}
