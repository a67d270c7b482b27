// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <random>

#include "duallink/network.hpp"
#include "oracles.hpp"

namespace fixture {

using duallink::Matrix;
using duallink::NetworkSpec;

inline Matrix scalar(double v) { return Matrix::Constant(1, 1, v); }

/// Random network with the given antenna counts and unit-variance channels.
inline NetworkSpec random_network(std::mt19937_64& gen, int links, int tx, int rx,
                                  double total_power = 10.0, double cross_gain = 1.0) {
  std::uniform_real_distribution<double> w(0.5, 1.0);
  std::vector<std::vector<Matrix>> h(links, std::vector<Matrix>(links));
  for (int l = 0; l < links; ++l)
    for (int k = 0; k < links; ++k)
      h[l][k] = (l == k ? 1.0 : std::sqrt(cross_gain)) * oracle::random_complex(gen, rx, tx);
  std::vector<double> weights(links);
  for (auto& x : weights) x = w(gen);
  return duallink::make_network(std::move(h), std::move(weights), total_power);
}

/// Random feasible forward covariances with total trace = P_T.
inline duallink::CovarianceSet random_sigma(std::mt19937_64& gen, const NetworkSpec& spec) {
  duallink::CovarianceSet s{duallink::Direction::forward, {}};
  double total = 0.0;
  for (std::size_t l = 0; l < spec.links(); ++l) {
    s.sigma.push_back(oracle::random_pd(gen, spec.tx_antennas[l], 0.1));
    total += s.sigma.back().trace().real();
  }
  for (auto& m : s.sigma) m *= spec.total_power / total;
  return s;
}

}  // namespace fixture

namespace fixture {

/// Multiple-access channel: `users` transmitters with `tx` antennas, one
/// receiver with `rx` antennas, successive decoding in index order (link l
/// has links 0..l-1 removed) and equal weights.
inline NetworkSpec mac_network(std::mt19937_64& gen, int users, int tx, int rx,
                               double total_power, double weight = 1.0) {
  std::vector<Matrix> g;
  for (int k = 0; k < users; ++k) g.push_back(oracle::random_complex(gen, rx, tx));
  std::vector<std::vector<Matrix>> h(users, g);
  std::vector<std::vector<bool>> mask(users, std::vector<bool>(users, false));
  for (int l = 0; l < users; ++l)
    for (int k = 0; k < l; ++k) mask[l][k] = true;
  return duallink::make_network(std::move(h), std::vector<double>(users, weight), total_power,
                                std::move(mask));
}

/// log|I + sum_k G_k Sigma_k G_k^H| with eigenvalue log-determinant.
inline double mac_sum_rate(const NetworkSpec& spec, const std::vector<Matrix>& sigma) {
  const int r = spec.rx_antennas[0];
  Matrix m = Matrix::Identity(r, r);
  for (std::size_t k = 0; k < spec.links(); ++k)
    m += spec.channels[0][k] * sigma[k] * spec.channels[0][k].adjoint();
  return oracle::logdet(m);
}

}  // namespace fixture
