// SPDX-License-Identifier: Apache-2.0
#include "duallink/whitening.hpp"

#include "duallink/errors.hpp"

namespace duallink {

namespace {

void check_dims(const std::vector<Matrix>& ms, const std::vector<int>& dims, const char* what) {
  if (ms.size() != dims.size()) throw SpecError(std::string(what) + ": wrong number of matrices");
  for (std::size_t l = 0; l < ms.size(); ++l) {
    if (ms[l].rows() != dims[l] || ms[l].cols() != dims[l]) {
      throw SpecError(std::string(what) + ": matrix " + std::to_string(l) + " has the wrong shape");
    }
  }
}

void check_weights(const CovarianceSet& sigma, const PowerWeights& pw) {
  if (sigma.direction != Direction::forward) throw SpecError("power weights apply to forward covariances");
  if (sigma.size() != pw.What.size()) throw SpecError("power weights: wrong number of matrices");
  for (std::size_t l = 0; l < sigma.size(); ++l) {
    if (sigma[l].rows() != pw.What[l].rows() || sigma[l].cols() != pw.What[l].cols()) {
      throw SpecError("power weights: shape mismatch at link " + std::to_string(l));
    }
  }
}

// Square root of a positive definite matrix, rejecting anything indefinite.
Matrix sqrt_pd(const Matrix& a) {
  if (!is_hermitian_psd(a) || min_eigenvalue(a) <= 0.0) {
    throw NumericalError("power weight is not positive definite");
  }
  return sqrt_psd(a);
}

}  // namespace

NoiseModel white_noise(const NetworkSpec& spec) {
  NoiseModel m;
  for (int r : spec.rx_antennas) m.W.push_back(Matrix::Identity(r, r));
  return m;
}

PowerWeights unit_power_weights(const NetworkSpec& spec) {
  PowerWeights p;
  for (int t : spec.tx_antennas) p.What.push_back(Matrix::Identity(t, t));
  return p;
}

NetworkSpec to_equivalent(const NetworkSpec& spec, const NoiseModel& noise,
                          const PowerWeights& pw) {
  spec.validate();
  check_dims(noise.W, spec.rx_antennas, "noise model");
  check_dims(pw.What, spec.tx_antennas, "power weights");
  std::vector<Matrix> rx, tx;
  for (const auto& w : noise.W) rx.push_back(inv_sqrt_pd(w));
  for (const auto& w : pw.What) tx.push_back(inv_sqrt_pd(w));
  NetworkSpec out = spec;
  for (std::size_t l = 0; l < spec.links(); ++l) {
    for (std::size_t k = 0; k < spec.links(); ++k) {
      out.channels[l][k] = rx[l] * spec.channel(l, k) * tx[k];
    }
  }
  return out;
}

CovarianceSet recover_solution(const CovarianceSet& sigma_prime, const PowerWeights& pw) {
  check_weights(sigma_prime, pw);
  CovarianceSet out{Direction::forward, {}};
  for (std::size_t l = 0; l < sigma_prime.size(); ++l) {
    const Matrix s = inv_sqrt_pd(pw.What[l]);
    out.sigma.push_back(symmetrize(s * sigma_prime[l] * s));
  }
  return out;
}

CovarianceSet to_equivalent_covariances(const CovarianceSet& sigma, const PowerWeights& pw) {
  check_weights(sigma, pw);
  CovarianceSet out{Direction::forward, {}};
  for (std::size_t l = 0; l < sigma.size(); ++l) {
    const Matrix s = sqrt_pd(pw.What[l]);
    out.sigma.push_back(symmetrize(s * sigma[l] * s));
  }
  return out;
}

double weighted_power(const CovarianceSet& sigma, const PowerWeights& pw) {
  check_weights(sigma, pw);
  double p = 0.0;
  for (std::size_t l = 0; l < sigma.size(); ++l) p += (sigma[l] * pw.What[l]).trace().real();
  return p;
}

}  // namespace duallink
