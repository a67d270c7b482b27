// SPDX-License-Identifier: Apache-2.0
#include "duallink/network.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "duallink/errors.hpp"

namespace duallink {

namespace {

std::string link_tag(std::size_t l, std::size_t k) {
  return "H[" + std::to_string(l) + "][" + std::to_string(k) + "]";
}

}  // namespace

std::size_t NetworkSpec::total_tx_antennas() const {
  return static_cast<std::size_t>(std::accumulate(tx_antennas.begin(), tx_antennas.end(), 0));
}

void NetworkSpec::validate() const {
  const std::size_t n = links();
  if (n == 0) throw SpecError("network has no links");
  if (tx_antennas.size() != n || rx_antennas.size() != n) {
    throw SpecError("antenna count lists must have one entry per link");
  }
  for (std::size_t l = 0; l < n; ++l) {
    if (tx_antennas[l] < 1 || rx_antennas[l] < 1) {
      throw SpecError("link " + std::to_string(l) + " needs at least one antenna per side");
    }
    if (!(weights[l] > 0.0) || !std::isfinite(weights[l])) {
      throw SpecError("weight of link " + std::to_string(l) + " must be positive");
    }
  }
  if (!(total_power > 0.0) || !std::isfinite(total_power)) {
    throw SpecError("total_power must be positive");
  }
  if (channels.size() != n) throw SpecError("channels must be an L x L array");
  if (cancel_mask.size() != n) throw SpecError("cancel_mask must be an L x L array");
  for (std::size_t l = 0; l < n; ++l) {
    if (channels[l].size() != n) throw SpecError("channels must be an L x L array");
    if (cancel_mask[l].size() != n) throw SpecError("cancel_mask must be an L x L array");
    if (cancel_mask[l][l]) {
      throw SpecError("cancel_mask[" + std::to_string(l) + "][" + std::to_string(l) +
                      "] must be false");
    }
    for (std::size_t k = 0; k < n; ++k) {
      const Matrix& h = channels[l][k];
      if (h.rows() != rx_antennas[l] || h.cols() != tx_antennas[k]) {
        throw SpecError(link_tag(l, k) + " has shape " + std::to_string(h.rows()) + "x" +
                        std::to_string(h.cols()) + ", expected " +
                        std::to_string(rx_antennas[l]) + "x" + std::to_string(tx_antennas[k]));
      }
      if (!h.allFinite()) throw SpecError(link_tag(l, k) + " has non-finite entries");
    }
  }
}

NetworkSpec make_network(std::vector<std::vector<Matrix>> channels, std::vector<double> weights,
                         double total_power, std::vector<std::vector<bool>> cancel_mask) {
  NetworkSpec spec;
  const std::size_t n = weights.size();
  if (channels.size() != n) throw SpecError("channels must be an L x L array");
  spec.tx_antennas.resize(n);
  spec.rx_antennas.resize(n);
  for (std::size_t l = 0; l < n; ++l) {
    if (channels[l].size() != n) throw SpecError("channels must be an L x L array");
    spec.rx_antennas[l] = static_cast<int>(channels[l][l].rows());
    spec.tx_antennas[l] = static_cast<int>(channels[l][l].cols());
  }
  spec.channels = std::move(channels);
  spec.weights = std::move(weights);
  spec.total_power = total_power;
  spec.cancel_mask = cancel_mask.empty()
                         ? std::vector<std::vector<bool>>(n, std::vector<bool>(n, false))
                         : std::move(cancel_mask);
  spec.validate();
  return spec;
}

double CovarianceSet::total_trace() const {
  double sum = 0.0;
  for (const auto& s : sigma) sum += trace_re(s);
  return sum;
}

void check_shapes(const NetworkSpec& spec, const CovarianceSet& set) {
  if (set.size() != spec.links()) {
    throw SpecError("covariance set has " + std::to_string(set.size()) + " entries for " +
                    std::to_string(spec.links()) + " links");
  }
  for (std::size_t l = 0; l < set.size(); ++l) {
    const int dim = set.direction == Direction::forward ? spec.tx_antennas[l]
                                                        : spec.rx_antennas[l];
    if (set[l].rows() != dim || set[l].cols() != dim) {
      throw SpecError("covariance of link " + std::to_string(l) + " must be " +
                      std::to_string(dim) + "x" + std::to_string(dim));
    }
  }
}

namespace {

void require_direction(const CovarianceSet& set, Direction expected, const char* op) {
  if (set.direction != expected) {
    throw SpecError(std::string(op) + ": covariance set has the wrong direction");
  }
}

Matrix forward_omega(const NetworkSpec& spec, const CovarianceSet& sigma, std::size_t l) {
  Matrix omega = Matrix::Identity(spec.rx_antennas[l], spec.rx_antennas[l]);
  for (std::size_t k = 0; k < spec.links(); ++k) {
    if (!spec.interferes(l, k)) continue;
    const Matrix& h = spec.channel(l, k);
    omega.noalias() += h * sigma[k] * h.adjoint();
  }
  return symmetrize(omega);
}

Matrix reverse_omega(const NetworkSpec& spec, const CovarianceSet& sigma_hat, std::size_t l) {
  Matrix omega = Matrix::Identity(spec.tx_antennas[l], spec.tx_antennas[l]);
  for (std::size_t k = 0; k < spec.links(); ++k) {
    if (!spec.interferes(k, l)) continue;
    const Matrix& h = spec.channel(k, l);
    omega.noalias() += h.adjoint() * sigma_hat[k] * h;
  }
  return symmetrize(omega);
}

Matrix desired_signal(const NetworkSpec& spec, const CovarianceSet& set, std::size_t l) {
  const Matrix& h = spec.direct(l);
  if (set.direction == Direction::forward) return symmetrize(h * set[l] * h.adjoint());
  return symmetrize(h.adjoint() * set[l] * h);
}

}  // namespace

Matrix forward_interference_cov(const NetworkSpec& spec, const CovarianceSet& sigma,
                                std::size_t l) {
  require_direction(sigma, Direction::forward, "forward_interference_cov");
  check_shapes(spec, sigma);
  return forward_omega(spec, sigma, l);
}

Matrix reverse_interference_cov(const NetworkSpec& spec, const CovarianceSet& sigma_hat,
                                std::size_t l) {
  require_direction(sigma_hat, Direction::reverse, "reverse_interference_cov");
  check_shapes(spec, sigma_hat);
  return reverse_omega(spec, sigma_hat, l);
}

std::vector<Matrix> interference_covariances(const NetworkSpec& spec, const CovarianceSet& set) {
  check_shapes(spec, set);
  std::vector<Matrix> out;
  out.reserve(spec.links());
  for (std::size_t l = 0; l < spec.links(); ++l) {
    out.push_back(set.direction == Direction::forward ? forward_omega(spec, set, l)
                                                      : reverse_omega(spec, set, l));
  }
  return out;
}

double link_rate(const NetworkSpec& spec, const CovarianceSet& sigma, std::size_t l) {
  const Matrix omega = forward_interference_cov(spec, sigma, l);
  const Matrix signal = desired_signal(spec, sigma, l);
  return std::max(logdet_pd(omega + signal) - logdet_pd(omega), 0.0);
}

double reverse_link_rate(const NetworkSpec& spec, const CovarianceSet& sigma_hat,
                         std::size_t l) {
  const Matrix omega = reverse_interference_cov(spec, sigma_hat, l);
  const Matrix signal = desired_signal(spec, sigma_hat, l);
  return std::max(logdet_pd(omega + signal) - logdet_pd(omega), 0.0);
}

double weighted_sum_rate(const NetworkSpec& spec, const CovarianceSet& set) {
  return LinkStates(spec, set).weighted_sum_rate();
}

LinkStates::LinkStates(const NetworkSpec& spec, const CovarianceSet& set)
    : direction_(set.direction) {
  check_shapes(spec, set);
  const std::size_t n = spec.links();
  omega_.reserve(n);
  signal_.reserve(n);
  omega_chol_.reserve(n);
  total_chol_.reserve(n);
  rates_.reserve(n);
  for (std::size_t l = 0; l < n; ++l) {
    omega_.push_back(direction_ == Direction::forward ? forward_omega(spec, set, l)
                                                      : reverse_omega(spec, set, l));
    signal_.push_back(desired_signal(spec, set, l));
    omega_chol_.emplace_back(omega_[l]);
    total_chol_.emplace_back(omega_[l] + signal_[l]);
    // Rounding can push a zero rate a hair below zero.
    rates_.push_back(std::max(total_chol_[l].logdet() - omega_chol_[l].logdet(), 0.0));
    wsr_ += spec.weights[l] * rates_[l];
  }
}

Matrix LinkStates::rate_gap(std::size_t l) const {
  const Matrix left = omega_chol_[l].solve(signal_[l]);  // Omega^{-1} S
  const Matrix gap = total_chol_[l].solve(left.adjoint()).adjoint();
  return symmetrize(gap);
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace duallink
