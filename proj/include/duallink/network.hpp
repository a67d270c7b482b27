// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#include "duallink/hermitian.hpp"

namespace duallink {

/// MIMO B-MAC network: L data links, link l from transmitter T_l (tx_antennas[l]
/// antennas) to receiver R_l (rx_antennas[l] antennas), unit white noise at
/// every receiver and a total transmit power budget.
struct NetworkSpec {
  std::vector<int> tx_antennas;
  std::vector<int> rx_antennas;
  /// channels[l][k] is H_{l,k}: rx_antennas[l] x tx_antennas[k], from T_k to R_l.
  std::vector<std::vector<Matrix>> channels;
  std::vector<double> weights;
  double total_power = 0.0;
  /// cancel_mask[l][k] = true removes link k's interference at R_l (successive
  /// cancellation or dirty paper coding); identical to H_{l,k} = 0.
  std::vector<std::vector<bool>> cancel_mask;

  std::size_t links() const { return weights.size(); }
  const Matrix& channel(std::size_t l, std::size_t k) const { return channels[l][k]; }
  const Matrix& direct(std::size_t l) const { return channels[l][l]; }
  /// True when H_{l,k} contributes interference at R_l.
  bool interferes(std::size_t l, std::size_t k) const { return k != l && !cancel_mask[l][k]; }
  std::size_t total_tx_antennas() const;

  /// Throws SpecError on any violated invariant.
  void validate() const;
};

/// Builds a spec from channels[l][k], inferring antenna counts from shapes; an
/// empty mask means no cancellation. Validates the result.
NetworkSpec make_network(std::vector<std::vector<Matrix>> channels, std::vector<double> weights,
                         double total_power, std::vector<std::vector<bool>> cancel_mask = {});

enum class Direction { forward, reverse };

/// Per-link transmit covariances: Sigma_l (tx_antennas[l] square) for forward
/// links, Sigma-hat_l (rx_antennas[l] square) for the reverse links of the dual
/// network.
struct CovarianceSet {
  Direction direction = Direction::forward;
  std::vector<Matrix> sigma;

  double total_trace() const;
  std::size_t size() const { return sigma.size(); }
  const Matrix& operator[](std::size_t l) const { return sigma[l]; }
  Matrix& operator[](std::size_t l) { return sigma[l]; }
};

/// Throws SpecError when the set does not match the spec's shapes for its direction.
void check_shapes(const NetworkSpec& spec, const CovarianceSet& set);

/// Omega_l = I + sum_{k != l, unmasked} H_{l,k} Sigma_k H_{l,k}^H.
Matrix forward_interference_cov(const NetworkSpec& spec, const CovarianceSet& sigma,
                                std::size_t l);
/// Omega-hat_l = I + sum_{k != l, unmasked} H_{k,l}^H Sigma-hat_k H_{k,l}.
Matrix reverse_interference_cov(const NetworkSpec& spec, const CovarianceSet& sigma_hat,
                                std::size_t l);
/// Interference-plus-noise covariance for every link, in the set's direction.
std::vector<Matrix> interference_covariances(const NetworkSpec& spec, const CovarianceSet& set);

/// log|I + H_{l,l} Sigma_l H_{l,l}^H Omega_l^{-1}| in nats.
double link_rate(const NetworkSpec& spec, const CovarianceSet& sigma, std::size_t l);
/// log|I + H_{l,l}^H Sigma-hat_l H_{l,l} Omega-hat_l^{-1}| in nats.
double reverse_link_rate(const NetworkSpec& spec, const CovarianceSet& sigma_hat,
                         std::size_t l);
/// sum_l w_l * rate_l, using the forward or reverse rate per the set's direction.
double weighted_sum_rate(const NetworkSpec& spec, const CovarianceSet& set);

/// Everything a dual-transformation step needs about one direction of the
/// network at a given covariance set, computed once: per link the
/// interference-plus-noise covariance Omega_l, the desired signal covariance
/// S_l = H Sigma_l H^H (direction-adjusted), factorizations of Omega_l and
/// Omega_l + S_l, and the rates.
class LinkStates {
 public:
  LinkStates(const NetworkSpec& spec, const CovarianceSet& set);

  std::size_t links() const { return omega_.size(); }
  Direction direction() const { return direction_; }
  const Matrix& omega(std::size_t l) const { return omega_[l]; }
  const Matrix& signal(std::size_t l) const { return signal_[l]; }
  double rate(std::size_t l) const { return rates_[l]; }
  double weighted_sum_rate() const { return wsr_; }

  /// Omega_l^{-1} - (Omega_l + S_l)^{-1}, evaluated as
  /// Omega_l^{-1} S_l (Omega_l + S_l)^{-1} to avoid cancellation.
  Matrix rate_gap(std::size_t l) const;
  Matrix omega_inverse(std::size_t l) const { return omega_chol_[l].inverse(); }
  Matrix total_inverse(std::size_t l) const { return total_chol_[l].inverse(); }

 private:
  Direction direction_;
  std::vector<Matrix> omega_;
  std::vector<Matrix> signal_;
  std::vector<PdFactor> omega_chol_;
  std::vector<PdFactor> total_chol_;
  std::vector<double> rates_;
  double wsr_ = 0.0;
};

/// Linear power gain from decibels: 10^(db/10).
double db_to_linear(double db);

}  // namespace duallink
