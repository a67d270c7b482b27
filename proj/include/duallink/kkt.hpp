// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "duallink/dual_link.hpp"
#include "duallink/network.hpp"

namespace duallink {

/// Multipliers of the Lagrangian F(Sigma, Omega, Lambda, mu) of the problem
/// lifted with Omega_l as explicit variables: lambda[l] (rx_antennas[l] square,
/// Hermitian) for the Omega_l definition constraints and mu for total power.
struct MultiplierState {
  std::vector<Matrix> lambda;
  double mu = 0.0;
  /// Set when every Lambda_l vanishes (no signal anywhere), so mu = 0.
  bool degenerate = false;
};

/// F = sum_l w_l (log|Omega_l + H Sigma_l H^H| - log|Omega_l|)
///     + mu (P_T - sum_l tr Sigma_l)
///     + sum_l tr(Lambda_l (Omega_l - I - sum_{k != l} H_{l,k} Sigma_k H_{l,k}^H)).
double lagrangian(const NetworkSpec& spec, const CovarianceSet& sigma,
                  std::span<const Matrix> omega, const MultiplierState& m);

/// Gradients use the convention dF = Re tr(G^H dX) and are Hermitian:
///   dF/dSigma_l = w_l H_ll^H (Omega_l + H_ll Sigma_l H_ll^H)^{-1} H_ll - mu I
///                 - sum_{k != l} H_{k,l}^H Lambda_k H_{k,l}
std::vector<Matrix> grad_sigma(const NetworkSpec& spec, const CovarianceSet& sigma,
                               std::span<const Matrix> omega, const MultiplierState& m);
///   dF/dOmega_l = w_l ((Omega_l + H_ll Sigma_l H_ll^H)^{-1} - Omega_l^{-1}) + Lambda_l
std::vector<Matrix> grad_omega(const NetworkSpec& spec, const CovarianceSet& sigma,
                               std::span<const Matrix> omega, const MultiplierState& m);

/// Lambda_l = w_l (Omega_l^{-1} - (Omega_l + H Sigma_l H^H)^{-1}) at the Omega
/// induced by sigma, and mu = sum_l tr(Lambda_l) / P_T.
MultiplierState extract_multipliers(const NetworkSpec& spec, const CovarianceSet& sigma);

struct ScalingCheck {
  double alpha = 1.0;
  /// |F(Sigma/a, Omega/a, a Lambda, a mu) - F(Sigma, Omega, Lambda, mu)|.
  double deviation = 0.0;
  /// deviation / |F|.
  double relative_deviation = 0.0;
  /// Frobenius norm of dF/dOmega at Omega/a under the scaled arguments.
  double omega_gradient_norm = 0.0;
  double lagrangian = 0.0;
};

/// Evaluates the scaling invariance of F at a feasible sigma with full power,
/// taking Omega from sigma and the multipliers from extract_multipliers.
ScalingCheck check_scaling_invariance(const NetworkSpec& spec, const CovarianceSet& sigma,
                                      double alpha);

/// Residuals of the four first-order conditions at (Sigma, Sigma-hat), with mu
/// taken from Sigma. Each is a maximum over links.
///
///   forward_transform:  Sigma-hat_l = (w_l/mu)(Omega_l^{-1} - (Omega_l + H Sigma_l H^H)^{-1})
///   reverse_gradient:   Omega-hat_l = (w_l/mu) H^H (Omega_l + H Sigma_l H^H)^{-1} H
///   reverse_transform:  Sigma_l = (w_l/mu)(Omega-hat_l^{-1} - (Omega-hat_l + H^H Sigma-hat_l H)^{-1})
///   forward_gradient:   Omega_l = (w_l/mu) H (H^H Sigma-hat_l H + Omega-hat_l)^{-1} H^H
///
/// The two transform residuals are Frobenius mismatches relative to P_T. The
/// two gradient conditions are equalities only on the range of the covariance:
/// where Sigma_l (resp. Sigma-hat_l) is rank deficient, a PSD multiplier for the
/// cone constraint absorbs the rest. Their residuals are therefore
/// ||(lhs - rhs) Sigma_l||_F / (||lhs||_F P_T), and the unrestricted
/// mismatches are reported separately together with the cone multiplier sign.
struct SaddlePointReport {
  double forward_transform = 0.0;
  double reverse_gradient = 0.0;
  double reverse_transform = 0.0;
  double forward_gradient = 0.0;

  double reverse_gradient_unrestricted = 0.0;
  double forward_gradient_unrestricted = 0.0;
  /// Largest positive eigenvalue of rhs - lhs in either gradient condition,
  /// relative to ||lhs||_F; zero when the implied cone multipliers are PSD.
  double cone_multiplier_violation = 0.0;

  double mu = 0.0;
  double mu_hat = 0.0;

  double max_residual() const;
  bool holds(double tol) const { return max_residual() < tol; }
};

SaddlePointReport saddle_point_check(const NetworkSpec& spec, const CovarianceSet& sigma,
                                     const CovarianceSet& sigma_hat);
SaddlePointReport saddle_point_check(const NetworkSpec& spec, const SolveResult& result);

struct GradientCheck {
  int directions = 0;
  double max_relative_error_sigma = 0.0;
  double max_relative_error_omega = 0.0;
};

/// Compares grad_sigma / grad_omega with central differences of lagrangian
/// along random Hermitian directions of unit Frobenius norm.
GradientCheck gradient_check(const NetworkSpec& spec, const CovarianceSet& sigma,
                             std::span<const Matrix> omega, const MultiplierState& m,
                             int directions, std::uint64_t seed, double step = 1e-5);

}  // namespace duallink
