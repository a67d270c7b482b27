// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "duallink/network.hpp"
#include "duallink/rng.hpp"

namespace duallink {

enum class InitKind { scaled_identity, random };

struct SolverConfig {
  /// Stop once |R - R'| <= tol on the forward weighted sum-rate (nats).
  double tol = 1e-8;
  int max_iters = 500;
  InitKind init = InitKind::scaled_identity;
  /// Seed for InitKind::random.
  std::uint64_t seed = 0;
  bool record_trace = false;

  void validate() const;
};

struct IterationRecord {
  int iteration = 0;
  double forward_wsr = 0.0;
  double reverse_wsr = 0.0;
  /// Dual-transformation mismatch at the end of the iteration; see residual().
  double kkt_residual = 0.0;
  /// Wall time since the solve started, microseconds.
  double elapsed_us = 0.0;
};

using IterationTrace = std::vector<IterationRecord>;

/// Shared by Dual Link and the baselines.
struct SolveResult {
  CovarianceSet sigma{Direction::forward, {}};
  CovarianceSet sigma_hat{Direction::reverse, {}};
  double wsr = 0.0;
  /// Weighted sum-rate of the starting point.
  double initial_wsr = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Set by PWF when the trailing window of rates keeps swinging by more than tol.
  bool oscillating = false;
  std::optional<IterationTrace> trace;
};

/// Random stream used by InitKind::random.
inline constexpr std::uint64_t kInitStream = 2;

/// Starting point with sum_l tr(Sigma_l) = P_T.
CovarianceSet init_covariances(const NetworkSpec& spec, const SolverConfig& config);
/// Sigma_l = A_l A_l^H with complex Gaussian A_l, scaled jointly to total trace P_T.
CovarianceSet random_covariances(const NetworkSpec& spec, CounterRng& rng);

/// Sigma-hat_l = P_T w_l G_l / sum_k w_k tr(G_k) with
/// G_l = Omega_l^{-1} - (Omega_l + H_{l,l} Sigma_l H_{l,l}^H)^{-1}.
CovarianceSet forward_to_reverse(const NetworkSpec& spec, const CovarianceSet& sigma);
/// Mirror image of forward_to_reverse on the dual network.
CovarianceSet reverse_to_forward(const NetworkSpec& spec, const CovarianceSet& sigma_hat);
/// Dual transformation from already evaluated link states, in either direction.
CovarianceSet dual_transform(const NetworkSpec& spec, const LinkStates& states);

/// Runs the Dual Link iteration from init_covariances(spec, config).
SolveResult solve(const NetworkSpec& spec, const SolverConfig& config);
/// Runs the Dual Link iteration from a caller-supplied feasible start.
SolveResult solve_from(const NetworkSpec& spec, const CovarianceSet& start,
                       const SolverConfig& config);

/// Largest per-link Frobenius mismatch, relative to P_T, between
/// (Sigma, Sigma-hat) and their images under the two dual transformations.
/// Zero exactly at a fixed point of the iteration.
double residual(const NetworkSpec& spec, const CovarianceSet& sigma,
                const CovarianceSet& sigma_hat);

}  // namespace duallink
