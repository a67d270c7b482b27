// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>

#include "duallink/dual_link.hpp"
#include "duallink/network.hpp"

namespace duallink {

enum class Algorithm { dual_link, pwf, wmmse };

const char* to_string(Algorithm a);
/// Accepts "dual_link", "pwf", "wmmse". Throws SpecError otherwise.
Algorithm parse_algorithm(const std::string& name);

/// Reverse half of a PWF iteration: a mirrored polite water-filling of the
/// reverse links, or the dual transformation of the new forward covariances.
enum class PwfReverse { water_fill, dual_transform };

struct BaselineConfig {
  Algorithm algorithm = Algorithm::pwf;
  double tol = 1e-8;
  int max_iters = 500;
  InitKind init = InitKind::scaled_identity;
  std::uint64_t seed = 0;
  bool record_trace = false;
  /// PWF reports oscillation when the last this-many rates spread by more than tol.
  int oscillation_window = 20;
  PwfReverse pwf_reverse = PwfReverse::dual_transform;

  void validate() const;
  SolverConfig solver_config() const;
};

/// Iterative polite water-filling. The forward half water-fills the whitened
/// channel Omega_l^{-1/2} H_ll Omega-hat_l^{-1/2} of every link with a common
/// water level set so that the de-whitened covariances use exactly P_T. The
/// reverse half follows config.pwf_reverse. Starts from Omega-hat_l = I.
SolveResult pwf_solve(const NetworkSpec& spec, const BaselineConfig& config);
SolveResult pwf_solve_from(const NetworkSpec& spec, const CovarianceSet& start,
                           const BaselineConfig& config);

/// WMMSE (Shi, Razaviyayn, Luo, He 2011) on transmit covariances: block
/// coordinate updates of MMSE receivers, MSE weights and full-rank transmit
/// filters V_l, with one multiplier for the total power found by bisection.
/// Returns Sigma_l = V_l V_l^H; sigma_hat is its dual transformation.
SolveResult wmmse_solve(const NetworkSpec& spec, const BaselineConfig& config);
SolveResult wmmse_solve_from(const NetworkSpec& spec, const CovarianceSet& start,
                             const BaselineConfig& config);

/// Dispatches on config.algorithm, with Dual Link taking config.solver_config().
SolveResult run_algorithm(const NetworkSpec& spec, const CovarianceSet& start,
                          const BaselineConfig& config);

/// True when the spec is a multiple-access channel with successive decoding:
/// every link ends at the same receiver (H_{l,k} identical across l), the
/// cancellation mask is a strict decoding order and all weights are equal.
bool is_mac(const NetworkSpec& spec);

struct MacOracleResult {
  /// Sum capacity log|I + sum_k H_k Sigma_k H_k^H| in nats, times the common weight.
  double value = 0.0;
  CovarianceSet sigma{Direction::forward, {}};
  int iterations = 0;
  /// Norm of the projected-gradient step at exit.
  double stationarity = 0.0;
};

/// Sum capacity of a MAC-shaped spec by projected gradient ascent on the
/// concave log-det objective over {Sigma_k >= 0, sum tr Sigma_k <= P_T}.
/// Throws SpecError for non-MAC specs.
MacOracleResult mac_capacity_oracle(const NetworkSpec& spec, double tol = 1e-8,
                                    int max_iters = 200000);

}  // namespace duallink
