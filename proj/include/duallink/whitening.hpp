// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "duallink/network.hpp"

namespace duallink {

/// Receiver noise covariances W_l, one positive definite rx_antennas[l] square
/// matrix per link.
struct NoiseModel {
  std::vector<Matrix> W;
};

/// Transmit power weights: the budget becomes sum_l tr(Sigma_l What_l) <= P_T.
struct PowerWeights {
  std::vector<Matrix> What;
};

NoiseModel white_noise(const NetworkSpec& spec);
PowerWeights unit_power_weights(const NetworkSpec& spec);

/// Network with white noise and a plain sum-power budget whose channels are
/// H'_{l,k} = W_l^{-1/2} H_{l,k} What_k^{-1/2}. Throws SpecError on shape
/// mismatch and NumericalError on a matrix that is not positive definite.
NetworkSpec to_equivalent(const NetworkSpec& spec, const NoiseModel& noise,
                          const PowerWeights& pw);

/// Sigma_l = What_l^{-1/2} Sigma'_l What_l^{-1/2}.
CovarianceSet recover_solution(const CovarianceSet& sigma_prime, const PowerWeights& pw);

/// Sigma'_l = What_l^{1/2} Sigma_l What_l^{1/2}; inverse of recover_solution.
CovarianceSet to_equivalent_covariances(const CovarianceSet& sigma, const PowerWeights& pw);

/// sum_l tr(Sigma_l What_l).
double weighted_power(const CovarianceSet& sigma, const PowerWeights& pw);

}  // namespace duallink
