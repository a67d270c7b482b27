// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>

#include <Eigen/SVD>

#include "duallink/baselines.hpp"
#include "duallink/errors.hpp"

namespace duallink {

namespace {

// One polite water-filling half step. `rx_whiten[l]` is Omega_l^{-1/2} (the
// receive side of the link in the direction being updated) and `tx_whiten[l]`
// the transmit-side whitener; the new covariance of link l is
// tx_whiten Q_l tx_whiten, with Q_l water-filling the whitened channel.
CovarianceSet polite_water_fill(const NetworkSpec& spec, Direction direction,
                                const std::vector<Matrix>& rx_whiten,
                                const std::vector<Matrix>& tx_whiten) {
  const std::size_t n = spec.links();
  std::vector<Matrix> modes(n);
  std::vector<double> gains, weights, costs;
  std::vector<std::size_t> owner;

  for (std::size_t l = 0; l < n; ++l) {
    const Matrix channel =
        direction == Direction::forward ? spec.direct(l) : Matrix(spec.direct(l).adjoint());
    const Matrix whitened = rx_whiten[l] * channel * tx_whiten[l];
    Eigen::JacobiSVD<Matrix> svd(whitened, Eigen::ComputeThinV);
    modes[l] = svd.matrixV();
    const auto& sv = svd.singularValues();
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      const Matrix dewhitened = tx_whiten[l] * modes[l].col(i);
      gains.push_back(sv(i) * sv(i));
      weights.push_back(spec.weights[l]);
      costs.push_back(dewhitened.squaredNorm());
      owner.push_back(l);
    }
  }

  const WaterFilling wf = water_fill(gains, weights, costs, spec.total_power);

  CovarianceSet out{direction, {}};
  std::size_t entry = 0;
  for (std::size_t l = 0; l < n; ++l) {
    const Eigen::Index dim = tx_whiten[l].rows();
    Matrix q = Matrix::Zero(dim, dim);
    for (Eigen::Index i = 0; i < modes[l].cols(); ++i, ++entry) {
      if (wf.power[entry] > 0.0) {
        q.noalias() += wf.power[entry] * (modes[l].col(i) * modes[l].col(i).adjoint());
      }
    }
    out.sigma.push_back(symmetrize(tx_whiten[l] * q * tx_whiten[l]));
  }
  return out;
}

std::vector<Matrix> whiteners(const std::vector<Matrix>& omega) {
  std::vector<Matrix> out;
  out.reserve(omega.size());
  for (const auto& o : omega) out.push_back(inv_sqrt_pd(o));
  return out;
}

CovarianceSet zero_reverse(const NetworkSpec& spec) {
  CovarianceSet out{Direction::reverse, {}};
  for (std::size_t l = 0; l < spec.links(); ++l) {
    out.sigma.push_back(Matrix::Zero(spec.rx_antennas[l], spec.rx_antennas[l]));
  }
  return out;
}

}  // namespace

SolveResult pwf_solve(const NetworkSpec& spec, const BaselineConfig& config) {
  return pwf_solve_from(spec, init_covariances(spec, config.solver_config()), config);
}

SolveResult pwf_solve_from(const NetworkSpec& spec, const CovarianceSet& start,
                           const BaselineConfig& config) {
  spec.validate();
  config.validate();
  check_shapes(spec, start);
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();

  SolveResult result;
  result.sigma = start;
  result.sigma_hat = zero_reverse(spec);  // Omega-hat = I
  if (config.record_trace) result.trace.emplace();

  double rate = weighted_sum_rate(spec, result.sigma);
  result.initial_wsr = rate;
  std::deque<double> window;

  int iteration = 0;
  try {
    for (iteration = 1; iteration <= config.max_iters; ++iteration) {
      const double previous = rate;

      // Forward links: receive whitening from Sigma, transmit whitening from Sigma-hat.
      std::vector<Matrix> omega = interference_covariances(spec, result.sigma);
      std::vector<Matrix> omega_hat = interference_covariances(spec, result.sigma_hat);
      std::vector<Matrix> omega_w = whiteners(omega);
      const std::vector<Matrix> omega_hat_w = whiteners(omega_hat);
      result.sigma = polite_water_fill(spec, Direction::forward, omega_w, omega_hat_w);

      if (config.pwf_reverse == PwfReverse::dual_transform) {
        result.sigma_hat = forward_to_reverse(spec, result.sigma);
      } else {
        // Reverse links, mirrored: receive side Omega-hat, transmit side the new Omega.
        omega = interference_covariances(spec, result.sigma);
        omega_w = whiteners(omega);
        result.sigma_hat = polite_water_fill(spec, Direction::reverse, omega_hat_w, omega_w);
      }

      rate = weighted_sum_rate(spec, result.sigma);
      result.iterations = iteration;
      window.push_back(rate);
      if (static_cast<int>(window.size()) > config.oscillation_window) window.pop_front();

      if (result.trace) {
        IterationRecord rec;
        rec.iteration = iteration;
        rec.forward_wsr = rate;
        rec.reverse_wsr = weighted_sum_rate(spec, result.sigma_hat);
        rec.kkt_residual = residual(spec, result.sigma, result.sigma_hat);
        rec.elapsed_us = std::chrono::duration<double, std::micro>(Clock::now() - t0).count();
        result.trace->push_back(rec);
      }
      if (std::abs(rate - previous) <= config.tol) {
        result.converged = true;
        break;
      }
    }
  } catch (const NumericalError& e) {
    throw SolverError(iteration, e.what());
  }
  result.wsr = rate;
  if (!result.converged && static_cast<int>(window.size()) == config.oscillation_window) {
    const auto [lo, hi] = std::minmax_element(window.begin(), window.end());
    result.oscillating = *hi - *lo > config.tol;
  }
  return result;
}

}  // namespace duallink
