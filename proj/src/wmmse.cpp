// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <chrono>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "duallink/baselines.hpp"
#include "duallink/errors.hpp"

namespace duallink {

namespace {

// Transmit-filter subproblem of one link, diagonalized: with
// A = Q diag(lambda) Q^H and C = Q^H B, the filter (A + mu I)^{-1} B has
// squared norm sum_i |C_i|^2 / (lambda_i + mu)^2.
struct FilterProblem {
  Matrix basis;
  Eigen::VectorXd eigenvalues;
  Eigen::VectorXd row_energy;
  Matrix projected;

  double power(double mu) const {
    double p = 0.0;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
      const double denom = eigenvalues(i) + mu;
      if (denom <= 0.0) {
        if (row_energy(i) > 0.0) return INFINITY;
        continue;
      }
      p += row_energy(i) / (denom * denom);
    }
    return p;
  }

  Matrix filter(double mu) const {
    Matrix scaled = projected;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
      const double denom = eigenvalues(i) + mu;
      scaled.row(i) = denom > 0.0 ? Matrix(scaled.row(i) / denom)
                                  : Matrix::Zero(1, scaled.cols());
    }
    return basis * scaled;
  }
};

FilterProblem make_filter_problem(const Matrix& a, const Matrix& b) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(a));
  if (es.info() != Eigen::Success) throw NumericalError("wmmse: eigendecomposition failed");
  FilterProblem fp;
  fp.basis = es.eigenvectors();
  fp.eigenvalues = es.eigenvalues();
  // A is PSD; eigenvalues at rounding level are structural zeros.
  const double floor = 1e-13 * std::max(fp.eigenvalues.cwiseAbs().maxCoeff(), 1e-300);
  for (Eigen::Index i = 0; i < fp.eigenvalues.size(); ++i) {
    if (fp.eigenvalues(i) < floor) fp.eigenvalues(i) = 0.0;
  }
  fp.projected = fp.basis.adjoint() * b;
  fp.row_energy = fp.projected.rowwise().squaredNorm();
  const double energy_floor = 1e-24 * std::max(fp.row_energy.maxCoeff(), 1e-300);
  for (Eigen::Index i = 0; i < fp.eigenvalues.size(); ++i) {
    if (fp.eigenvalues(i) == 0.0 && fp.row_energy(i) <= energy_floor) fp.row_energy(i) = 0.0;
  }
  return fp;
}

double total_power(const std::vector<FilterProblem>& problems, double mu) {
  double p = 0.0;
  for (const auto& fp : problems) p += fp.power(mu);
  return p;
}

// Smallest mu >= 0 with total filter power <= budget.
double power_multiplier(const std::vector<FilterProblem>& problems, double budget) {
  if (total_power(problems, 0.0) <= budget) return 0.0;
  double energy = 0.0;
  for (const auto& fp : problems) energy += fp.row_energy.sum();
  // power(mu) <= energy / mu^2.
  double lo = 0.0;
  double hi = std::sqrt(energy / budget);
  if (!(hi > 0.0) || !std::isfinite(hi) || total_power(problems, hi) > budget) {
    throw NumericalError("wmmse: power multiplier bisection could not bracket the budget");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (total_power(problems, mid) > budget ? lo : hi) = mid;
  }
  return hi;
}

}  // namespace

SolveResult wmmse_solve(const NetworkSpec& spec, const BaselineConfig& config) {
  return wmmse_solve_from(spec, init_covariances(spec, config.solver_config()), config);
}

SolveResult wmmse_solve_from(const NetworkSpec& spec, const CovarianceSet& start,
                             const BaselineConfig& config) {
  spec.validate();
  config.validate();
  check_shapes(spec, start);
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  const std::size_t n = spec.links();

  SolveResult result;
  result.sigma = start;
  if (config.record_trace) result.trace.emplace();

  std::vector<Matrix> filters;
  for (const auto& s : start.sigma) filters.push_back(sqrt_psd(s));

  double rate = weighted_sum_rate(spec, result.sigma);
  result.initial_wsr = rate;

  int iteration = 0;
  try {
    std::vector<Matrix> receivers(n), mse_weights(n);
    for (iteration = 1; iteration <= config.max_iters; ++iteration) {
      const double previous = rate;

      // MMSE receivers U_l = J_l^{-1} H_ll V_l and weights W_l = E_l^{-1}.
      for (std::size_t l = 0; l < n; ++l) {
        const Matrix& h = spec.direct(l);
        const Matrix signal = h * filters[l];
        Matrix received = Matrix::Identity(spec.rx_antennas[l], spec.rx_antennas[l]);
        received.noalias() += signal * signal.adjoint();
        for (std::size_t k = 0; k < n; ++k) {
          if (!spec.interferes(l, k)) continue;
          const Matrix cross = spec.channel(l, k) * filters[k];
          received.noalias() += cross * cross.adjoint();
        }
        receivers[l] = PdFactor(symmetrize(received)).solve(signal);
        const Eigen::Index d = filters[l].cols();
        const Matrix mse = symmetrize(Matrix::Identity(d, d) - receivers[l].adjoint() * signal);
        mse_weights[l] = inv_pd(mse);
      }

      // Transmit filters V_l = (A_l + mu I)^{-1} w_l H_ll^H U_l W_l.
      std::vector<FilterProblem> problems;
      problems.reserve(n);
      for (std::size_t l = 0; l < n; ++l) {
        Matrix a = Matrix::Zero(spec.tx_antennas[l], spec.tx_antennas[l]);
        for (std::size_t k = 0; k < n; ++k) {
          if (k != l && !spec.interferes(k, l)) continue;
          const Matrix back = spec.channel(k, l).adjoint() * receivers[k];
          a.noalias() += spec.weights[k] * (back * mse_weights[k] * back.adjoint());
        }
        const Matrix b =
            spec.weights[l] * (spec.direct(l).adjoint() * receivers[l] * mse_weights[l]);
        problems.push_back(make_filter_problem(a, b));
      }
      const double mu = power_multiplier(problems, spec.total_power);
      for (std::size_t l = 0; l < n; ++l) {
        filters[l] = problems[l].filter(mu);
        result.sigma[l] = symmetrize(filters[l] * filters[l].adjoint());
      }

      rate = weighted_sum_rate(spec, result.sigma);
      result.iterations = iteration;
      if (result.trace) {
        const CovarianceSet hat = forward_to_reverse(spec, result.sigma);
        IterationRecord rec;
        rec.iteration = iteration;
        rec.forward_wsr = rate;
        rec.reverse_wsr = weighted_sum_rate(spec, hat);
        rec.kkt_residual = residual(spec, result.sigma, hat);
        rec.elapsed_us = std::chrono::duration<double, std::micro>(Clock::now() - t0).count();
        result.trace->push_back(rec);
      }
      if (std::abs(rate - previous) <= config.tol) {
        result.converged = true;
        break;
      }
    }
    result.sigma_hat = forward_to_reverse(spec, result.sigma);
  } catch (const NumericalError& e) {
    throw SolverError(iteration, e.what());
  }
  result.wsr = rate;
  return result;
}

}  // namespace duallink
