// SPDX-License-Identifier: Apache-2.0
#include "duallink/kkt.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "duallink/errors.hpp"
#include "duallink/rng.hpp"

namespace duallink {

namespace {

void check_arguments(const NetworkSpec& spec, const CovarianceSet& sigma,
                     std::span<const Matrix> omega, const MultiplierState& m) {
  if (sigma.direction != Direction::forward) {
    throw SpecError("lagrangian is defined on forward covariances");
  }
  check_shapes(spec, sigma);
  if (omega.size() != spec.links() || m.lambda.size() != spec.links()) {
    throw SpecError("omega and lambda need one matrix per link");
  }
  for (std::size_t l = 0; l < spec.links(); ++l) {
    const int n = spec.rx_antennas[l];
    if (omega[l].rows() != n || omega[l].cols() != n || m.lambda[l].rows() != n ||
        m.lambda[l].cols() != n) {
      throw SpecError("omega/lambda of link " + std::to_string(l) + " must be " +
                      std::to_string(n) + "x" + std::to_string(n));
    }
  }
}

// Omega_l - I - sum_{k != l} H_{l,k} Sigma_k H_{l,k}^H.
Matrix constraint_gap(const NetworkSpec& spec, const CovarianceSet& sigma, const Matrix& omega,
                      std::size_t l) {
  Matrix gap = omega - Matrix::Identity(omega.rows(), omega.cols());
  for (std::size_t k = 0; k < spec.links(); ++k) {
    if (!spec.interferes(l, k)) continue;
    const Matrix& h = spec.channel(l, k);
    gap.noalias() -= h * sigma[k] * h.adjoint();
  }
  return gap;
}

double max_eigenvalue(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(a), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(es.eigenvalues().size() - 1);
}

Matrix random_hermitian(CounterRng& rng, Eigen::Index n) {
  return symmetrize(rng.complex_gaussian(n, n));
}

double inner(std::span<const Matrix> a, std::span<const Matrix> b) {
  double sum = 0.0;
  for (std::size_t l = 0; l < a.size(); ++l) sum += (a[l].adjoint() * b[l]).trace().real();
  return sum;
}

double relative_error(double exact, double approx) {
  const double scale = std::max({std::abs(exact), std::abs(approx), 1e-300});
  return std::abs(exact - approx) / scale;
}

}  // namespace

double lagrangian(const NetworkSpec& spec, const CovarianceSet& sigma,
                  std::span<const Matrix> omega, const MultiplierState& m) {
  check_arguments(spec, sigma, omega, m);
  double value = m.mu * (spec.total_power - sigma.total_trace());
  for (std::size_t l = 0; l < spec.links(); ++l) {
    const Matrix& h = spec.direct(l);
    const Matrix total = symmetrize(omega[l] + h * sigma[l] * h.adjoint());
    value += spec.weights[l] * (logdet_pd(total) - logdet_pd(omega[l]));
    value += (m.lambda[l] * constraint_gap(spec, sigma, omega[l], l)).trace().real();
  }
  return value;
}

std::vector<Matrix> grad_sigma(const NetworkSpec& spec, const CovarianceSet& sigma,
                               std::span<const Matrix> omega, const MultiplierState& m) {
  check_arguments(spec, sigma, omega, m);
  std::vector<Matrix> out;
  out.reserve(spec.links());
  for (std::size_t l = 0; l < spec.links(); ++l) {
    const Matrix& h = spec.direct(l);
    const PdFactor total(symmetrize(omega[l] + h * sigma[l] * h.adjoint()));
    Matrix g = spec.weights[l] * (h.adjoint() * total.solve(h));
    g.diagonal().array() -= m.mu;
    // Sigma_l enters the Omega constraint of every receiver it interferes with.
    for (std::size_t k = 0; k < spec.links(); ++k) {
      if (!spec.interferes(k, l)) continue;
      const Matrix& cross = spec.channel(k, l);
      g.noalias() -= cross.adjoint() * m.lambda[k] * cross;
    }
    out.push_back(symmetrize(g));
  }
  return out;
}

std::vector<Matrix> grad_omega(const NetworkSpec& spec, const CovarianceSet& sigma,
                               std::span<const Matrix> omega, const MultiplierState& m) {
  check_arguments(spec, sigma, omega, m);
  std::vector<Matrix> out;
  out.reserve(spec.links());
  for (std::size_t l = 0; l < spec.links(); ++l) {
    const Matrix& h = spec.direct(l);
    const Matrix total = symmetrize(omega[l] + h * sigma[l] * h.adjoint());
    out.push_back(symmetrize(spec.weights[l] * (inv_pd(total) - inv_pd(omega[l])) +
                             m.lambda[l]));
  }
  return out;
}

MultiplierState extract_multipliers(const NetworkSpec& spec, const CovarianceSet& sigma) {
  if (sigma.direction != Direction::forward) {
    throw SpecError("extract_multipliers expects forward covariances");
  }
  const LinkStates states(spec, sigma);
  MultiplierState m;
  double total = 0.0;
  for (std::size_t l = 0; l < spec.links(); ++l) {
    m.lambda.push_back(spec.weights[l] * states.rate_gap(l));
    total += trace_re(m.lambda.back());
  }
  m.mu = total / spec.total_power;
  m.degenerate = !(total > 0.0);
  if (m.degenerate) m.mu = 0.0;
  return m;
}

ScalingCheck check_scaling_invariance(const NetworkSpec& spec, const CovarianceSet& sigma,
                                      double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw SpecError("scaling factor must be positive");
  }
  const std::vector<Matrix> omega = interference_covariances(spec, sigma);
  const MultiplierState m = extract_multipliers(spec, sigma);

  CovarianceSet scaled_sigma = sigma;
  for (auto& s : scaled_sigma.sigma) s /= alpha;
  std::vector<Matrix> scaled_omega = omega;
  for (auto& o : scaled_omega) o /= alpha;
  MultiplierState scaled_m = m;
  for (auto& lam : scaled_m.lambda) lam *= alpha;
  scaled_m.mu *= alpha;

  ScalingCheck out;
  out.alpha = alpha;
  out.lagrangian = lagrangian(spec, sigma, omega, m);
  const double scaled = lagrangian(spec, scaled_sigma, scaled_omega, scaled_m);
  out.deviation = std::abs(scaled - out.lagrangian);
  out.relative_deviation = out.deviation / std::max(std::abs(out.lagrangian), 1e-300);
  double sq = 0.0;
  for (const auto& g : grad_omega(spec, scaled_sigma, scaled_omega, scaled_m)) {
    sq += g.squaredNorm();
  }
  out.omega_gradient_norm = std::sqrt(sq);
  return out;
}

double SaddlePointReport::max_residual() const {
  return std::max({forward_transform, reverse_gradient, reverse_transform, forward_gradient});
}

SaddlePointReport saddle_point_check(const NetworkSpec& spec, const CovarianceSet& sigma,
                                     const CovarianceSet& sigma_hat) {
  if (sigma.direction != Direction::forward || sigma_hat.direction != Direction::reverse) {
    throw SpecError("saddle_point_check expects forward and reverse covariances");
  }
  const LinkStates fwd(spec, sigma);
  const LinkStates rev(spec, sigma_hat);

  std::vector<Matrix> fwd_gap, rev_gap;
  double fwd_sum = 0.0, rev_sum = 0.0;
  for (std::size_t l = 0; l < spec.links(); ++l) {
    fwd_gap.push_back(spec.weights[l] * fwd.rate_gap(l));
    rev_gap.push_back(spec.weights[l] * rev.rate_gap(l));
    fwd_sum += trace_re(fwd_gap.back());
    rev_sum += trace_re(rev_gap.back());
  }
  if (!(fwd_sum > 0.0) || !(rev_sum > 0.0)) {
    throw NumericalError("saddle_point_check: no link carries signal power");
  }

  SaddlePointReport r;
  r.mu = fwd_sum / spec.total_power;
  r.mu_hat = rev_sum / spec.total_power;
  const double p = spec.total_power;

  for (std::size_t l = 0; l < spec.links(); ++l) {
    const Matrix& h = spec.direct(l);
    const double scale = spec.weights[l] / r.mu;

    r.forward_transform =
        std::max(r.forward_transform, (sigma_hat[l] - fwd_gap[l] / r.mu).norm() / p);
    r.reverse_transform =
        std::max(r.reverse_transform, (sigma[l] - rev_gap[l] / r.mu).norm() / p);

    const Matrix& omega_hat = rev.omega(l);
    const Matrix rhs_hat = scale * (h.adjoint() * fwd.total_inverse(l) * h);
    const Matrix diff_hat = omega_hat - rhs_hat;
    const double norm_hat = omega_hat.norm();
    r.reverse_gradient = std::max(r.reverse_gradient, (diff_hat * sigma[l]).norm() / (norm_hat * p));
    r.reverse_gradient_unrestricted =
        std::max(r.reverse_gradient_unrestricted, diff_hat.norm() / norm_hat);

    const Matrix& omega = fwd.omega(l);
    const Matrix rhs = scale * (h * rev.total_inverse(l) * h.adjoint());
    const Matrix diff = omega - rhs;
    const double norm = omega.norm();
    r.forward_gradient = std::max(r.forward_gradient, (diff * sigma_hat[l]).norm() / (norm * p));
    r.forward_gradient_unrestricted =
        std::max(r.forward_gradient_unrestricted, diff.norm() / norm);

    r.cone_multiplier_violation =
        std::max({r.cone_multiplier_violation, max_eigenvalue(-diff_hat) / norm_hat,
                  max_eigenvalue(-diff) / norm});
  }
  return r;
}

SaddlePointReport saddle_point_check(const NetworkSpec& spec, const SolveResult& result) {
  return saddle_point_check(spec, result.sigma, result.sigma_hat);
}

GradientCheck gradient_check(const NetworkSpec& spec, const CovarianceSet& sigma,
                             std::span<const Matrix> omega, const MultiplierState& m,
                             int directions, std::uint64_t seed, double step) {
  const std::vector<Matrix> gs = grad_sigma(spec, sigma, omega, m);
  const std::vector<Matrix> go = grad_omega(spec, sigma, omega, m);
  CounterRng rng(seed, 0, 7);
  GradientCheck out;
  out.directions = directions;
  const std::vector<Matrix> base_omega(omega.begin(), omega.end());

  for (int d = 0; d < directions; ++d) {
    std::vector<Matrix> ds, dw;
    double ns = 0.0, nw = 0.0;
    for (std::size_t l = 0; l < spec.links(); ++l) {
      ds.push_back(random_hermitian(rng, spec.tx_antennas[l]));
      dw.push_back(random_hermitian(rng, spec.rx_antennas[l]));
      ns += ds.back().squaredNorm();
      nw += dw.back().squaredNorm();
    }
    for (auto& x : ds) x /= std::sqrt(ns);
    for (auto& x : dw) x /= std::sqrt(nw);

    CovarianceSet plus = sigma, minus = sigma;
    for (std::size_t l = 0; l < spec.links(); ++l) {
      plus[l] += step * ds[l];
      minus[l] -= step * ds[l];
    }
    const double fd_sigma = (lagrangian(spec, plus, omega, m) -
                             lagrangian(spec, minus, omega, m)) / (2.0 * step);
    out.max_relative_error_sigma =
        std::max(out.max_relative_error_sigma, relative_error(inner(gs, ds), fd_sigma));

    std::vector<Matrix> omega_plus = base_omega, omega_minus = base_omega;
    for (std::size_t l = 0; l < spec.links(); ++l) {
      omega_plus[l] += step * dw[l];
      omega_minus[l] -= step * dw[l];
    }
    const double fd_omega = (lagrangian(spec, sigma, omega_plus, m) -
                             lagrangian(spec, sigma, omega_minus, m)) / (2.0 * step);
    out.max_relative_error_omega =
        std::max(out.max_relative_error_omega, relative_error(inner(go, dw), fd_omega));
  }
  return out;
}

}  // namespace duallink
