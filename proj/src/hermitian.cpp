// SPDX-License-Identifier: Apache-2.0
#include "duallink/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "duallink/errors.hpp"

namespace duallink {

namespace {

void require_square(const Matrix& a, const char* op) {
  if (a.rows() != a.cols()) {
    throw SpecError(std::string(op) + ": matrix is " + std::to_string(a.rows()) +
                    "x" + std::to_string(a.cols()) + ", expected square");
  }
}

Eigen::SelfAdjointEigenSolver<Matrix> eigen_pd(const Matrix& a, const char* op) {
  require_square(a, op);
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(a));
  if (es.info() != Eigen::Success) {
    throw NumericalError(std::string(op) + ": eigendecomposition failed");
  }
  const double floor =
      1e-12 * std::max(trace_re(a), 0.0) / static_cast<double>(a.rows());
  if (a.rows() > 0 && !(es.eigenvalues()(0) > floor)) {
    throw NumericalError(std::string(op) + ": matrix is not positive definite (min eigenvalue " +
                         std::to_string(es.eigenvalues()(0)) + ")");
  }
  return es;
}

}  // namespace

Matrix symmetrize(const Matrix& a) {
  require_square(a, "symmetrize");
  return (a + a.adjoint()) * 0.5;
}

double trace_re(const Matrix& a) { return a.trace().real(); }

double min_eigenvalue(const Matrix& a) {
  require_square(a, "min_eigenvalue");
  if (a.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(a), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

bool is_hermitian_psd(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  if (!a.allFinite()) return false;
  const double norm = a.norm();
  if ((a - a.adjoint()).norm() > tol * norm) return false;
  return min_eigenvalue(a) >= -tol * std::abs(trace_re(a));
}

PdFactor::PdFactor(const Matrix& a) {
  require_square(a, "PdFactor");
  llt_.compute(a);
  if (llt_.info() != Eigen::Success) {
    throw NumericalError("cholesky: matrix is not positive definite");
  }
  const auto n = a.rows();
  const double floor = 1e-12 * std::max(trace_re(a), 0.0) / static_cast<double>(n);
  const auto& factor = llt_.matrixLLT();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double pivot = std::norm(factor(i, i));
    if (!(pivot > floor)) {
      throw NumericalError("cholesky: matrix is numerically singular");
    }
  }
}

Matrix PdFactor::inverse() const {
  const auto n = dim();
  return symmetrize(llt_.solve(Matrix::Identity(n, n)));
}

double PdFactor::logdet() const {
  const auto& factor = llt_.matrixLLT();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < factor.rows(); ++i) sum += std::log(factor(i, i).real());
  return 2.0 * sum;
}

Matrix inv_pd(const Matrix& a) { return PdFactor(a).inverse(); }

double logdet_pd(const Matrix& a) { return PdFactor(a).logdet(); }

Matrix inv_sqrt_pd(const Matrix& a) {
  const auto es = eigen_pd(a, "inv_sqrt_pd");
  const Eigen::VectorXd scale = es.eigenvalues().cwiseSqrt().cwiseInverse();
  return symmetrize(es.eigenvectors() * scale.asDiagonal() * es.eigenvectors().adjoint());
}

Matrix sqrt_psd(const Matrix& a) {
  require_square(a, "sqrt_psd");
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(a));
  if (es.info() != Eigen::Success) throw NumericalError("sqrt_psd: eigendecomposition failed");
  const Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return symmetrize(es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint());
}

WaterFilling water_fill(std::span<const double> gains, std::span<const double> weights,
                        std::span<const double> costs, double budget) {
  const std::size_t n = gains.size();
  if (weights.size() != n || costs.size() != n) {
    throw SpecError("water_fill: gains, weights and costs differ in length");
  }
  if (!(budget > 0.0)) throw SpecError("water_fill: budget must be positive");

  // Entry i switches on once the level exceeds 1 / (weight_i * gain_i).
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < n; ++i) {
    if (gains[i] < 0.0 || !(weights[i] > 0.0) || !(costs[i] > 0.0)) {
      throw SpecError("water_fill: gains must be nonnegative, weights and costs positive");
    }
    if (gains[i] > 0.0) active.push_back(i);
  }
  if (active.empty()) throw NumericalError("water_fill: all gains are zero");

  auto threshold = [&](std::size_t i) { return 1.0 / (weights[i] * gains[i]); };
  std::sort(active.begin(), active.end(),
            [&](std::size_t a, std::size_t b) { return threshold(a) < threshold(b); });

  double offset = budget;  // budget + sum c_i / g_i over the active prefix
  double slope = 0.0;      // sum c_i w_i over the active prefix
  double level = 0.0;
  for (std::size_t k = 0; k < active.size(); ++k) {
    const std::size_t i = active[k];
    offset += costs[i] / gains[i];
    slope += costs[i] * weights[i];
    level = offset / slope;
    if (k + 1 == active.size() || level <= threshold(active[k + 1])) break;
  }

  WaterFilling out;
  out.level = level;
  out.power.assign(n, 0.0);
  for (std::size_t i : active) {
    out.power[i] = std::max(level * weights[i] - 1.0 / gains[i], 0.0);
  }
  return out;
}

WaterFilling water_fill(std::span<const double> gains, std::span<const double> weights,
                        double budget) {
  const std::vector<double> unit(gains.size(), 1.0);
  return water_fill(gains, weights, unit, budget);
}

WaterFilling water_fill(std::span<const double> gains, double weight, double budget) {
  const std::vector<double> weights(gains.size(), weight);
  return water_fill(gains, weights, budget);
}

}  // namespace duallink
