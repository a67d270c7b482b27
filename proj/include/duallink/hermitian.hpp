// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

namespace duallink {

using Complex = std::complex<double>;

/// Dense complex matrix. Channels are rectangular; covariances and their
/// interference-plus-noise counterparts are square Hermitian.
using Matrix = Eigen::MatrixXcd;

/// (a + a^H) / 2. Throws SpecError when `a` is not square.
Matrix symmetrize(const Matrix& a);

/// Real part of the trace.
double trace_re(const Matrix& a);

/// Smallest eigenvalue of the Hermitian part of `a`.
double min_eigenvalue(const Matrix& a);

/// Hermitian to `tol` relative Frobenius norm and eigenvalues no smaller than
/// -tol * trace.
bool is_hermitian_psd(const Matrix& a, double tol = 1e-10);

/// Cholesky factorization of a Hermitian positive definite matrix.
///
/// Construction fails with NumericalError when a pivot falls below
/// 1e-12 * trace / dim, which rejects singular and indefinite input instead of
/// regularizing it.
class PdFactor {
 public:
  explicit PdFactor(const Matrix& a);

  Matrix solve(const Matrix& b) const { return llt_.solve(b); }
  Matrix inverse() const;
  double logdet() const;
  Eigen::Index dim() const { return llt_.matrixLLT().rows(); }

 private:
  Eigen::LLT<Matrix> llt_;
};

Matrix inv_pd(const Matrix& a);
Matrix inv_sqrt_pd(const Matrix& a);
/// Principal square root of a positive semidefinite matrix; eigenvalues
/// slightly below zero from rounding are clamped.
Matrix sqrt_psd(const Matrix& a);
double logdet_pd(const Matrix& a);

/// Power allocation over parallel subchannels sharing one water level.
struct WaterFilling {
  std::vector<double> power;
  /// The water level nu; entry i receives (nu * weight_i - 1 / gain_i)_+.
  double level = 0.0;
};

/// Solves max sum_i weight_i log(1 + gain_i p_i) s.t. sum_i p_i = budget
/// exactly, by sweeping the sorted breakpoints. Entries of several links can be
/// concatenated with per-entry weights to share one water level. Zero gains
/// never receive power; all-zero gains throw NumericalError.
WaterFilling water_fill(std::span<const double> gains,
                        std::span<const double> weights, double budget);
WaterFilling water_fill(std::span<const double> gains, double weight,
                        double budget);

/// Generalization where power on entry i is charged `costs[i]` per unit:
/// sum_i costs_i p_i = budget.
WaterFilling water_fill(std::span<const double> gains,
                        std::span<const double> weights,
                        std::span<const double> costs, double budget);

}  // namespace duallink
