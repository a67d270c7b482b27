// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "duallink/baselines.hpp"
#include "duallink/errors.hpp"

namespace duallink {

namespace {

bool same_matrix(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  const double scale = std::max({a.norm(), b.norm(), 1e-300});
  return (a - b).norm() <= 1e-12 * scale;
}

// Strict total order: a tournament whose out-degrees are a permutation of 0..L-1.
bool is_decoding_order(const std::vector<std::vector<bool>>& mask) {
  const std::size_t n = mask.size();
  std::vector<std::size_t> degree;
  for (std::size_t l = 0; l < n; ++l) {
    if (mask[l][l]) return false;
    std::size_t d = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == l) continue;
      if (mask[l][k] == mask[k][l]) return false;
      d += mask[l][k] ? 1 : 0;
    }
    degree.push_back(d);
  }
  std::sort(degree.begin(), degree.end());
  for (std::size_t i = 0; i < n; ++i) {
    if (degree[i] != i) return false;
  }
  return true;
}

struct MacObjective {
  std::vector<Matrix> channels;
  double weight;

  Matrix received(const std::vector<Matrix>& sigma) const {
    const Eigen::Index r = channels[0].rows();
    Matrix m = Matrix::Identity(r, r);
    for (std::size_t k = 0; k < channels.size(); ++k) {
      m.noalias() += channels[k] * sigma[k] * channels[k].adjoint();
    }
    return symmetrize(m);
  }

  double value(const std::vector<Matrix>& sigma) const {
    return weight * logdet_pd(received(sigma));
  }

  std::vector<Matrix> gradient(const std::vector<Matrix>& sigma) const {
    const Matrix inv = inv_pd(received(sigma));
    std::vector<Matrix> g;
    for (const auto& h : channels) g.push_back(symmetrize(weight * (h.adjoint() * inv * h)));
    return g;
  }
};

// Euclidean projection of a vector onto {x >= 0, sum x <= budget}.
std::vector<double> project_simplex(const std::vector<double>& v, double budget) {
  std::vector<double> x(v.size());
  double positive = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    x[i] = std::max(v[i], 0.0);
    positive += x[i];
  }
  if (positive <= budget) return x;
  std::vector<double> sorted(v);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double shift = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    cumulative += sorted[i];
    const double t = (cumulative - budget) / static_cast<double>(i + 1);
    if (sorted[i] - t > 0.0) shift = t;
  }
  for (std::size_t i = 0; i < v.size(); ++i) x[i] = std::max(v[i] - shift, 0.0);
  return x;
}

// Projection onto {Sigma_k >= 0, sum tr Sigma_k <= budget} in the Frobenius norm.
std::vector<Matrix> project(const std::vector<Matrix>& point, double budget) {
  std::vector<Eigen::SelfAdjointEigenSolver<Matrix>> solvers;
  std::vector<double> eigenvalues;
  for (const auto& p : point) {
    solvers.emplace_back(symmetrize(p));
    if (solvers.back().info() != Eigen::Success) {
      throw NumericalError("mac oracle: eigendecomposition failed");
    }
    const auto& ev = solvers.back().eigenvalues();
    eigenvalues.insert(eigenvalues.end(), ev.data(), ev.data() + ev.size());
  }
  const std::vector<double> projected = project_simplex(eigenvalues, budget);
  std::vector<Matrix> out;
  std::size_t offset = 0;
  for (const auto& es : solvers) {
    const Eigen::Index d = es.eigenvalues().size();
    Eigen::VectorXd lambda(d);
    for (Eigen::Index i = 0; i < d; ++i) lambda(i) = projected[offset + i];
    offset += d;
    out.push_back(symmetrize(es.eigenvectors() * lambda.asDiagonal() *
                             es.eigenvectors().adjoint()));
  }
  return out;
}

std::vector<Matrix> step(const std::vector<Matrix>& x, const std::vector<Matrix>& g, double t) {
  std::vector<Matrix> y(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) y[k] = x[k] + t * g[k];
  return y;
}

double inner(const std::vector<Matrix>& a, const std::vector<Matrix>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k].cwiseProduct(b[k].conjugate()).sum().real();
  return s;
}

}  // namespace

bool is_mac(const NetworkSpec& spec) {
  spec.validate();
  const std::size_t n = spec.links();
  for (std::size_t l = 1; l < n; ++l) {
    if (spec.rx_antennas[l] != spec.rx_antennas[0]) return false;
    if (spec.weights[l] != spec.weights[0]) return false;
    for (std::size_t k = 0; k < n; ++k) {
      if (!same_matrix(spec.channel(l, k), spec.channel(0, k))) return false;
    }
  }
  return n == 1 || is_decoding_order(spec.cancel_mask);
}

MacOracleResult mac_capacity_oracle(const NetworkSpec& spec, double tol, int max_iters) {
  if (!is_mac(spec)) throw SpecError("mac_capacity_oracle: spec is not a MAC with successive decoding");
  if (!(tol > 0.0) || max_iters < 1) throw SpecError("mac_capacity_oracle: bad tolerance or iteration cap");
  const std::size_t n = spec.links();
  MacObjective f;
  f.weight = spec.weights[0];
  for (std::size_t k = 0; k < n; ++k) f.channels.push_back(spec.channel(0, k));

  SolverConfig init;
  std::vector<Matrix> x = init_covariances(spec, init).sigma;
  double fx = f.value(x);
  double t = 1.0;

  MacOracleResult out;
  for (int it = 1; it <= max_iters; ++it) {
    const std::vector<Matrix> g = f.gradient(x);
    // Armijo backtracking along the projection arc, then let the step grow again.
    std::vector<Matrix> y;
    double fy = 0.0;
    double moved = 0.0;
    for (int back = 0; back < 60; ++back) {
      y = project(step(x, g, t), spec.total_power);
      std::vector<Matrix> d(n);
      for (std::size_t k = 0; k < n; ++k) d[k] = y[k] - x[k];
      moved = inner(g, d);
      fy = f.value(y);
      const double dd = inner(d, d);
      if (fy >= fx + 1e-4 * moved && fy >= fx - 1e-15 * std::abs(fx)) break;
      if (dd == 0.0) break;
      t *= 0.5;
    }
    x = std::move(y);
    fx = fy;
    out.iterations = it;

    const std::vector<Matrix> gx = f.gradient(x);
    const std::vector<Matrix> px = project(step(x, gx, 1.0), spec.total_power);
    double gap = 0.0;
    for (std::size_t k = 0; k < n; ++k) gap += (px[k] - x[k]).squaredNorm();
    out.stationarity = std::sqrt(gap);
    if (out.stationarity <= tol) break;
    t = std::min(t * 2.0, 1e6);
  }
  out.value = fx;
  out.sigma = CovarianceSet{Direction::forward, x};
  return out;
}

}  // namespace duallink
