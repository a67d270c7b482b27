// SPDX-License-Identifier: Apache-2.0
#include "duallink/dual_link.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "duallink/errors.hpp"

namespace duallink {

namespace {

// The update is PSD by construction. Rounding can leave a vanishing link a few
// ulps below zero, so eigenvalues are judged against the total budget.
void check_iterate(const Matrix& s, double total_power, int iteration) {
  const double floor = 1e-10 * total_power;
  if (Eigen::LLT<Matrix>(s + floor * Matrix::Identity(s.rows(), s.cols())).info() ==
      Eigen::Success) {
    return;
  }
  throw SolverError(iteration, "covariance update left the PSD cone (min eigenvalue " +
                                   std::to_string(min_eigenvalue(s)) + ")");
}

double max_link_mismatch(const CovarianceSet& a, const CovarianceSet& b, double scale) {
  double worst = 0.0;
  for (std::size_t l = 0; l < a.size(); ++l) worst = std::max(worst, (a[l] - b[l]).norm());
  return worst / scale;
}

}  // namespace

void SolverConfig::validate() const {
  if (!(tol > 0.0)) throw SpecError("solver tolerance must be positive");
  if (max_iters < 1) throw SpecError("max_iters must be at least 1");
}

CovarianceSet init_covariances(const NetworkSpec& spec, const SolverConfig& config) {
  spec.validate();
  if (config.init == InitKind::random) {
    CounterRng rng(config.seed, 0, kInitStream);
    return random_covariances(spec, rng);
  }
  CovarianceSet out{Direction::forward, {}};
  const double per_antenna = spec.total_power / static_cast<double>(spec.total_tx_antennas());
  for (std::size_t l = 0; l < spec.links(); ++l) {
    const int n = spec.tx_antennas[l];
    out.sigma.push_back(per_antenna * Matrix::Identity(n, n));
  }
  return out;
}

CovarianceSet random_covariances(const NetworkSpec& spec, CounterRng& rng) {
  CovarianceSet out{Direction::forward, {}};
  double total = 0.0;
  for (std::size_t l = 0; l < spec.links(); ++l) {
    const int n = spec.tx_antennas[l];
    const Matrix a = rng.complex_gaussian(n, n);
    out.sigma.push_back(symmetrize(a * a.adjoint()));
    total += trace_re(out.sigma.back());
  }
  const double scale = spec.total_power / total;
  for (auto& s : out.sigma) s *= scale;
  return out;
}

CovarianceSet dual_transform(const NetworkSpec& spec, const LinkStates& states) {
  const Direction target =
      states.direction() == Direction::forward ? Direction::reverse : Direction::forward;
  CovarianceSet out{target, {}};
  out.sigma.reserve(spec.links());
  double denominator = 0.0;
  for (std::size_t l = 0; l < spec.links(); ++l) {
    out.sigma.push_back(spec.weights[l] * states.rate_gap(l));
    denominator += trace_re(out.sigma.back());
  }
  if (!(denominator > 0.0) || !std::isfinite(denominator)) {
    throw NumericalError(
        "dual transformation is degenerate: no link carries signal power (all direct "
        "channels or covariances are zero)");
  }
  const double scale = spec.total_power / denominator;
  for (auto& s : out.sigma) s *= scale;
  return out;
}

CovarianceSet forward_to_reverse(const NetworkSpec& spec, const CovarianceSet& sigma) {
  if (sigma.direction != Direction::forward) {
    throw SpecError("forward_to_reverse expects forward covariances");
  }
  return dual_transform(spec, LinkStates(spec, sigma));
}

CovarianceSet reverse_to_forward(const NetworkSpec& spec, const CovarianceSet& sigma_hat) {
  if (sigma_hat.direction != Direction::reverse) {
    throw SpecError("reverse_to_forward expects reverse covariances");
  }
  return dual_transform(spec, LinkStates(spec, sigma_hat));
}

double residual(const NetworkSpec& spec, const CovarianceSet& sigma,
                const CovarianceSet& sigma_hat) {
  const CovarianceSet mapped_hat = forward_to_reverse(spec, sigma);
  const CovarianceSet mapped = reverse_to_forward(spec, sigma_hat);
  return std::max(max_link_mismatch(mapped_hat, sigma_hat, spec.total_power),
                  max_link_mismatch(mapped, sigma, spec.total_power));
}

SolveResult solve(const NetworkSpec& spec, const SolverConfig& config) {
  return solve_from(spec, init_covariances(spec, config), config);
}

SolveResult solve_from(const NetworkSpec& spec, const CovarianceSet& start,
                       const SolverConfig& config) {
  spec.validate();
  config.validate();
  if (start.direction != Direction::forward) {
    throw SpecError("solve_from expects forward covariances");
  }
  check_shapes(spec, start);

  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();

  SolveResult result;
  result.sigma = start;
  if (config.record_trace) result.trace.emplace();

  int iteration = 0;
  try {
    LinkStates forward(spec, result.sigma);
    double rate = forward.weighted_sum_rate();
    result.initial_wsr = rate;
    CovarianceSet next_hat = dual_transform(spec, forward);

    for (iteration = 1; iteration <= config.max_iters; ++iteration) {
      const double previous = rate;
      result.sigma_hat = std::move(next_hat);
      for (const auto& s : result.sigma_hat.sigma) check_iterate(s, spec.total_power, iteration);

      const LinkStates reverse(spec, result.sigma_hat);
      result.sigma = dual_transform(spec, reverse);
      for (const auto& s : result.sigma.sigma) check_iterate(s, spec.total_power, iteration);

      forward = LinkStates(spec, result.sigma);
      rate = forward.weighted_sum_rate();
      next_hat = dual_transform(spec, forward);
      result.iterations = iteration;

      if (result.trace) {
        IterationRecord rec;
        rec.iteration = iteration;
        rec.forward_wsr = rate;
        rec.reverse_wsr = reverse.weighted_sum_rate();
        // The reverse-to-forward map holds exactly for this pair, so only the
        // forward-to-reverse mismatch can be nonzero.
        rec.kkt_residual = max_link_mismatch(next_hat, result.sigma_hat, spec.total_power);
        rec.elapsed_us =
            std::chrono::duration<double, std::micro>(Clock::now() - t0).count();
        result.trace->push_back(rec);
      }
      if (std::abs(rate - previous) <= config.tol) {
        result.converged = true;
        break;
      }
    }
    result.wsr = rate;
  } catch (const SolverError&) {
    throw;
  } catch (const NumericalError& e) {
    throw SolverError(iteration, e.what());
  }
  return result;
}

}  // namespace duallink
