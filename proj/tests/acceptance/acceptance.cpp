// SPDX-License-Identifier: Apache-2.0
// Acceptance suite. Prints one PASS/FAIL line per criterion; the exit code is
// nonzero when any selected criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "duallink/baselines.hpp"
#include "duallink/dual_link.hpp"
#include "duallink/harness.hpp"
#include "duallink/kkt.hpp"
#include "duallink/whitening.hpp"
#include "../support/fixtures.hpp"

using namespace duallink;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Random networks of the simulation geometry: 10 links, 3 transmit and 4
// receive antennas, P_T = 100, with a random full-power starting point.
struct SuiteCase {
  NetworkSpec spec;
  CovarianceSet start;
  double gain_db = 0.0;
};

std::vector<SuiteCase> suite(int per_gain, std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.master_seed = seed;
  std::vector<SuiteCase> out;
  for (double g : cfg.gain_offdiag_db) {
    for (int r = 0; r < per_gain; ++r) {
      NetworkSpec spec = generate_network(cfg, r, g);
      CovarianceSet start = initial_point(cfg, spec, r);
      out.push_back({std::move(spec), std::move(start), g});
    }
  }
  return out;
}

SolverConfig tight(double tol, int max_iters) {
  SolverConfig c;
  c.tol = tol;
  c.max_iters = max_iters;
  c.record_trace = true;
  return c;
}

// 1 and 2 share the same runs.
struct DualitySuite {
  std::vector<SuiteCase> cases;
  std::vector<SolveResult> runs;
};

const DualitySuite& duality_suite() {
  static const DualitySuite s = [] {
    DualitySuite d;
    d.cases = suite(100, 0);
    for (const auto& c : d.cases) d.runs.push_back(solve_from(c.spec, c.start, tight(1e-8, 100000)));
    return d;
  }();
  return s;
}

Outcome monotonicity() {
  const auto& s = duality_suite();
  int violations = 0;
  double worst = 0.0;
  for (const auto& r : s.runs) {
    double prev = r.initial_wsr;
    for (const auto& rec : *r.trace) {
      const double drop = prev - rec.forward_wsr;
      worst = std::max(worst, drop / std::abs(prev));
      if (rec.forward_wsr < prev - 1e-9 * std::abs(prev)) ++violations;
      prev = rec.forward_wsr;
    }
  }
  return {violations == 0, fmt("%zu networks, %d violations, worst relative drop %.2e",
                               s.runs.size(), violations, worst)};
}

Outcome duality() {
  const auto& s = duality_suite();
  int unconverged = 0, mismatched = 0, chain = 0;
  double worst_gap = 0.0;
  int max_iters = 0;
  for (const auto& r : s.runs) {
    max_iters = std::max(max_iters, r.iterations);
    if (!r.converged) ++unconverged;
    double prev = r.initial_wsr;
    for (const auto& rec : *r.trace) {
      const double slack = 1e-9 * std::abs(prev);
      if (rec.reverse_wsr < prev - slack || rec.forward_wsr < rec.reverse_wsr - slack) ++chain;
      prev = rec.forward_wsr;
    }
    const auto& last = r.trace->back();
    const double gap = std::abs(last.forward_wsr - last.reverse_wsr) / std::abs(last.forward_wsr);
    worst_gap = std::max(worst_gap, gap);
    if (gap > 1e-6) ++mismatched;
  }
  return {unconverged == 0 && mismatched == 0 && chain == 0,
          fmt("%d unconverged (max %d iterations), %d forward/reverse mismatches "
              "(worst %.2e), %d chain violations",
              unconverged, max_iters, mismatched, worst_gap, chain)};
}

Outcome stationarity() {
  const auto cases = suite(10, 1);
  double worst = 0.0;
  int bad = 0, unconverged = 0;
  for (const auto& c : cases) {
    const SolveResult r = solve_from(c.spec, c.start, tight(1e-13, 200000));
    if (!r.converged) ++unconverged;
    const double res = saddle_point_check(c.spec, r).max_residual();
    worst = std::max(worst, res);
    if (!(res < 1e-6)) ++bad;
  }
  return {bad == 0, fmt("%zu networks, %d above 1e-6 (worst %.2e), %d hit the iteration cap",
                        cases.size(), bad, worst, unconverged)};
}

Outcome scaling() {
  std::mt19937_64 gen(40);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const NetworkSpec s = fixture::random_network(gen, 4, 3, 4, 20.0);
    const CovarianceSet sigma = fixture::random_sigma(gen, s);
    for (double a : {0.1, 0.5, 2.0, 10.0})
      worst = std::max(worst, check_scaling_invariance(s, sigma, a).relative_deviation);
  }
  return {worst < 1e-8, fmt("50 networks x 4 factors, worst relative deviation %.2e", worst)};
}

// Generic multipliers so that neither gradient vanishes.
MultiplierState random_multipliers(std::mt19937_64& gen, const NetworkSpec& s) {
  MultiplierState m;
  for (std::size_t l = 0; l < s.links(); ++l) {
    const Matrix a = oracle::random_complex(gen, s.rx_antennas[l], s.rx_antennas[l]);
    m.lambda.push_back((a + a.adjoint()) / 2.0);
  }
  m.mu = std::uniform_real_distribution<double>(0.1, 1.0)(gen);
  return m;
}

Outcome gradients() {
  std::mt19937_64 gen(50);
  double worst_sigma = 0.0, worst_omega = 0.0;
  for (int t = 0; t < 20; ++t) {
    const NetworkSpec s = fixture::random_network(gen, 3, 3, 4, 10.0);
    const CovarianceSet sigma = fixture::random_sigma(gen, s);
    std::vector<Matrix> omega;
    for (std::size_t l = 0; l < s.links(); ++l) omega.push_back(oracle::random_pd(gen, 4, 1.0));
    const GradientCheck g = gradient_check(s, sigma, omega, random_multipliers(gen, s), 20, t);
    worst_sigma = std::max(worst_sigma, g.max_relative_error_sigma);
    worst_omega = std::max(worst_omega, g.max_relative_error_omega);
  }
  return {worst_sigma < 1e-4 && worst_omega < 1e-4,
          fmt("20 networks x 20 directions, worst relative error %.2e (Sigma), %.2e (Omega)",
              worst_sigma, worst_omega)};
}

Outcome single_user() {
  std::mt19937_64 gen(60);
  double worst_dl = 0.0, worst_pwf = 0.0;
  for (int t = 0; t < 20; ++t) {
    const NetworkSpec s = fixture::random_network(gen, 1, 4, 4, 10.0);
    const double ref = s.weights[0] * oracle::single_user_capacity(s.direct(0), 10.0);
    const SolveResult dl = solve(s, tight(1e-13, 100000));
    BaselineConfig bc;
    bc.max_iters = 1;
    const SolveResult pwf = pwf_solve(s, bc);
    worst_dl = std::max(worst_dl, std::abs(dl.wsr - ref) / ref);
    worst_pwf = std::max(worst_pwf, std::abs(pwf.wsr - ref) / ref);
  }
  return {worst_dl < 1e-6 && worst_pwf < 1e-6,
          fmt("20 networks 4x4, worst relative error %.2e (dual link), %.2e (PWF, one pass)",
              worst_dl, worst_pwf)};
}

Outcome mac() {
  std::mt19937_64 gen(70);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const NetworkSpec s = fixture::mac_network(gen, 10, 5, 5, 100.0);
    const double oracle_value = mac_capacity_oracle(s).value;
    const SolveResult dl = solve(s, tight(1e-10, 100000));
    worst = std::max(worst, std::abs(dl.wsr - oracle_value) / oracle_value);
  }
  return {worst < 1e-3, fmt("20 networks, 10 users x 5 antennas, worst relative gap %.2e", worst)};
}

const BenchReport& table() {
  static const BenchReport report = run_table(ExperimentConfig{});
  return report;
}

Outcome table_reproduction() {
  const BenchReport& rep = table();
  const double gains[] = {-10.0, 0.0, 10.0};
  const double thresholds[] = {0.9, 0.95};
  const double reference[2][3] = {{1.653, 7.211, 4.745}, {2.781, 12.408, 6.837}};
  bool pass = true;
  std::string detail;
  for (int t = 0; t < 2; ++t) {
    for (int g = 0; g < 3; ++g) {
      const double dl = rep.find(Algorithm::dual_link, gains[g], thresholds[t])->mean_iters;
      const double pwf = rep.find(Algorithm::pwf, gains[g], thresholds[t])->mean_iters;
      const double wm = rep.find(Algorithm::wmmse, gains[g], thresholds[t])->mean_iters;
      const double dev = dl / reference[t][g] - 1.0;
      const bool within = std::abs(dev) <= 0.15;
      const bool below_wmmse = dl < wm;
      const bool pwf_order = gains[g] < 5.0 ? pwf < dl : pwf > dl;
      pass = pass && within && below_wmmse && pwf_order;
      detail += fmt("\n    %3.0f dB %2.0f%%: dual link %.3f (%+.1f%%%s), PWF %.3f%s, WMMSE %.3f%s",
                    gains[g], 100 * thresholds[t], dl, 100 * dev, within ? "" : " OUT",
                    pwf, pwf_order ? "" : " ORDER", wm, below_wmmse ? "" : " ORDER");
    }
  }
  return {pass, "1000 realizations per cell" + detail};
}

Outcome pwf_convergence() {
  const BenchCell* c = table().find(Algorithm::pwf, 10.0, 0.9);
  const double rate = static_cast<double>(c->n_converged) / c->n_total;
  return {rate >= 0.75 && rate <= 0.92,
          fmt("PWF converged on %d/%d at 10 dB (%.1f%%)", c->n_converged, c->n_total, 100 * rate)};
}

Outcome whitening() {
  std::mt19937_64 gen(100);
  double worst_rate = 0.0, worst_power = 0.0;
  for (int t = 0; t < 50; ++t) {
    const NetworkSpec s = fixture::random_network(gen, 4, 3, 4, 10.0);
    NoiseModel noise;
    PowerWeights pw;
    for (std::size_t l = 0; l < s.links(); ++l) {
      noise.W.push_back(oracle::random_pd(gen, 4, 0.2));
      pw.What.push_back(oracle::random_pd(gen, 3, 0.2));
    }
    const NetworkSpec e = to_equivalent(s, noise, pw);
    const SolveResult r = solve(e, tight(1e-8, 2000));
    const CovarianceSet sigma = recover_solution(r.sigma, pw);
    const double direct = oracle::wsr(s, sigma.sigma, &noise.W);
    worst_rate = std::max(worst_rate, std::abs(direct - r.wsr) / r.wsr);
    worst_power = std::max(worst_power, std::abs(weighted_power(sigma, pw) - 10.0) / 10.0);
  }
  return {worst_rate < 1e-9 && worst_power < 1e-9,
          fmt("50 colored networks, worst relative rate gap %.2e, power gap %.2e", worst_rate,
              worst_power)};
}

Outcome complexity() {
  const int sizes[] = {4, 8, 16, 32};
  std::vector<double> xs, ys;
  std::string detail;
  for (int links : sizes) {
    ExperimentConfig cfg;
    cfg.links = links;
    cfg.tx = 4;
    cfg.rx = 4;
    const NetworkSpec s = generate_network(cfg, 0, 0.0);
    const CovarianceSet start = initial_point(cfg, s, 0);
    SolverConfig c;
    c.tol = 1e-300;
    c.max_iters = std::max(5, 2000 / links);
    double best = 1e300;
    for (int rep = 0; rep < 5; ++rep) {
      const auto t0 = std::chrono::steady_clock::now();
      const SolveResult r = solve_from(s, start, c);
      const double us =
          std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - t0).count();
      best = std::min(best, us / r.iterations);
    }
    xs.push_back(std::log(links));
    ys.push_back(std::log(best));
    detail += fmt(" L=%d: %.1f us;", links, best);
  }
  const double mx = (xs[0] + xs[1] + xs[2] + xs[3]) / 4, my = (ys[0] + ys[1] + ys[2] + ys[3]) / 4;
  double sxy = 0.0, sxx = 0.0;
  for (int i = 0; i < 4; ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  const double slope = sxy / sxx;
  return {slope >= 1.7 && slope <= 2.3, fmt("exponent %.2f;", slope) + detail};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"duallink acceptance suite"};
  std::vector<int> only;
  app.add_option("--only", only, "Run only these criteria (1-11)")->check(CLI::Range(1, 11));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {1, "monotone forward rate", monotonicity},
      {2, "forward/reverse duality", duality},
      {3, "stationarity", stationarity},
      {4, "scaling invariance", scaling},
      {5, "gradient correctness", gradients},
      {6, "single-user oracle", single_user},
      {7, "MAC sum capacity", mac},
      {8, "iteration table", table_reproduction},
      {9, "PWF convergence rate", pwf_convergence},
      {10, "whitening equivalence", whitening},
      {11, "complexity scaling", complexity},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %d (%s): %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
