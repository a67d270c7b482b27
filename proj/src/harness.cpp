// SPDX-License-Identifier: Apache-2.0
#include "duallink/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <thread>

#include "duallink/errors.hpp"
#include "duallink/rng.hpp"

namespace duallink {

void ExperimentConfig::validate() const {
  if (links < 1 || tx < 1 || rx < 1) throw SpecError("experiment: links and antenna counts must be positive");
  if (realizations < 1) throw SpecError("experiment: realizations must be at least 1");
  if (gain_offdiag_db.empty()) throw SpecError("experiment: no interference gain given");
  if (thresholds.empty()) throw SpecError("experiment: no thresholds given");
  for (double t : thresholds) {
    if (!(t > 0.0 && t < 1.0)) throw SpecError("experiment: thresholds must lie in (0, 1)");
  }
  if (!(total_power > 0.0) || !std::isfinite(total_power)) throw SpecError("experiment: total_power must be positive");
  if (algorithms.empty()) throw SpecError("experiment: no algorithms selected");
  if (max_iters < 1 || !(tol > 0.0)) throw SpecError("experiment: bad tol or max_iters");
  if (oscillation_window < 2) throw SpecError("experiment: oscillation_window must be at least 2");
}

NetworkSpec generate_network(const ExperimentConfig& cfg, std::uint64_t realization,
                             double gain_offdiag_db) {
  cfg.validate();
  const auto n = static_cast<std::size_t>(cfg.links);
  CounterRng channel_rng(cfg.master_seed, realization, kChannelStream);
  CounterRng weight_rng(cfg.master_seed, realization, kWeightStream);
  const double diag = std::sqrt(db_to_linear(cfg.gain_diag_db));
  const double cross = std::sqrt(db_to_linear(gain_offdiag_db));
  std::vector<std::vector<Matrix>> channels(n, std::vector<Matrix>(n));
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t k = 0; k < n; ++k) {
      channels[l][k] = (l == k ? diag : cross) * channel_rng.complex_gaussian(cfg.rx, cfg.tx);
    }
  }
  std::vector<double> weights(n);
  for (auto& w : weights) w = weight_rng.uniform(0.5, 1.0);
  return make_network(std::move(channels), std::move(weights), cfg.total_power);
}

NetworkSpec generate_network(const ExperimentConfig& cfg, std::uint64_t realization) {
  cfg.validate();
  return generate_network(cfg, realization, cfg.gain_offdiag_db.front());
}

CovarianceSet initial_point(const ExperimentConfig& cfg, const NetworkSpec& spec,
                            std::uint64_t realization) {
  CounterRng rng(cfg.master_seed, realization, kInitStream);
  return random_covariances(spec, rng);
}

std::vector<AlgorithmRun> run_convergence(const NetworkSpec& spec,
                                          const std::vector<Algorithm>& algorithms,
                                          const CovarianceSet& start,
                                          const BaselineConfig& config) {
  std::vector<AlgorithmRun> runs;
  for (Algorithm a : algorithms) {
    AlgorithmRun run;
    run.algorithm = a;
    BaselineConfig c = config;
    c.algorithm = a;
    c.record_trace = true;
    try {
      run.result = run_algorithm(spec, start, c);
    } catch (const std::exception& e) {
      run.error = e.what();
    }
    runs.push_back(std::move(run));
  }
  return runs;
}

int iterations_to_threshold(const SolveResult& result, double threshold, double reference) {
  const double target = threshold * reference;
  if (result.initial_wsr >= target) return 0;
  if (!result.trace) throw SpecError("iterations_to_threshold needs a recorded trace");
  for (const auto& rec : *result.trace) {
    if (rec.forward_wsr >= target) return rec.iteration;
  }
  return -1;
}

const BenchCell* BenchReport::find(Algorithm a, double gain_db, double threshold) const {
  for (const auto& c : cells) {
    if (c.algorithm == a && c.gain_offdiag_db == gain_db && c.threshold == threshold) return &c;
  }
  return nullptr;
}

int worker_threads() {
  if (const char* env = std::getenv("DUALLINK_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace {

std::vector<RealizationRecord> run_realization(const ExperimentConfig& cfg, std::uint64_t index,
                                               double gain_db) {
  const NetworkSpec spec = generate_network(cfg, index, gain_db);
  const CovarianceSet start = initial_point(cfg, spec, index);
  BaselineConfig base;
  base.tol = cfg.tol;
  base.max_iters = cfg.max_iters;
  base.oscillation_window = cfg.oscillation_window;
  const auto runs = run_convergence(spec, cfg.algorithms, start, base);

  std::vector<RealizationRecord> out;
  for (const auto& run : runs) {
    RealizationRecord rec;
    rec.realization = index;
    rec.gain_offdiag_db = gain_db;
    rec.algorithm = run.algorithm;
    rec.failed = !run.result.has_value();
    if (run.result) {
      const SolveResult& r = *run.result;
      rec.initial_wsr = r.initial_wsr;
      rec.final_wsr = r.wsr;
      rec.iterations = r.iterations;
      rec.converged = r.converged;
      for (double t : cfg.thresholds) {
        rec.threshold_iterations.push_back(iterations_to_threshold(r, t, r.wsr));
      }
    }
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace

BenchReport run_table(const ExperimentConfig& cfg) {
  cfg.validate();
  BenchReport report;
  report.config = cfg;

  for (double gain : cfg.gain_offdiag_db) {
    const auto total = static_cast<std::size_t>(cfg.realizations);
    std::vector<std::vector<RealizationRecord>> slots(total);
    std::vector<std::exception_ptr> errors(total);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < total; i = next++) {
        try {
          slots[i] = run_realization(cfg, i, gain);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    };
    const int threads = std::min<int>(worker_threads(), static_cast<int>(total));
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }

    for (std::size_t ai = 0; ai < cfg.algorithms.size(); ++ai) {
      const Algorithm a = cfg.algorithms[ai];
      for (std::size_t ti = 0; ti < cfg.thresholds.size(); ++ti) {
        BenchCell cell;
        cell.algorithm = a;
        cell.gain_offdiag_db = gain;
        cell.threshold = cfg.thresholds[ti];
        cell.n_total = cfg.realizations;
        std::vector<double> values;
        for (const auto& slot : slots) {
          const RealizationRecord& rec = slot[ai];
          if (rec.converged) ++cell.n_converged;
          if (rec.failed) continue;
          if (a == Algorithm::pwf && !rec.converged) continue;
          const int n = rec.threshold_iterations[ti];
          if (n >= 0) values.push_back(n);
        }
        cell.n_used = static_cast<int>(values.size());
        if (!values.empty()) {
          double sum = 0.0;
          for (double v : values) sum += v;
          cell.mean_iters = sum / values.size();
          double sq = 0.0;
          for (double v : values) sq += (v - cell.mean_iters) * (v - cell.mean_iters);
          cell.std = values.size() > 1 ? std::sqrt(sq / (values.size() - 1)) : 0.0;
        }
        report.cells.push_back(cell);
      }
    }
    if (cfg.keep_records) {
      for (auto& slot : slots) {
        for (auto& rec : slot) report.records.push_back(std::move(rec));
      }
    }
  }
  return report;
}

}  // namespace duallink
