// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "duallink/baselines.hpp"
#include "duallink/network.hpp"

namespace duallink {

/// Random streams drawn per realization.
inline constexpr std::uint64_t kChannelStream = 0;
inline constexpr std::uint64_t kWeightStream = 1;

/// Monte-Carlo experiment over random networks: every link has its own
/// transmitter and receiver, H_{l,k} = sqrt(g_{l,k}) x unit complex Gaussian,
/// with g_{l,l} from gain_diag_db and g_{l,k} (k != l) from gain_offdiag_db.
struct ExperimentConfig {
  int links = 10;
  int tx = 3;
  int rx = 4;
  double gain_diag_db = 0.0;
  /// Each entry is one interference setting of the table.
  std::vector<double> gain_offdiag_db{-10.0, 0.0, 10.0};
  double total_power = 100.0;
  int realizations = 1000;
  std::vector<double> thresholds{0.9, 0.95};
  std::uint64_t master_seed = 0;
  std::vector<Algorithm> algorithms{Algorithm::dual_link, Algorithm::pwf, Algorithm::wmmse};
  int max_iters = 500;
  /// Stopping tolerance on |R - R'| in nats; the converged rate is the
  /// reference value of a realization.
  double tol = 1e-2;
  int oscillation_window = 20;
  /// Keep the per-realization records in the report.
  bool keep_records = false;

  void validate() const;
};

/// Deterministic in (master_seed, realization, gain_offdiag_db).
NetworkSpec generate_network(const ExperimentConfig& cfg, std::uint64_t realization,
                             double gain_offdiag_db);
/// Same, using cfg.gain_offdiag_db.front().
NetworkSpec generate_network(const ExperimentConfig& cfg, std::uint64_t realization);

/// Common random starting point of every algorithm for one realization.
CovarianceSet initial_point(const ExperimentConfig& cfg, const NetworkSpec& spec,
                            std::uint64_t realization);

struct AlgorithmRun {
  Algorithm algorithm = Algorithm::dual_link;
  std::optional<SolveResult> result;
  /// Solver failure message; empty on success.
  std::string error;
};

/// Runs each algorithm from the same start with traces on. Failures are
/// recorded in the run and do not stop the batch.
std::vector<AlgorithmRun> run_convergence(const NetworkSpec& spec,
                                          const std::vector<Algorithm>& algorithms,
                                          const CovarianceSet& start,
                                          const BaselineConfig& config);

/// First n >= 0 with rate_n >= threshold * reference, where rate_0 is the
/// starting rate and rate_n the forward rate after n iterations; -1 if none.
int iterations_to_threshold(const SolveResult& result, double threshold, double reference);

struct RealizationRecord {
  std::uint64_t realization = 0;
  double gain_offdiag_db = 0.0;
  Algorithm algorithm = Algorithm::dual_link;
  double initial_wsr = 0.0;
  double final_wsr = 0.0;
  int iterations = 0;
  bool converged = false;
  bool failed = false;
  /// One entry per configured threshold.
  std::vector<int> threshold_iterations;
};

struct BenchCell {
  Algorithm algorithm = Algorithm::dual_link;
  double gain_offdiag_db = 0.0;
  double threshold = 0.0;
  double mean_iters = 0.0;
  double std = 0.0;
  /// Realizations that met the stopping tolerance within max_iters.
  int n_converged = 0;
  /// Realizations entering the mean.
  int n_used = 0;
  int n_total = 0;
};

struct BenchReport {
  ExperimentConfig config;
  std::vector<BenchCell> cells;
  std::vector<RealizationRecord> records;

  const BenchCell* find(Algorithm a, double gain_db, double threshold) const;
};

/// Number of worker threads: DUALLINK_THREADS if set and positive, otherwise
/// the hardware concurrency.
int worker_threads();

/// Iterations-to-threshold statistics. The reference value of a realization is
/// the rate the same algorithm reaches after max_iters iterations (or at
/// convergence). PWF means use converged realizations only.
BenchReport run_table(const ExperimentConfig& cfg);

}  // namespace duallink
