// SPDX-License-Identifier: Apache-2.0
#include "duallink/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "duallink/baselines.hpp"
#include "duallink/errors.hpp"
#include "duallink/harness.hpp"
#include "duallink/json_io.hpp"
#include "duallink/kkt.hpp"
#include "duallink/whitening.hpp"

namespace duallink {

namespace {

struct SolveOptions {
  std::string network;
  std::string algorithm = "dual_link";
  std::string init = "identity";
  std::uint64_t seed = 0;
  double tol = 1e-8;
  int max_iters = 500;
  std::string output;
  std::string trace;
  bool bits = false;
};

struct BenchOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> realizations;
  std::optional<double> tol;
  std::optional<int> max_iters;
  std::vector<std::string> algorithms;
  std::vector<double> gains;
  std::string output;
  std::string csv;
  bool records = false;
};

struct DiagOptions {
  std::string network;
  std::string algorithm = "dual_link";
  std::uint64_t seed = 0;
  double tol = 1e-10;
  int max_iters = 5000;
  int directions = 20;
  std::string output;
};

struct GenOptions {
  std::string config;
  std::uint64_t seed = 0;
  std::uint64_t realization = 0;
  std::optional<double> gain;
  std::string output;
};

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw SpecError("cannot write " + path);
  out << text;
}

ExperimentConfig load_experiment(const std::string& path) {
  if (path.empty()) return ExperimentConfig{};
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw SpecError(path + ": " + e.what());
  }
  return experiment_config_from_json(j);
}

BaselineConfig baseline_config(const std::string& algorithm, const std::string& init,
                               std::uint64_t seed, double tol, int max_iters) {
  BaselineConfig c;
  c.algorithm = parse_algorithm(algorithm);
  if (init == "identity") {
    c.init = InitKind::scaled_identity;
  } else if (init == "random") {
    c.init = InitKind::random;
  } else {
    throw SpecError("--init must be identity or random");
  }
  c.seed = seed;
  c.tol = tol;
  c.max_iters = max_iters;
  return c;
}

int run_solve(const SolveOptions& o) {
  const NetworkFile file = read_network_file(o.network);
  const bool colored = file.noise || file.power_weights;
  const NoiseModel noise = file.noise.value_or(white_noise(file.spec));
  const PowerWeights pw = file.power_weights.value_or(unit_power_weights(file.spec));
  const NetworkSpec spec = colored ? to_equivalent(file.spec, noise, pw) : file.spec;

  BaselineConfig config = baseline_config(o.algorithm, o.init, o.seed, o.tol, o.max_iters);
  config.record_trace = !o.trace.empty();
  SolveResult result = run_algorithm(spec, init_covariances(spec, config.solver_config()), config);
  if (colored) result.sigma = recover_solution(result.sigma, pw);

  const double scale = o.bits ? 1.0 / std::log(2.0) : 1.0;
  Json j = solve_result_to_json(result, config.algorithm, scale);
  j["rate_unit"] = o.bits ? "bits" : "nats";
  if (colored) j["sigma_hat_network"] = "whitened equivalent";
  emit(o.output, j.dump(2) + "\n");
  if (result.trace) {
    std::ofstream out(o.trace);
    if (!out) throw SpecError("cannot write " + o.trace);
    write_trace_csv(out, *result.trace, scale);
  }
  return 0;
}

int run_bench(const BenchOptions& o) {
  ExperimentConfig cfg = load_experiment(o.config);
  if (o.seed) cfg.master_seed = *o.seed;
  if (o.realizations) cfg.realizations = *o.realizations;
  if (o.tol) cfg.tol = *o.tol;
  if (o.max_iters) cfg.max_iters = *o.max_iters;
  if (!o.algorithms.empty()) {
    cfg.algorithms.clear();
    for (const auto& a : o.algorithms) cfg.algorithms.push_back(parse_algorithm(a));
  }
  if (!o.gains.empty()) cfg.gain_offdiag_db = o.gains;
  cfg.keep_records = o.records;
  cfg.validate();

  const BenchReport report = run_table(cfg);
  emit(o.output, bench_report_to_json(report).dump(2) + "\n");
  if (!o.csv.empty()) {
    std::ofstream out(o.csv);
    if (!out) throw SpecError("cannot write " + o.csv);
    write_bench_csv(out, report);
  }
  return 0;
}

int run_diag(const DiagOptions& o) {
  const NetworkFile file = read_network_file(o.network);
  const NetworkSpec& spec = file.spec;
  BaselineConfig config = baseline_config(o.algorithm, "identity", o.seed, o.tol, o.max_iters);
  const SolveResult result =
      run_algorithm(spec, init_covariances(spec, config.solver_config()), config);

  Json j;
  j["algorithm"] = to_string(config.algorithm);
  j["wsr"] = result.wsr;
  j["reverse_wsr"] = weighted_sum_rate(spec, result.sigma_hat);
  j["iterations"] = result.iterations;
  j["converged"] = result.converged;
  j["residual"] = residual(spec, result.sigma, result.sigma_hat);
  j["saddle_point"] = saddle_point_to_json(saddle_point_check(spec, result));
  Json scaling = Json::array();
  for (double alpha : {0.1, 0.5, 2.0, 10.0}) {
    scaling.push_back(scaling_check_to_json(check_scaling_invariance(spec, result.sigma, alpha)));
  }
  j["scaling"] = std::move(scaling);
  const MultiplierState m = extract_multipliers(spec, result.sigma);
  const std::vector<Matrix> omega = interference_covariances(spec, result.sigma);
  j["gradient_check"] =
      gradient_check_to_json(gradient_check(spec, result.sigma, omega, m, o.directions, o.seed));
  emit(o.output, j.dump(2) + "\n");
  return 0;
}

int run_gen(const GenOptions& o) {
  ExperimentConfig cfg = load_experiment(o.config);
  cfg.master_seed = o.seed;
  const double gain = o.gain.value_or(cfg.gain_offdiag_db.front());
  const NetworkSpec spec = generate_network(cfg, o.realization, gain);
  emit(o.output, network_to_json(spec).dump(2) + "\n");
  return 0;
}

}  // namespace

int cli_entry(int argc, char** argv) {
  CLI::App app{"Weighted sum-rate maximization for MIMO B-MAC networks"};
  app.require_subcommand(1);

  SolveOptions solve_opts;
  auto* solve = app.add_subcommand("solve", "Solve one network file");
  solve->add_option("network", solve_opts.network, "Network JSON file")->required();
  solve->add_option("--algorithm", solve_opts.algorithm, "dual_link, pwf or wmmse");
  solve->add_option("--init", solve_opts.init, "identity or random");
  solve->add_option("--seed", solve_opts.seed, "Seed for --init random");
  solve->add_option("--tol", solve_opts.tol, "Stopping tolerance on the rate change (nats)");
  solve->add_option("--max-iters", solve_opts.max_iters, "Iteration cap");
  solve->add_option("--output", solve_opts.output, "Result JSON (default stdout)");
  solve->add_option("--trace", solve_opts.trace, "Write the iteration trace CSV here");
  solve->add_flag("--bits", solve_opts.bits, "Report rates in bits instead of nats");

  BenchOptions bench_opts;
  auto* bench = app.add_subcommand("bench", "Iterations-to-threshold table over random networks");
  bench->add_option("--config", bench_opts.config, "Experiment JSON");
  bench->add_option("--seed", bench_opts.seed, "Master seed");
  bench->add_option("--realizations", bench_opts.realizations, "Realizations per gain");
  bench->add_option("--tol", bench_opts.tol, "Stopping tolerance (nats)");
  bench->add_option("--max-iters", bench_opts.max_iters, "Iteration cap");
  bench->add_option("--algorithm", bench_opts.algorithms, "Restrict to these algorithms");
  bench->add_option("--gain-db", bench_opts.gains, "Interference gains in dB");
  bench->add_option("--output", bench_opts.output, "Report JSON (default stdout)");
  bench->add_option("--csv", bench_opts.csv, "Also write the cell table as CSV");
  bench->add_flag("--records", bench_opts.records, "Include per-realization records");

  DiagOptions diag_opts;
  auto* diag = app.add_subcommand("diag", "Solve, then report stationarity and scaling checks");
  diag->add_option("network", diag_opts.network, "Network JSON file")->required();
  diag->add_option("--algorithm", diag_opts.algorithm, "dual_link, pwf or wmmse");
  diag->add_option("--seed", diag_opts.seed, "Seed of the gradient-check directions");
  diag->add_option("--tol", diag_opts.tol, "Stopping tolerance (nats)");
  diag->add_option("--max-iters", diag_opts.max_iters, "Iteration cap");
  diag->add_option("--directions", diag_opts.directions, "Finite-difference directions");
  diag->add_option("--output", diag_opts.output, "Report JSON (default stdout)");

  GenOptions gen_opts;
  auto* gen = app.add_subcommand("gen", "Write a random network file");
  gen->add_option("--config", gen_opts.config, "Experiment JSON for the geometry");
  gen->add_option("--seed", gen_opts.seed, "Master seed");
  gen->add_option("--realization", gen_opts.realization, "Realization index");
  gen->add_option("--gain-db", gen_opts.gain, "Interference gain in dB");
  gen->add_option("--output", gen_opts.output, "Network JSON (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*solve) return run_solve(solve_opts);
    if (*bench) return run_bench(bench_opts);
    if (*diag) return run_diag(diag_opts);
    if (*gen) return run_gen(gen_opts);
  } catch (const SpecError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace duallink
