// SPDX-License-Identifier: Apache-2.0
#include "duallink/json_io.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>

#include "duallink/errors.hpp"

namespace duallink {

namespace {

Complex complex_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("re") || !j.contains("im")) {
    throw SpecError("complex entries must be {\"re\": x, \"im\": y} objects");
  }
  return {j.at("re").get<double>(), j.at("im").get<double>()};
}

template <typename T>
std::vector<T> list_of(const Json& j, const char* key) {
  if (!j.contains(key)) throw SpecError(std::string("network file: missing field '") + key + "'");
  const Json& v = j.at(key);
  if (!v.is_array()) throw SpecError(std::string("network file: '") + key + "' must be a list");
  return v.get<std::vector<T>>();
}

std::vector<Matrix> square_blocks(const Json& j, const std::vector<int>& dims, const char* key) {
  if (!j.is_array() || j.size() != dims.size()) {
    throw SpecError(std::string("network file: '") + key + "' needs one matrix per link");
  }
  std::vector<Matrix> out;
  for (std::size_t l = 0; l < dims.size(); ++l) out.push_back(matrix_from_json(j[l], dims[l], dims[l]));
  return out;
}

Json blocks_to_json(const std::vector<Matrix>& ms) {
  Json j = Json::array();
  for (const auto& m : ms) j.push_back(matrix_to_json(m));
  return j;
}

}  // namespace

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back({{"re", m(r, c).real()}, {"im", m(r, c).imag()}});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j, Eigen::Index rows, Eigen::Index cols) {
  if (!j.is_array()) throw SpecError("matrix must be a JSON list");
  Matrix m(rows, cols);
  const bool nested = !j.empty() && j[0].is_array();
  if (nested) {
    if (static_cast<Eigen::Index>(j.size()) != rows) throw SpecError("matrix has the wrong number of rows");
    for (Eigen::Index r = 0; r < rows; ++r) {
      const Json& row = j[r];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
        throw SpecError("matrix has the wrong number of columns");
      }
      for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(row[c]);
    }
  } else {
    if (static_cast<Eigen::Index>(j.size()) != rows * cols) throw SpecError("matrix has the wrong number of entries");
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(j[r * cols + c]);
    }
  }
  return m;
}

Json network_to_json(const NetworkSpec& spec) { return network_to_json(NetworkFile{spec, {}, {}}); }

Json network_to_json(const NetworkFile& file) {
  const NetworkSpec& spec = file.spec;
  Json j;
  j["links"] = spec.links();
  j["tx_antennas"] = spec.tx_antennas;
  j["rx_antennas"] = spec.rx_antennas;
  j["weights"] = spec.weights;
  j["total_power"] = spec.total_power;
  Json channels = Json::array();
  for (std::size_t l = 0; l < spec.links(); ++l) {
    Json row = Json::array();
    for (std::size_t k = 0; k < spec.links(); ++k) row.push_back(matrix_to_json(spec.channel(l, k)));
    channels.push_back(std::move(row));
  }
  j["channels"] = std::move(channels);
  Json mask = Json::array();
  for (const auto& row : spec.cancel_mask) {
    Json r = Json::array();
    for (bool b : row) r.push_back(b);
    mask.push_back(std::move(r));
  }
  j["cancel_mask"] = std::move(mask);
  if (file.noise) j["noise_covariance"] = blocks_to_json(file.noise->W);
  if (file.power_weights) j["power_weights"] = blocks_to_json(file.power_weights->What);
  return j;
}

NetworkFile network_from_json(const Json& j) {
  if (!j.is_object()) throw SpecError("network file must hold a JSON object");
  try {
    NetworkFile file;
    NetworkSpec& spec = file.spec;
    spec.tx_antennas = list_of<int>(j, "tx_antennas");
    spec.rx_antennas = list_of<int>(j, "rx_antennas");
    spec.weights = list_of<double>(j, "weights");
    if (!j.contains("total_power")) throw SpecError("network file: missing field 'total_power'");
    spec.total_power = j.at("total_power").get<double>();
    const std::size_t n = spec.weights.size();
    if (j.contains("links") && j.at("links").get<std::size_t>() != n) {
      throw SpecError("network file: 'links' disagrees with the number of weights");
    }
    if (spec.tx_antennas.size() != n || spec.rx_antennas.size() != n) {
      throw SpecError("network file: antenna lists must have one entry per link");
    }
    if (!j.contains("channels") || !j.at("channels").is_array() || j.at("channels").size() != n) {
      throw SpecError("network file: 'channels' must be an L x L list of matrices");
    }
    spec.channels.assign(n, std::vector<Matrix>(n));
    for (std::size_t l = 0; l < n; ++l) {
      const Json& row = j.at("channels")[l];
      if (!row.is_array() || row.size() != n) throw SpecError("network file: 'channels' must be L x L");
      for (std::size_t k = 0; k < n; ++k) {
        spec.channels[l][k] = matrix_from_json(row[k], spec.rx_antennas[l], spec.tx_antennas[k]);
      }
    }
    spec.cancel_mask.assign(n, std::vector<bool>(n, false));
    if (j.contains("cancel_mask") && !j.at("cancel_mask").is_null()) {
      const auto mask = j.at("cancel_mask").get<std::vector<std::vector<bool>>>();
      if (!mask.empty()) spec.cancel_mask = mask;
    }
    spec.validate();
    if (j.contains("noise_covariance")) {
      file.noise = NoiseModel{square_blocks(j.at("noise_covariance"), spec.rx_antennas, "noise_covariance")};
    }
    if (j.contains("power_weights")) {
      file.power_weights = PowerWeights{square_blocks(j.at("power_weights"), spec.tx_antennas, "power_weights")};
    }
    return file;
  } catch (const Json::exception& e) {
    throw SpecError(std::string("network file: ") + e.what());
  }
}

NetworkFile read_network_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw SpecError(path + ": " + e.what());
  }
  return network_from_json(j);
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw SpecError("cannot write " + path);
  out << j.dump(2) << '\n';
}

Json covariances_to_json(const CovarianceSet& set) {
  return blocks_to_json(set.sigma);
}

Json solve_result_to_json(const SolveResult& result, Algorithm algorithm, double rate_scale) {
  Json j;
  j["algorithm"] = to_string(algorithm);
  j["wsr"] = result.wsr * rate_scale;
  j["initial_wsr"] = result.initial_wsr * rate_scale;
  j["iterations"] = result.iterations;
  j["converged"] = result.converged;
  j["oscillating"] = result.oscillating;
  j["sigma"] = covariances_to_json(result.sigma);
  j["sigma_hat"] = covariances_to_json(result.sigma_hat);
  return j;
}

void write_trace_csv(std::ostream& out, const IterationTrace& trace, double rate_scale) {
  out << "iteration,forward_wsr,reverse_wsr,kkt_residual,elapsed_us\n";
  out << std::setprecision(17);
  for (const auto& r : trace) {
    out << r.iteration << ',' << r.forward_wsr * rate_scale << ',' << r.reverse_wsr * rate_scale
        << ',' << r.kkt_residual << ',' << r.elapsed_us << '\n';
  }
}

Json experiment_config_to_json(const ExperimentConfig& cfg) {
  Json algorithms = Json::array();
  for (Algorithm a : cfg.algorithms) algorithms.push_back(to_string(a));
  return {{"links", cfg.links},
          {"tx", cfg.tx},
          {"rx", cfg.rx},
          {"gain_diag_db", cfg.gain_diag_db},
          {"gain_offdiag_db", cfg.gain_offdiag_db},
          {"total_power", cfg.total_power},
          {"realizations", cfg.realizations},
          {"thresholds", cfg.thresholds},
          {"master_seed", cfg.master_seed},
          {"algorithms", algorithms},
          {"max_iters", cfg.max_iters},
          {"tol", cfg.tol},
          {"oscillation_window", cfg.oscillation_window},
          {"rng", kRngVersion},
          {"reference_value", "own rate after max_iters iterations or at convergence"}};
}

ExperimentConfig experiment_config_from_json(const Json& j) {
  if (!j.is_object()) throw SpecError("experiment config must be a JSON object");
  ExperimentConfig cfg;
  try {
    cfg.links = j.value("links", cfg.links);
    cfg.tx = j.value("tx", cfg.tx);
    cfg.rx = j.value("rx", cfg.rx);
    cfg.gain_diag_db = j.value("gain_diag_db", cfg.gain_diag_db);
    if (j.contains("gain_offdiag_db")) {
      const Json& g = j.at("gain_offdiag_db");
      cfg.gain_offdiag_db = g.is_array() ? g.get<std::vector<double>>() : std::vector<double>{g.get<double>()};
    }
    cfg.total_power = j.value("total_power", cfg.total_power);
    cfg.realizations = j.value("realizations", cfg.realizations);
    cfg.thresholds = j.value("thresholds", cfg.thresholds);
    cfg.master_seed = j.value("master_seed", cfg.master_seed);
    if (j.contains("algorithms")) {
      cfg.algorithms.clear();
      for (const auto& a : j.at("algorithms")) cfg.algorithms.push_back(parse_algorithm(a.get<std::string>()));
    }
    cfg.max_iters = j.value("max_iters", cfg.max_iters);
    cfg.tol = j.value("tol", cfg.tol);
    cfg.oscillation_window = j.value("oscillation_window", cfg.oscillation_window);
  } catch (const Json::exception& e) {
    throw SpecError(std::string("experiment config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

Json bench_report_to_json(const BenchReport& report) {
  Json cells = Json::array();
  for (const auto& c : report.cells) {
    cells.push_back({{"algorithm", to_string(c.algorithm)},
                     {"gain_offdiag_db", c.gain_offdiag_db},
                     {"threshold", c.threshold},
                     {"mean_iters", c.mean_iters},
                     {"std", c.std},
                     {"n_converged", c.n_converged},
                     {"n_used", c.n_used},
                     {"n_total", c.n_total}});
  }
  Json j{{"config", experiment_config_to_json(report.config)}, {"cells", cells}};
  if (!report.records.empty()) {
    Json recs = Json::array();
    for (const auto& r : report.records) {
      recs.push_back({{"realization", r.realization},
                      {"gain_offdiag_db", r.gain_offdiag_db},
                      {"algorithm", to_string(r.algorithm)},
                      {"initial_wsr", r.initial_wsr},
                      {"final_wsr", r.final_wsr},
                      {"iterations", r.iterations},
                      {"converged", r.converged},
                      {"failed", r.failed},
                      {"threshold_iterations", r.threshold_iterations}});
    }
    j["records"] = std::move(recs);
  }
  return j;
}

void write_bench_csv(std::ostream& out, const BenchReport& report) {
  out << "algorithm,gain_offdiag_db,threshold,mean_iters,std,n_converged,n_used,n_total\n";
  out << std::setprecision(10);
  for (const auto& c : report.cells) {
    out << to_string(c.algorithm) << ',' << c.gain_offdiag_db << ',' << c.threshold << ','
        << c.mean_iters << ',' << c.std << ',' << c.n_converged << ',' << c.n_used << ','
        << c.n_total << '\n';
  }
}

Json saddle_point_to_json(const SaddlePointReport& r) {
  return {{"forward_transform", r.forward_transform},
          {"reverse_gradient", r.reverse_gradient},
          {"reverse_transform", r.reverse_transform},
          {"forward_gradient", r.forward_gradient},
          {"reverse_gradient_unrestricted", r.reverse_gradient_unrestricted},
          {"forward_gradient_unrestricted", r.forward_gradient_unrestricted},
          {"cone_multiplier_violation", r.cone_multiplier_violation},
          {"mu", r.mu},
          {"mu_hat", r.mu_hat},
          {"max_residual", r.max_residual()}};
}

Json scaling_check_to_json(const ScalingCheck& c) {
  return {{"alpha", c.alpha},
          {"deviation", c.deviation},
          {"relative_deviation", c.relative_deviation},
          {"omega_gradient_norm", c.omega_gradient_norm},
          {"lagrangian", c.lagrangian}};
}

Json gradient_check_to_json(const GradientCheck& g) {
  return {{"directions", g.directions},
          {"max_relative_error_sigma", g.max_relative_error_sigma},
          {"max_relative_error_omega", g.max_relative_error_omega}};
}

}  // namespace duallink
