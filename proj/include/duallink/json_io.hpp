// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "duallink/baselines.hpp"
#include "duallink/harness.hpp"
#include "duallink/kkt.hpp"
#include "duallink/whitening.hpp"

namespace duallink {

using Json = nlohmann::json;

/// Contents of a network file: the spec plus the optional "noise_covariance"
/// and "power_weights" blocks.
struct NetworkFile {
  NetworkSpec spec;
  std::optional<NoiseModel> noise;
  std::optional<PowerWeights> power_weights;
};

/// Complex matrices are written as lists of rows of {"re", "im"} objects. On
/// input a flat row-major list of rows*cols entries is accepted as well when
/// the shape is known.
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, Eigen::Index rows, Eigen::Index cols);

Json network_to_json(const NetworkFile& file);
Json network_to_json(const NetworkSpec& spec);
/// Throws SpecError on schema violations or an invalid spec.
NetworkFile network_from_json(const Json& j);

NetworkFile read_network_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

Json covariances_to_json(const CovarianceSet& set);

/// rate_scale multiplies every rate (1 for nats, 1/ln 2 for bits).
Json solve_result_to_json(const SolveResult& result, Algorithm algorithm, double rate_scale = 1.0);

/// Header: iteration,forward_wsr,reverse_wsr,kkt_residual,elapsed_us
void write_trace_csv(std::ostream& out, const IterationTrace& trace, double rate_scale = 1.0);

Json experiment_config_to_json(const ExperimentConfig& cfg);
/// Missing fields keep their defaults.
ExperimentConfig experiment_config_from_json(const Json& j);

Json bench_report_to_json(const BenchReport& report);
/// One row per cell: algorithm,gain_offdiag_db,threshold,mean_iters,std,n_converged,n_used,n_total
void write_bench_csv(std::ostream& out, const BenchReport& report);

Json saddle_point_to_json(const SaddlePointReport& r);
Json scaling_check_to_json(const ScalingCheck& c);
Json gradient_check_to_json(const GradientCheck& g);

}  // namespace duallink
