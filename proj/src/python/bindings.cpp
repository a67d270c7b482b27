// SPDX-License-Identifier: Apache-2.0
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "duallink/baselines.hpp"
#include "duallink/dual_link.hpp"
#include "duallink/errors.hpp"
#include "duallink/harness.hpp"
#include "duallink/json_io.hpp"
#include "duallink/kkt.hpp"
#include "duallink/whitening.hpp"

namespace py = pybind11;
using namespace duallink;

namespace {

CovarianceSet forward_set(std::vector<Matrix> sigma) {
  return CovarianceSet{Direction::forward, std::move(sigma)};
}

CovarianceSet reverse_set(std::vector<Matrix> sigma) {
  return CovarianceSet{Direction::reverse, std::move(sigma)};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Weighted sum-rate maximization for MIMO B-MAC networks";

  py::register_exception<SpecError>(m, "SpecError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::class_<NetworkSpec>(m, "NetworkSpec")
      .def_readonly("tx_antennas", &NetworkSpec::tx_antennas)
      .def_readonly("rx_antennas", &NetworkSpec::rx_antennas)
      .def_readonly("weights", &NetworkSpec::weights)
      .def_readonly("total_power", &NetworkSpec::total_power)
      .def_readonly("cancel_mask", &NetworkSpec::cancel_mask)
      .def("links", &NetworkSpec::links)
      .def("channel", &NetworkSpec::channel, py::arg("l"), py::arg("k"))
      .def("to_json", [](const NetworkSpec& s) { return network_to_json(s).dump(); })
      .def_static("from_json",
                  [](const std::string& text) { return network_from_json(Json::parse(text)).spec; });

  m.def("make_network", &make_network, py::arg("channels"), py::arg("weights"),
        py::arg("total_power"), py::arg("cancel_mask") = std::vector<std::vector<bool>>{});

  py::enum_<InitKind>(m, "InitKind")
      .value("scaled_identity", InitKind::scaled_identity)
      .value("random", InitKind::random);

  py::enum_<Algorithm>(m, "Algorithm")
      .value("dual_link", Algorithm::dual_link)
      .value("pwf", Algorithm::pwf)
      .value("wmmse", Algorithm::wmmse);

  py::class_<IterationRecord>(m, "IterationRecord")
      .def_readonly("iteration", &IterationRecord::iteration)
      .def_readonly("forward_wsr", &IterationRecord::forward_wsr)
      .def_readonly("reverse_wsr", &IterationRecord::reverse_wsr)
      .def_readonly("kkt_residual", &IterationRecord::kkt_residual)
      .def_readonly("elapsed_us", &IterationRecord::elapsed_us);

  py::class_<SolveResult>(m, "SolveResult")
      .def_property_readonly("sigma", [](const SolveResult& r) { return r.sigma.sigma; })
      .def_property_readonly("sigma_hat", [](const SolveResult& r) { return r.sigma_hat.sigma; })
      .def_readonly("wsr", &SolveResult::wsr)
      .def_readonly("initial_wsr", &SolveResult::initial_wsr)
      .def_readonly("iterations", &SolveResult::iterations)
      .def_readonly("converged", &SolveResult::converged)
      .def_readonly("oscillating", &SolveResult::oscillating)
      .def_readonly("trace", &SolveResult::trace);

  auto config = [](Algorithm a, double tol, int max_iters, InitKind init, std::uint64_t seed,
                   bool trace) {
    BaselineConfig c;
    c.algorithm = a;
    c.tol = tol;
    c.max_iters = max_iters;
    c.init = init;
    c.seed = seed;
    c.record_trace = trace;
    return c;
  };

  m.def(
      "solve",
      [config](const NetworkSpec& spec, const std::string& algorithm, double tol, int max_iters,
               InitKind init, std::uint64_t seed, bool trace) {
        const BaselineConfig c = config(parse_algorithm(algorithm), tol, max_iters, init, seed, trace);
        py::gil_scoped_release release;
        return run_algorithm(spec, init_covariances(spec, c.solver_config()), c);
      },
      py::arg("spec"), py::arg("algorithm") = "dual_link", py::arg("tol") = 1e-8,
      py::arg("max_iters") = 500, py::arg("init") = InitKind::scaled_identity,
      py::arg("seed") = 0, py::arg("trace") = false);

  m.def(
      "solve_from",
      [config](const NetworkSpec& spec, std::vector<Matrix> start, const std::string& algorithm,
               double tol, int max_iters, bool trace) {
        const BaselineConfig c =
            config(parse_algorithm(algorithm), tol, max_iters, InitKind::scaled_identity, 0, trace);
        const CovarianceSet s = forward_set(std::move(start));
        py::gil_scoped_release release;
        return run_algorithm(spec, s, c);
      },
      py::arg("spec"), py::arg("start"), py::arg("algorithm") = "dual_link", py::arg("tol") = 1e-8,
      py::arg("max_iters") = 500, py::arg("trace") = false);

  m.def("weighted_sum_rate", [](const NetworkSpec& spec, std::vector<Matrix> sigma) {
    return weighted_sum_rate(spec, forward_set(std::move(sigma)));
  });
  m.def("reverse_weighted_sum_rate", [](const NetworkSpec& spec, std::vector<Matrix> sigma_hat) {
    return weighted_sum_rate(spec, reverse_set(std::move(sigma_hat)));
  });
  m.def("forward_to_reverse", [](const NetworkSpec& spec, std::vector<Matrix> sigma) {
    return forward_to_reverse(spec, forward_set(std::move(sigma))).sigma;
  });
  m.def("reverse_to_forward", [](const NetworkSpec& spec, std::vector<Matrix> sigma_hat) {
    return reverse_to_forward(spec, reverse_set(std::move(sigma_hat))).sigma;
  });
  m.def("residual", [](const NetworkSpec& spec, std::vector<Matrix> sigma,
                       std::vector<Matrix> sigma_hat) {
    return residual(spec, forward_set(std::move(sigma)), reverse_set(std::move(sigma_hat)));
  });
  m.def("saddle_point_check", [](const NetworkSpec& spec, const SolveResult& r) {
    const SaddlePointReport rep = saddle_point_check(spec, r);
    return py::dict(py::arg("forward_transform") = rep.forward_transform,
                    py::arg("reverse_gradient") = rep.reverse_gradient,
                    py::arg("reverse_transform") = rep.reverse_transform,
                    py::arg("forward_gradient") = rep.forward_gradient,
                    py::arg("max_residual") = rep.max_residual());
  });

  m.def("water_fill",
        [](const std::vector<double>& gains, const std::vector<double>& weights, double budget) {
          const WaterFilling wf = water_fill(gains, weights, budget);
          return py::make_tuple(wf.power, wf.level);
        },
        py::arg("gains"), py::arg("weights"), py::arg("budget"));

  m.def("mac_capacity", [](const NetworkSpec& spec) { return mac_capacity_oracle(spec).value; });

  m.def(
      "generate_network",
      [](std::uint64_t seed, std::uint64_t realization, double gain_offdiag_db, int links, int tx,
         int rx, double total_power) {
        ExperimentConfig cfg;
        cfg.master_seed = seed;
        cfg.links = links;
        cfg.tx = tx;
        cfg.rx = rx;
        cfg.total_power = total_power;
        return generate_network(cfg, realization, gain_offdiag_db);
      },
      py::arg("seed") = 0, py::arg("realization") = 0, py::arg("gain_offdiag_db") = 0.0,
      py::arg("links") = 10, py::arg("tx") = 3, py::arg("rx") = 4, py::arg("total_power") = 100.0);

  m.def(
      "bench",
      [](const std::string& config_json) {
        const ExperimentConfig cfg = experiment_config_from_json(Json::parse(config_json));
        BenchReport report;
        {
          py::gil_scoped_release release;
          report = run_table(cfg);
        }
        return bench_report_to_json(report).dump();
      },
      py::arg("config_json") = "{}");

  m.attr("rng_version") = kRngVersion;
}
