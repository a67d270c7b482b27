// SPDX-License-Identifier: Apache-2.0
#include <string>

#include "duallink/baselines.hpp"
#include "duallink/errors.hpp"

namespace duallink {

const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::dual_link: return "dual_link";
    case Algorithm::pwf: return "pwf";
    case Algorithm::wmmse: return "wmmse";
  }
  return "unknown";
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "dual_link" || name == "dual-link") return Algorithm::dual_link;
  if (name == "pwf") return Algorithm::pwf;
  if (name == "wmmse") return Algorithm::wmmse;
  throw SpecError("unknown algorithm: " + name);
}

void BaselineConfig::validate() const {
  solver_config().validate();
  if (oscillation_window < 2) throw SpecError("oscillation_window must be at least 2");
}

SolverConfig BaselineConfig::solver_config() const {
  SolverConfig c;
  c.tol = tol;
  c.max_iters = max_iters;
  c.init = init;
  c.seed = seed;
  c.record_trace = record_trace;
  return c;
}

SolveResult run_algorithm(const NetworkSpec& spec, const CovarianceSet& start,
                          const BaselineConfig& config) {
  switch (config.algorithm) {
    case Algorithm::dual_link: return solve_from(spec, start, config.solver_config());
    case Algorithm::pwf: return pwf_solve_from(spec, start, config);
    case Algorithm::wmmse: return wmmse_solve_from(spec, start, config);
  }
  throw SpecError("unknown algorithm");
}

}  // namespace duallink
