#pragma once

#include <string>
#include <vector>

#include "gbm/scenario.hpp"

namespace gbm {

/// One-parameter sweep: one run per value, all other parameters from the
/// base config.
struct SweepSpec {
  std::string parameter;        ///< kappa, alpha, gamma or delta
  std::vector<double> values;
  ScenarioConfig base;
  std::string out_dir;
  int jobs = 1;                 ///< bounded worker pool size
};

/// Default sweep values per parameter: range endpoints plus the fixed value
/// used when other parameters vary.
std::vector<double> default_sweep_values(const std::string& parameter);

struct SweepPointResult {
  double value = 0.0;
  bool ok = false;
  double final_rq = 0.0;
  double final_sq = 0.0;
  double final_int_total = 0.0;
  std::string run_dir;
  std::string error_message;
};

/// Runs every point (worker pool of spec.jobs threads, each owning its run
/// end-to-end), writes per-point run directories plus summary.csv under
/// spec.out_dir, and keeps going past failed points. Deterministic given the
/// spec.
std::vector<SweepPointResult> run_sweep(const SweepSpec& spec);

}  // namespace gbm
