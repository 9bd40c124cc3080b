#pragma once

#include <string>
#include <vector>

#include "gbm/metrics.hpp"
#include "gbm/scenario.hpp"
#include "gbm/stepper.hpp"

namespace gbm {

/// Why a run stopped early.
enum class RunErrorKind { kNone, kInvariant, kSolver };

/// Outcome of one scenario run: the sampled time series (step 0, every
/// output_every steps, and the final step), requested snapshots, and the
/// bound monitors aggregated over every step. On failure the series holds
/// whatever was sampled before the bad step.
struct RunResult {
  std::vector<TimeseriesRow> series;
  std::vector<SnapshotRecord> snapshots;

  double min_phi = 0.0, max_phi = 0.0;
  double min_u = 0.0, min_u_raw = 0.0;
  double min_n = 0.0, min_t = 0.0;
  long total_cg_iterations = 0;
  int steps_completed = 0;
  double time_reached = 0.0;

  RunErrorKind error = RunErrorKind::kNone;
  int error_step = 0;
  std::string error_message;

  bool ok() const { return error == RunErrorKind::kNone; }
};

/// Runs a scenario to completion (or failure) on a fresh mesh. Deterministic:
/// identical configs give bit-identical results regardless of thread count.
RunResult run(const ScenarioConfig& config, const StepperOptions& opts = {});

/// Same, on a caller-provided mesh.
RunResult run_on_mesh(const ScenarioConfig& config, const StructuredTriMesh& mesh,
                      const StepperOptions& opts = {});

/// Writes timeseries.csv, snapshot_*.csv, config_effective.cfg and (on
/// failure) error.txt under out_dir, creating it if needed.
void write_run_outputs(const ScenarioConfig& config, const RunResult& result,
                       const std::string& out_dir);

}  // namespace gbm
