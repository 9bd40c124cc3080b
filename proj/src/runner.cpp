#include "gbm/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "gbm/errors.hpp"
#include "gbm/parallel.hpp"

namespace gbm {

namespace {

TimeseriesRow make_row(const MetricsSample& m, double min_u, double min_n, double min_phi,
                       double max_phi, int cg_iterations) {
  TimeseriesRow row;
  row.time = m.time;
  row.rq = m.rq;
  row.sq = m.sq;
  row.int_t = m.int_t;
  row.int_n = m.int_n;
  row.int_total = m.int_total;
  row.area = m.area;
  row.r_max = m.r_max;
  row.min_u = min_u;
  row.min_n = min_n;
  row.min_phi = min_phi;
  row.max_phi = max_phi;
  row.cg_iterations = cg_iterations;
  return row;
}

SnapshotRecord make_snapshot(const StructuredTriMesh& mesh, const SimState& s) {
  SnapshotRecord rec;
  rec.time = s.time;
  const int n = mesh.node_count();
  rec.x.resize(n);
  rec.y.resize(n);
  for (int a = 0; a < n; ++a) {
    rec.x[a] = mesh.nodes[a].x;
    rec.y[a] = mesh.nodes[a].y;
  }
  rec.t_field = s.t_field;
  rec.n_field = s.n_field;
  rec.phi = s.phi;
  rec.u = s.u;
  return rec;
}

struct FieldExtrema {
  double min_u, min_n, min_phi, max_phi, min_t;
};

FieldExtrema state_extrema(const SimState& s) {
  const auto n = static_cast<std::ptrdiff_t>(s.u.size());
  FieldExtrema e;
  e.min_u = par::block_min(n, [&](std::ptrdiff_t i) { return s.u[i]; });
  e.min_n = par::block_min(n, [&](std::ptrdiff_t i) { return s.n_field[i]; });
  e.min_phi = par::block_min(n, [&](std::ptrdiff_t i) { return s.phi[i]; });
  e.max_phi = par::block_max(n, [&](std::ptrdiff_t i) { return s.phi[i]; });
  e.min_t = par::block_min(n, [&](std::ptrdiff_t i) { return s.t_field[i]; });
  return e;
}

}  // namespace

RunResult run_on_mesh(const ScenarioConfig& config, const StructuredTriMesh& mesh,
                      const StepperOptions& opts) {
  Simulation sim(mesh, config.params, opts);
  InitialFields init = generate_initial_fields(config, mesh);
  sim.set_state(make_state(std::move(init.u), std::move(init.n_field), std::move(init.phi),
                           config.params.chi));

  const long n_steps = static_cast<long>(std::ceil(config.t_final / config.dt - 1e-12));

  // Map snapshot times to step indices (rounded; out-of-range times ignored).
  std::vector<long> snapshot_steps;
  for (double t : config.snapshot_times) {
    const long k = std::llround(t / config.dt);
    if (k >= 0 && k <= n_steps) snapshot_steps.push_back(k);
  }
  std::sort(snapshot_steps.begin(), snapshot_steps.end());
  snapshot_steps.erase(std::unique(snapshot_steps.begin(), snapshot_steps.end()),
                       snapshot_steps.end());
  auto snapshot_due = [&](long k) {
    return std::binary_search(snapshot_steps.begin(), snapshot_steps.end(), k);
  };

  RunResult result;
  const FieldExtrema e0 = state_extrema(sim.state());
  result.min_u = e0.min_u;
  result.min_u_raw = e0.min_u;
  result.min_n = e0.min_n;
  result.min_phi = e0.min_phi;
  result.max_phi = e0.max_phi;
  result.min_t = e0.min_t;

  const MetricsSample m0 = compute_metrics(mesh, sim.mass(), sim.state().t_field,
                                           sim.state().n_field, 0.0);
  result.series.push_back(make_row(m0, e0.min_u, e0.min_n, e0.min_phi, e0.max_phi, 0));
  if (snapshot_due(0)) result.snapshots.push_back(make_snapshot(mesh, sim.state()));

  for (long k = 1; k <= n_steps; ++k) {
    StepDiagnostics d;
    try {
      d = sim.advance(config.dt);
    } catch (const InvariantViolation& err) {
      result.error = RunErrorKind::kInvariant;
      result.error_step = err.step();
      result.error_message = err.what();
      return result;
    } catch (const SolverFailure& err) {
      result.error = RunErrorKind::kSolver;
      result.error_step = err.step();
      result.error_message = err.what();
      return result;
    }

    result.steps_completed = static_cast<int>(k);
    result.time_reached = sim.state().time;
    result.total_cg_iterations += d.cg_iterations;
    result.min_u = std::min(result.min_u, d.min_u);
    result.min_u_raw = std::min(result.min_u_raw, d.min_u_raw);
    result.min_n = std::min(result.min_n, d.min_n);
    result.min_phi = std::min(result.min_phi, d.min_phi);
    result.max_phi = std::max(result.max_phi, d.max_phi);
    result.min_t = std::min(result.min_t, d.min_t);

    if (k % config.output_every == 0 || k == n_steps) {
      const MetricsSample m = compute_metrics(mesh, sim.mass(), sim.state().t_field,
                                              sim.state().n_field, sim.state().time);
      result.series.push_back(
          make_row(m, d.min_u, d.min_n, d.min_phi, d.max_phi, d.cg_iterations));
    }
    if (snapshot_due(k)) result.snapshots.push_back(make_snapshot(mesh, sim.state()));
  }
  return result;
}

RunResult run(const ScenarioConfig& config, const StepperOptions& opts) {
  const StructuredTriMesh mesh =
      build_mesh(config.domain, config.cells_per_axis, config.cells_per_axis);
  return run_on_mesh(config, mesh, opts);
}

void write_run_outputs(const ScenarioConfig& config, const RunResult& result,
                       const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);

  write_timeseries(result.series, (dir / "timeseries.csv").string());
  for (const SnapshotRecord& snap : result.snapshots) {
    char name[64];
    std::snprintf(name, sizeof(name), "snapshot_t%g.csv", snap.time);
    write_snapshot(snap, (dir / name).string());
  }
  {
    std::ofstream cfg(dir / "config_effective.cfg", std::ios::binary);
    cfg << format_config(config);
  }
  if (!result.ok()) {
    std::ofstream err(dir / "error.txt", std::ios::binary);
    err << (result.error == RunErrorKind::kInvariant ? "invariant violation"
                                                     : "solver failure")
        << " at step " << result.error_step << "\n"
        << result.error_message << "\n";
  }
}

}  // namespace gbm
