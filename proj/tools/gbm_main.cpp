#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gbm/errors.hpp"
#include "gbm/metrics.hpp"
#include "gbm/params.hpp"
#include "gbm/runner.hpp"
#include "gbm/scenario.hpp"
#include "gbm/stepper.hpp"
#include "gbm/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInvariant = 2;
constexpr int kExitSolver = 3;

struct Overrides {
  double t_final = -1.0;
  double dt = -1.0;
  long long seed = -1;
  bool full_length = false;
};

void add_override_flags(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--t-final", ov.t_final, "Override final time");
  cmd->add_option("--dt", ov.dt, "Override time step");
  cmd->add_option("--seed", ov.seed, "Override the run seed");
  cmd->add_flag("--full", ov.full_length, "Full-length run (t_final = 500)");
}

gbm::ScenarioConfig load_config(const std::string& path, const Overrides& ov) {
  gbm::ScenarioConfig config = gbm::parse_config_file(path);
  if (ov.dt > 0.0) config.dt = ov.dt;
  if (ov.t_final >= 0.0) config.t_final = ov.t_final;
  if (ov.full_length) config.t_final = 500.0;
  if (ov.seed >= 0) config.rng_seed = static_cast<std::uint64_t>(ov.seed);
  return config;
}

int exit_code_for(const gbm::RunResult& result) {
  switch (result.error) {
    case gbm::RunErrorKind::kNone:
      return kExitOk;
    case gbm::RunErrorKind::kInvariant:
      return kExitInvariant;
    case gbm::RunErrorKind::kSolver:
      return kExitSolver;
  }
  return kExitUsage;
}

int cmd_run(const std::string& config_path, const std::string& out_dir, const Overrides& ov) {
  const gbm::ScenarioConfig config = load_config(config_path, ov);
  const gbm::RunResult result = gbm::run(config);
  gbm::write_run_outputs(config, result, out_dir);
  if (!result.ok()) {
    std::cerr << "run failed at step " << result.error_step << ": " << result.error_message
              << "\n";
    return exit_code_for(result);
  }
  const gbm::TimeseriesRow& last = result.series.back();
  std::printf("completed %d steps to t = %g\n", result.steps_completed, result.time_reached);
  std::printf("final: RQ = %.6g  SQ = %.6g  int(T+N) = %.6g\n", last.rq, last.sq,
              last.int_total);
  std::printf("bounds over run: u >= %.3g  N >= %.3g  Phi in [%.3g, %.3g]\n", result.min_u,
              result.min_n, result.min_phi, result.max_phi);
  return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir,
              const std::string& parameter, std::vector<double> values, int jobs,
              const Overrides& ov) {
  gbm::SweepSpec spec;
  spec.parameter = parameter;
  spec.values = values.empty() ? gbm::default_sweep_values(parameter) : std::move(values);
  spec.base = load_config(config_path, ov);
  spec.out_dir = out_dir;
  spec.jobs = jobs;

  const auto results = gbm::run_sweep(spec);
  bool any_failed = false;
  for (const auto& r : results) {
    if (r.ok) {
      std::printf("%s = %-8g  RQ = %-10.6g SQ = %-10.6g int(T+N) = %.6g\n",
                  parameter.c_str(), r.value, r.final_rq, r.final_sq, r.final_int_total);
    } else {
      any_failed = true;
      std::printf("%s = %-8g  FAILED: %s\n", parameter.c_str(), r.value,
                  r.error_message.c_str());
    }
  }
  std::printf("summary: %s/summary.csv\n", out_dir.c_str());
  return any_failed ? kExitInvariant : kExitOk;
}

int cmd_check(double kappa, double alpha, double gamma, double delta, int phi_samples,
              double t_max, int t_samples) {
  const gbm::DimensionlessParams params = gbm::make_params(kappa, alpha, gamma, delta);
  const gbm::HypothesisReport report =
      gbm::check_hypotheses(params, phi_samples, t_max, t_samples);
  std::printf("grid: Phi [0,1] x %d samples, T [0,%g] x %d samples\n",
              report.grid.phi_samples, report.grid.t_max, report.grid.t_samples);
  std::printf("c1 = sup r*Phi/p    = %.12g\n", report.c1);
  std::printf("c2 = sup |d(r*Phi)| = %.12g\n", report.c2);
  std::printf("c3 = sup |d(q*Phi)| = %.12g\n", report.c3);
  std::printf("c4 = sup |d(s*T)|   = %.12g\n", report.c4);
  std::printf("kappa*gamma*c1 = %.12g  ->  growth-control condition %s\n",
              kappa * gamma * report.c1, report.rho_condition_holds ? "holds" : "FAILS");
  return kExitOk;
}

// Discrepancy budget for the homogeneous consistency check: the one-step
// scheme is first order, and on the admissible box the kinetics keep the
// error constant well below this multiple of dt.
constexpr double kOracleErrorPerDt = 50.0;

int cmd_oracle(const std::string& config_path, const Overrides& ov) {
  gbm::ScenarioConfig config = load_config(config_path, ov);
  if (config.tumor_ic.kind != gbm::TumorIcKind::kUniform ||
      config.vasculature_ic.kind != gbm::VasculatureIcKind::kUniform) {
    std::cerr << "oracle requires spatially uniform initial data "
                 "(tumor_ic and vasculature_ic kind = uniform)\n";
    return kExitUsage;
  }
  if (ov.dt <= 0.0) config.dt = 2e-3;
  if (ov.t_final < 0.0 && !ov.full_length) config.t_final = 1.0;

  const std::array<double, 3> y0{config.tumor_ic.uniform_value, config.tumor_ic.necrosis,
                                 config.vasculature_ic.uniform_value};
  const auto ode = gbm::reference_ode_solve(config.params, y0, config.t_final, 1e-4);
  const gbm::OdePoint& ref = ode.back();

  auto fem_error = [&](double dt) {
    gbm::ScenarioConfig c = config;
    c.dt = dt;
    const gbm::StructuredTriMesh mesh = gbm::build_mesh(c.domain, c.cells_per_axis,
                                                        c.cells_per_axis);
    gbm::Simulation sim(mesh, c.params);
    gbm::InitialFields init = gbm::generate_initial_fields(c, mesh);
    sim.set_state(gbm::make_state(std::move(init.u), std::move(init.n_field),
                                  std::move(init.phi), c.params.chi));
    const long steps = std::lround(c.t_final / dt);
    for (long k = 0; k < steps; ++k) sim.advance(dt);
    double err = 0.0;
    const gbm::SimState& s = sim.state();
    for (std::size_t a = 0; a < s.u.size(); ++a) {
      err = std::max(err, std::abs(s.t_field[a] - ref.t_val));
      err = std::max(err, std::abs(s.n_field[a] - ref.n_val));
      err = std::max(err, std::abs(s.phi[a] - ref.phi_val));
    }
    return err;
  };

  const double err_coarse = fem_error(config.dt);
  const double err_fine = fem_error(config.dt / 2.0);
  std::printf("t = %g   dt = %g\n", config.t_final, config.dt);
  std::printf("max-norm discrepancy: %.6e (dt), %.6e (dt/2)\n", err_coarse, err_fine);

  if (err_coarse < 1e-14 && err_fine < 1e-14) {
    std::printf("trajectory reproduced to round-off; order check skipped\n");
    return kExitOk;
  }
  const double ratio = err_coarse / err_fine;
  std::printf("error ratio under dt halving: %.3f (observed order %.3f)\n", ratio,
              std::log2(ratio));
  const bool ratio_ok = ratio >= 1.5 && ratio <= 2.5;
  const bool bound_ok = err_coarse <= kOracleErrorPerDt * config.dt;
  if (!ratio_ok)
    std::printf("FAIL: ratio outside [1.5, 2.5], not first-order behaviour\n");
  if (!bound_ok)
    std::printf("FAIL: discrepancy exceeds %.1f * dt\n", kOracleErrorPerDt);
  return ratio_ok && bound_ok ? kExitOk : kExitInvariant;
}

int cmd_mesh_info(const std::string& config_path, int cells, std::vector<double> bounds) {
  gbm::Rect rect{-9.0, 9.0, -9.0, 9.0};
  int n = 45;
  if (!config_path.empty()) {
    const gbm::ScenarioConfig config = gbm::parse_config_file(config_path);
    rect = config.domain;
    n = config.cells_per_axis;
  }
  if (cells > 0) n = cells;
  if (!bounds.empty()) {
    if (bounds.size() != 4) throw gbm::ConfigError("--bounds needs xmin,xmax,ymin,ymax");
    rect = {bounds[0], bounds[1], bounds[2], bounds[3]};
  }

  const gbm::StructuredTriMesh mesh = gbm::build_mesh(rect, n, n);
  const gbm::AngleCheck angles = gbm::nonobtuse_check(mesh);
  const gbm::NodalField mass = gbm::lumped_mass(mesh);
  double total = 0.0;
  for (double m : mass) total += m;
  std::printf("domain: (%g, %g) x (%g, %g)\n", rect.xmin, rect.xmax, rect.ymin, rect.ymax);
  std::printf("cells: %d x %d   h = (%g, %g)\n", mesh.nx, mesh.ny, mesh.hx, mesh.hy);
  std::printf("nodes: %d   triangles: %d   matrix nonzeros: %zu\n", mesh.node_count(),
              mesh.tri_count(), mesh.col_indices.size());
  std::printf("nonobtuse: %s   worst angle: %.6f rad\n", angles.nonobtuse ? "yes" : "NO",
              angles.worst_angle);
  std::printf("lumped mass total: %.12g (domain area %.12g)\n", total,
              rect.width() * rect.height());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2D finite-element simulator for a tumor/necrosis/vasculature "
               "chemotaxis model with morphology metrics"};
  app.require_subcommand(1);

  std::string config_path, out_dir, parameter;
  std::vector<double> values, bounds;
  int jobs = 1, cells = 0;
  Overrides ov;

  auto* run_cmd = app.add_subcommand("run", "Run one scenario and write CSV outputs");
  run_cmd->add_option("--config", config_path, "Scenario config file")->required();
  run_cmd->add_option("--out", out_dir, "Output directory")->required();
  add_override_flags(run_cmd, ov);

  auto* sweep_cmd = app.add_subcommand("sweep", "Run one scenario per parameter value");
  sweep_cmd->add_option("--config", config_path, "Base scenario config file")->required();
  sweep_cmd->add_option("--out", out_dir, "Output directory")->required();
  sweep_cmd->add_option("--param", parameter, "kappa, alpha, gamma or delta")->required();
  sweep_cmd->add_option("--values", values, "Comma-separated values (default: table ranges)")
      ->delimiter(',');
  sweep_cmd->add_option("--jobs", jobs, "Parallel sweep workers")->check(CLI::PositiveNumber);
  add_override_flags(sweep_cmd, ov);

  double kappa = 5.0, alpha = 45.0, gamma = 0.255, delta = 2.55, t_max = 10.0;
  int phi_samples = 201, t_samples = 1001;
  auto* check_cmd =
      app.add_subcommand("check", "Evaluate the growth-control constants on a grid");
  check_cmd->add_option("--kappa", kappa, "Chemotaxis coefficient");
  check_cmd->add_option("--alpha", alpha, "Hypoxia rate");
  check_cmd->add_option("--gamma", gamma, "Vasculature growth rate");
  check_cmd->add_option("--delta", delta, "Vasculature destruction rate");
  check_cmd->add_option("--phi-samples", phi_samples, "Grid samples in Phi")
      ->check(CLI::Range(2, 1 << 20));
  check_cmd->add_option("--t-max", t_max, "Upper bound of the T grid");
  check_cmd->add_option("--t-samples", t_samples, "Grid samples in T")
      ->check(CLI::Range(2, 1 << 20));

  auto* oracle_cmd = app.add_subcommand(
      "oracle", "Compare the scheme against the homogeneous RK4 reference");
  oracle_cmd->add_option("--config", config_path, "Config with uniform initial data")
      ->required();
  add_override_flags(oracle_cmd, ov);

  auto* mesh_cmd = app.add_subcommand("mesh-info", "Print mesh statistics");
  mesh_cmd->add_option("--config", config_path, "Scenario config file");
  mesh_cmd->add_option("--cells", cells, "Cells per axis");
  mesh_cmd->add_option("--bounds", bounds, "xmin,xmax,ymin,ymax")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run_cmd) return cmd_run(config_path, out_dir, ov);
    if (*sweep_cmd) return cmd_sweep(config_path, out_dir, parameter, values, jobs, ov);
    if (*check_cmd)
      return cmd_check(kappa, alpha, gamma, delta, phi_samples, t_max, t_samples);
    if (*oracle_cmd) return cmd_oracle(config_path, ov);
    if (*mesh_cmd) return cmd_mesh_info(config_path, cells, bounds);
  } catch (const gbm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const gbm::InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const gbm::SolverFailure& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
