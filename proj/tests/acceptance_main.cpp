// Acceptance suite: runs every release criterion at its stated tolerance on
// the production grid (45x45 cells on (-9,9)^2, dt = 1e-3) and prints one
// PASS/FAIL line per criterion. The full-length criterion only runs with
// --full; everything else is part of the default ctest invocation.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <map>
#include <string>
#include <vector>

#include "gbm/metrics.hpp"
#include "gbm/params.hpp"
#include "gbm/rng.hpp"
#include "gbm/runner.hpp"
#include "gbm/scenario.hpp"
#include "gbm/stepper.hpp"
#include "gbm/sweep.hpp"
#include "oracles.hpp"

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int number, bool pass, const std::string& label, double seconds) {
  std::printf("[%s] criterion %2d: %s (%.1f s)\n", pass ? "PASS" : "FAIL", number,
              label.c_str(), seconds);
  if (!pass) ++failures;
}

gbm::ScenarioConfig ring_config(double kappa, double alpha) {
  gbm::ScenarioConfig c;  // defaults: (-9,9)^2, 45 cells, dt 1e-3, t_final 10
  c.params = gbm::make_params(kappa, alpha, 0.255, 2.55);
  c.output_every = 1000;
  return c;
}

gbm::ScenarioConfig blob_config(double kappa, double alpha, double gamma, double delta) {
  gbm::ScenarioConfig c = ring_config(kappa, alpha);
  c.params = gbm::make_params(kappa, alpha, gamma, delta);
  c.vasculature_ic.kind = gbm::VasculatureIcKind::kBlobs;
  return c;
}

struct RunSummary {
  bool ok = false;
  double min_phi = 0.0, max_phi = 0.0, min_u = 0.0, min_n = 0.0, min_t = 0.0;
  double final_rq = 0.0, final_sq = 0.0, final_int_total = 0.0;
};

std::map<std::string, RunSummary> run_cache;

RunSummary summarize(const std::string& key, const gbm::ScenarioConfig& config) {
  auto it = run_cache.find(key);
  if (it != run_cache.end()) return it->second;
  const gbm::RunResult r = gbm::run(config);
  RunSummary s;
  s.ok = r.ok();
  s.min_phi = r.min_phi;
  s.max_phi = r.max_phi;
  s.min_u = r.min_u;
  s.min_n = r.min_n;
  s.min_t = r.min_t;
  if (!r.series.empty()) {
    s.final_rq = r.series.back().rq;
    s.final_sq = r.series.back().sq;
    s.final_int_total = r.series.back().int_total;
  }
  run_cache[key] = s;
  return s;
}

bool bounds_hold(const RunSummary& s) {
  return s.ok && s.min_phi >= 0.0 && s.max_phi <= 1.0 && s.min_u >= -1e-12 &&
         s.min_n >= 0.0 && s.min_t >= -1e-12;
}

void criterion_1_maximum_principle() {
  const auto start = Clock::now();
  const RunSummary uniform = summarize("ring:5:45", ring_config(5.0, 45.0));
  const RunSummary blobs = summarize("blob:5:45:0.255:2.55",
                                     blob_config(5.0, 45.0, 0.255, 2.55));
  const bool pass = bounds_hold(uniform) && bounds_hold(blobs);
  report(1, pass,
         "discrete maximum principle over 10,000 steps, uniform and blob vasculature",
         std::chrono::duration<double>(Clock::now() - start).count());
}

void criterion_2_m_matrix() {
  const auto start = Clock::now();
  const gbm::StructuredTriMesh mesh = gbm::build_mesh({-9, 9, -9, 9}, 45, 45);
  gbm::SplitMix64 rng(20240917);
  bool pass = true;
  for (int rep = 0; rep < 100 && pass; ++rep) {
    gbm::NodalField phi(mesh.node_count());
    for (double& v : phi) v = rng.next_double();
    const gbm::CsrMatrix s = gbm::weighted_stiffness(mesh, phi, 5.0);
    for (int row = 0; row < s.n && pass; ++row) {
      double sum = 0.0;
      for (int k = s.row_offsets[row]; k < s.row_offsets[row + 1]; ++k) {
        if (s.col_indices[k] != row && s.values[k] > 1e-14) pass = false;
        sum += s.values[k];
      }
      if (std::abs(sum) > 1e-12) pass = false;
    }
  }
  report(2, pass, "M-matrix structure for 100 random admissible weight fields",
         std::chrono::duration<double>(Clock::now() - start).count());
}

void criterion_3_homogeneous_oracle() {
  const auto start = Clock::now();
  const gbm::DimensionlessParams params = gbm::make_params(5.0, 45.0, 0.255, 2.55);
  const gbm::StructuredTriMesh mesh = gbm::build_mesh({-9, 9, -9, 9}, 45, 45);
  const std::array<double, 3> y0{0.1, 0.0, 0.3};
  const auto ode = gbm::reference_ode_solve(params, y0, 1.0, 1e-4);
  const gbm::OdePoint& ref = ode.back();

  auto fem_error = [&](double dt) {
    gbm::Simulation sim(mesh, params);
    const int nn = mesh.node_count();
    sim.set_state(gbm::make_state(
        gbm::NodalField(nn, std::exp(-params.chi * y0[2]) * y0[0]),
        gbm::NodalField(nn, y0[1]), gbm::NodalField(nn, y0[2]), params.chi));
    const long steps = std::lround(1.0 / dt);
    for (long k = 0; k < steps; ++k) sim.advance(dt);
    double err = 0.0;
    const gbm::SimState& s = sim.state();
    for (int a = 0; a < nn; ++a) {
      err = std::max(err, std::abs(s.t_field[a] - ref.t_val));
      err = std::max(err, std::abs(s.n_field[a] - ref.n_val));
      err = std::max(err, std::abs(s.phi[a] - ref.phi_val));
    }
    return err;
  };

  const double coarse = fem_error(2e-3);
  const double fine = fem_error(1e-3);
  const double ratio = coarse / fine;
  const bool pass = coarse <= 50.0 * 2e-3 && ratio >= 1.7 && ratio <= 2.3;
  char label[160];
  std::snprintf(label, sizeof(label),
                "homogeneous RK4 oracle: err(2e-3) = %.3e, halving ratio = %.2f", coarse,
                ratio);
  report(3, pass, label, std::chrono::duration<double>(Clock::now() - start).count());
}

void criterion_4_conservation() {
  const auto start = Clock::now();
  const gbm::StructuredTriMesh mesh = gbm::build_mesh({-9, 9, -9, 9}, 45, 45);
  const gbm::NodalField mass = gbm::lumped_mass(mesh);
  const gbm::DimensionlessParams params = gbm::make_params(5.0, 45.0, 0.255, 2.55);

  gbm::ScenarioConfig ic = blob_config(5.0, 45.0, 0.255, 2.55);
  gbm::InitialFields fields = gbm::generate_initial_fields(ic, mesh);

  gbm::StepperOptions opts;
  opts.factors_zero = true;
  opts.cg.rel_tol = 1e-12;
  gbm::Simulation sim(mesh, params, opts);
  sim.set_state(gbm::make_state(std::move(fields.u), std::move(fields.n_field),
                                std::move(fields.phi), params.chi));

  auto weighted_mass = [&] {
    double sum = 0.0;
    const gbm::SimState& s = sim.state();
    for (int a = 0; a < mesh.node_count(); ++a)
      sum += mass[a] * std::exp(params.chi * s.phi[a]) * s.u[a];
    return sum;
  };

  const double initial = weighted_mass();
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    sim.advance(1e-3);
    worst = std::max(worst, std::abs(weighted_mass() - initial) / initial);
  }
  char label[128];
  std::snprintf(label, sizeof(label),
                "reactions-off weighted mass drift %.2e over 1,000 steps", worst);
  report(4, worst < 1e-9, label,
         std::chrono::duration<double>(Clock::now() - start).count());
}

void criterion_5_ring_quotient_trend() {
  const auto start = Clock::now();
  const RunSummary a10 = summarize("ring:5:10", ring_config(5.0, 10.0));
  const RunSummary a100 = summarize("ring:5:100", ring_config(5.0, 100.0));
  const RunSummary k1 = summarize("ring:1:45", ring_config(1.0, 45.0));
  const RunSummary k10 = summarize("ring:10:45", ring_config(10.0, 45.0));

  const double alpha_spread = std::abs(a10.final_rq - a100.final_rq);
  const double kappa_spread = std::abs(k1.final_rq - k10.final_rq);
  const bool pass = a10.ok && a100.ok && k1.ok && k10.ok &&
                    a100.final_rq < a10.final_rq && kappa_spread < alpha_spread;
  char label[160];
  std::snprintf(label, sizeof(label),
                "ring quotient: RQ(a=100) = %.2e < RQ(a=10) = %.2e, spreads k %.2e < a %.2e",
                a100.final_rq, a10.final_rq, kappa_spread, alpha_spread);
  report(5, pass, label, std::chrono::duration<double>(Clock::now() - start).count());
}

void criterion_6_total_density_trend() {
  const auto start = Clock::now();
  const RunSummary a10 = summarize("ring:5:10", ring_config(5.0, 10.0));
  const RunSummary a45 = summarize("ring:5:45", ring_config(5.0, 45.0));
  const RunSummary a100 = summarize("ring:5:100", ring_config(5.0, 100.0));
  const bool pass = a10.ok && a45.ok && a100.ok &&
                    a10.final_int_total > a45.final_int_total &&
                    a45.final_int_total > a100.final_int_total;
  char label[160];
  std::snprintf(label, sizeof(label),
                "total density decreasing in alpha: %.4f > %.4f > %.4f", a10.final_int_total,
                a45.final_int_total, a100.final_int_total);
  report(6, pass, label, std::chrono::duration<double>(Clock::now() - start).count());
}

void criterion_7_surface_quotient_trend() {
  const auto start = Clock::now();
  const RunSummary k1 = summarize("blob:1:45:0.255:2.55", blob_config(1, 45, 0.255, 2.55));
  const RunSummary k10 = summarize("blob:10:45:0.255:2.55", blob_config(10, 45, 0.255, 2.55));
  const RunSummary glo = summarize("blob:5:45:0.01:2.55", blob_config(5, 45, 0.01, 2.55));
  const RunSummary ghi = summarize("blob:5:45:0.5:2.55", blob_config(5, 45, 0.5, 2.55));
  const RunSummary dlo = summarize("blob:5:45:0.255:0.1", blob_config(5, 45, 0.255, 0.1));
  const RunSummary dhi = summarize("blob:5:45:0.255:5", blob_config(5, 45, 0.255, 5));

  const double kappa_spread = std::abs(k1.final_sq - k10.final_sq);
  const double gamma_spread = std::abs(glo.final_sq - ghi.final_sq);
  const double delta_spread = std::abs(dlo.final_sq - dhi.final_sq);
  const bool pass = k1.ok && k10.ok && glo.ok && ghi.ok && dlo.ok && dhi.ok &&
                    k10.final_sq < k1.final_sq && gamma_spread < kappa_spread &&
                    delta_spread < kappa_spread;
  char label[200];
  std::snprintf(label, sizeof(label),
                "surface quotient: SQ(k=10) = %.3f < SQ(k=1) = %.3f; spreads g %.2e, d "
                "%.2e < k %.2e",
                k10.final_sq, k1.final_sq, gamma_spread, delta_spread, kappa_spread);
  report(7, pass, label, std::chrono::duration<double>(Clock::now() - start).count());
}

void criterion_8_geometry_oracle() {
  const auto start = Clock::now();
  gbm::SplitMix64 rng(0xC1BC1Eull);
  bool pass = true;
  for (int rep = 0; rep < 200 && pass; ++rep) {
    const int count = 1 + static_cast<int>(rng.next_below(25));
    std::vector<gbm::Vec2> pts(static_cast<std::size_t>(count));
    for (auto& p : pts) {
      p.x = rng.next_double(-9.0, 9.0);
      p.y = rng.next_double(-9.0, 9.0);
    }
    const gbm::Circle fast = gbm::min_enclosing_circle(pts);
    const oracles::BruteCircle brute = oracles::brute_force_enclosing_circle(pts);
    if (std::abs(fast.radius - brute.r) > 1e-12 * (1.0 + brute.r)) pass = false;
    if (!oracles::brute_contains_all(pts, fast.center.x, fast.center.y,
                                     fast.radius * (1.0 + 1e-12)))
      pass = false;
  }
  report(8, pass, "minimal enclosing circle equals brute force on 200 seeded point sets",
         std::chrono::duration<double>(Clock::now() - start).count());
}

void criterion_9_hypothesis_checker() {
  const auto start = Clock::now();
  const gbm::DimensionlessParams params = gbm::make_params(5.0, 45.0, 0.255, 2.55);
  const gbm::HypothesisReport report_out = gbm::check_hypotheses(params, 201, 10.0, 1001);

  // independently coded dense search over the same grid
  double best = 0.0;
  for (int i = 0; i < 201; ++i) {
    const double phi = static_cast<double>(i) / 200.0;
    for (int j = 0; j < 1001; ++j) {
      const double t = 10.0 * static_cast<double>(j) / 1000.0;
      const gbm::FactorValues f = gbm::factors(phi, t);
      if (f.p > 0.0) {
        const double ratio = f.r * phi / f.p;
        if (ratio > best) best = ratio;
      }
    }
  }
  bool pass = std::abs(report_out.c1 - best) <= 1e-12;

  // monotonicity at every adjacent grid pair
  for (int i = 0; i < 201 && pass; ++i) {
    const double phi = i / 200.0;
    for (int j = 0; j + 1 < 1001 && pass; ++j) {
      const gbm::FactorValues lo = gbm::factors(phi, 10.0 * j / 1000.0);
      const gbm::FactorValues hi = gbm::factors(phi, 10.0 * (j + 1) / 1000.0);
      if (hi.q < lo.q) pass = false;
      if (10.0 * (j + 1) / 1000.0 <= 1.0 && hi.r < lo.r) pass = false;
    }
  }
  for (int j = 0; j < 1001 && pass; ++j) {
    const double t = 10.0 * j / 1000.0;
    for (int i = 0; i + 1 < 201 && pass; ++i) {
      const gbm::FactorValues lo = gbm::factors(i / 200.0, t);
      const gbm::FactorValues hi = gbm::factors((i + 1) / 200.0, t);
      if (hi.p < lo.p) pass = false;
      if (hi.s > lo.s) pass = false;
    }
  }
  char label[160];
  std::snprintf(label, sizeof(label),
                "growth-control sup c1 = %.12f matches dense search; factors monotone",
                report_out.c1);
  report(9, pass, label, std::chrono::duration<double>(Clock::now() - start).count());
}

void criterion_10_full_length(bool requested) {
  if (!requested) {
    std::printf("[SKIP] criterion 10: full-length run (t_final = 500); pass --full to run\n");
    return;
  }
  const auto start = Clock::now();
  gbm::ScenarioConfig config = ring_config(5.0, 45.0);
  config.t_final = 500.0;
  config.output_every = 10000;
  const gbm::RunResult r = gbm::run(config);
  const bool pass = r.ok() && r.min_phi >= 0.0 && r.max_phi <= 1.0 && r.min_u >= -1e-12 &&
                    r.min_n >= 0.0 && r.min_t >= -1e-12;
  char label[128];
  std::snprintf(label, sizeof(label), "full-length run: %d steps to t = %.0f",
                r.steps_completed, r.time_reached);
  report(10, pass, label, std::chrono::duration<double>(Clock::now() - start).count());
}

}  // namespace

int main(int argc, char** argv) {
  bool full = false;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--full") == 0) full = true;

  criterion_1_maximum_principle();
  criterion_2_m_matrix();
  criterion_3_homogeneous_oracle();
  criterion_4_conservation();
  criterion_5_ring_quotient_trend();
  criterion_6_total_density_trend();
  criterion_7_surface_quotient_trend();
  criterion_8_geometry_oracle();
  criterion_9_hypothesis_checker();
  criterion_10_full_length(full);

  if (failures == 0) {
    std::printf("acceptance: all criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) FAILED\n", failures);
  return 1;
}
