// Compares the OpenMP kernels against the serial reference implementations
// on meshes of increasing size and reports speedups.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "gbm/mesh.hpp"
#include "gbm/parallel.hpp"
#include "gbm/params.hpp"
#include "gbm/reference.hpp"
#include "gbm/scenario.hpp"
#include "gbm/sparse.hpp"
#include "gbm/stepper.hpp"

namespace {

using Clock = std::chrono::steady_clock;

template <class F>
double time_best_ms(int repeats, F&& fn) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto start = Clock::now();
    fn();
    const double ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    best = std::min(best, ms);
  }
  return best;
}

void report(const char* kernel, int cells, double serial_ms, double parallel_ms) {
  std::printf("%-22s %5dx%-5d %10.3f %10.3f %8.2fx\n", kernel, cells, cells, serial_ms,
              parallel_ms, serial_ms / parallel_ms);
}

void bench_mesh(int cells, int repeats) {
  const gbm::StructuredTriMesh mesh = gbm::build_mesh({-9.0, 9.0, -9.0, 9.0}, cells, cells);
  const int n = mesh.node_count();

  gbm::NodalField phi(n);
  for (int a = 0; a < n; ++a)
    phi[a] = 0.5 + 0.4 * std::sin(0.37 * mesh.nodes[a].x) * std::cos(0.53 * mesh.nodes[a].y);
  const double chi = 5.0;

  // weighted stiffness assembly
  gbm::CsrMatrix a_par, a_ser;
  const double t_assemble_ser =
      time_best_ms(repeats, [&] { a_ser = gbm::reference::weighted_stiffness(mesh, phi, chi); });
  const double t_assemble_par =
      time_best_ms(repeats, [&] { a_par = gbm::weighted_stiffness(mesh, phi, chi); });
  report("weighted_stiffness", cells, t_assemble_ser, t_assemble_par);

  // sparse matrix-vector product
  std::vector<double> x(n), y(n);
  for (int i = 0; i < n; ++i) x[i] = std::sin(0.001 * i);
  const int mv_repeats = repeats * 20;
  const double t_mv_ser =
      time_best_ms(repeats, [&] {
        for (int r = 0; r < mv_repeats; ++r) gbm::reference::matvec(a_ser, x, y);
      });
  const double t_mv_par = time_best_ms(repeats, [&] {
    for (int r = 0; r < mv_repeats; ++r) gbm::matvec(a_par, x, y);
  });
  report("matvec (x20)", cells, t_mv_ser, t_mv_par);

  // dot product
  volatile double sink = 0.0;
  const double t_dot_ser = time_best_ms(repeats, [&] {
    for (int r = 0; r < mv_repeats; ++r) sink = gbm::reference::dot(x, x);
  });
  const double t_dot_par = time_best_ms(repeats, [&] {
    for (int r = 0; r < mv_repeats; ++r)
      sink = gbm::par::block_sum(n, [&](std::ptrdiff_t i) { return x[i] * x[i]; });
  });
  report("dot (x20)", cells, t_dot_ser, t_dot_par);
  (void)sink;
}

void bench_advance(int cells) {
  gbm::ScenarioConfig config;
  config.cells_per_axis = cells;
  config.params = gbm::make_params(5.0, 45.0, 0.255, 2.55);

  const gbm::StructuredTriMesh mesh = gbm::build_mesh(config.domain, cells, cells);
  gbm::Simulation sim(mesh, config.params);
  gbm::InitialFields init = gbm::generate_initial_fields(config, mesh);
  sim.set_state(gbm::make_state(std::move(init.u), std::move(init.n_field),
                                std::move(init.phi), config.params.chi));

  const int steps = 200;
  const auto start = Clock::now();
  for (int k = 0; k < steps; ++k) sim.advance(config.dt);
  const double ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  std::printf("full step, %dx%d mesh: %.3f ms/step (%d threads)\n", cells, cells,
              ms / steps, gbm::par::max_threads());
}

}  // namespace

int main() {
  std::printf("threads available: %d\n\n", gbm::par::max_threads());
  std::printf("%-22s %-11s %10s %10s %9s\n", "kernel", "mesh", "serial/ms", "openmp/ms",
              "speedup");
  bench_mesh(45, 5);
  bench_mesh(180, 3);
  bench_mesh(360, 3);
  std::printf("\n");
  bench_advance(45);
  bench_advance(180);
  return 0;
}
