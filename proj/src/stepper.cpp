#include "gbm/stepper.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "gbm/errors.hpp"
#include "gbm/parallel.hpp"

namespace gbm {

namespace {

FactorValues node_factors(double phi, double t, bool factors_zero) {
  if (factors_zero) return {};
  return factors(phi, t);
}

}  // namespace

SimState make_state(NodalField u0, NodalField n0, NodalField phi0, double chi) {
  SimState s;
  s.u = std::move(u0);
  s.n_field = std::move(n0);
  s.phi = std::move(phi0);
  if (s.u.size() != s.n_field.size() || s.u.size() != s.phi.size())
    throw std::invalid_argument("make_state: field sizes differ");
  s.t_field.resize(s.u.size());
  par::parallel_for(
      static_cast<std::ptrdiff_t>(s.u.size()),
      [&](std::ptrdiff_t a) { s.t_field[a] = std::exp(chi * s.phi[a]) * s.u[a]; },
      par::kHeavyGrain);
  return s;
}

double phi_update(double phi_k, double r, double q, double t_k, double n_k,
                  const DimensionlessParams& params, double dt) {
  // Ordered so that numerator <= denominator holds in floating point whenever
  // phi_k <= 1, which pins the quotient inside [0, 1].
  const double growth = dt * (params.gamma * r * phi_k);
  const double loss = dt * (params.gamma * r * (t_k + n_k) + params.delta * q);
  const double numerator = phi_k + growth;
  const double denominator = (1.0 + growth) + loss;
  return numerator / denominator;
}

NodalField step_phi(const SimState& state, const DimensionlessParams& params, double dt,
                    bool factors_zero) {
  NodalField phi_next(state.phi.size());
  par::parallel_for(
      static_cast<std::ptrdiff_t>(state.phi.size()),
      [&](std::ptrdiff_t a) {
        const FactorValues f = node_factors(state.phi[a], state.t_field[a], factors_zero);
        phi_next[a] = phi_update(state.phi[a], f.r, f.q, state.t_field[a],
                                 state.n_field[a], params, dt);
      },
      par::kHeavyGrain);
  return phi_next;
}

void assemble_u_system(const SimState& state, const NodalField& phi_next,
                       const DimensionlessParams& params, double dt,
                       const StructuredTriMesh& mesh, const NodalField& mass,
                       CsrMatrix& a, std::vector<double>& b, bool factors_zero) {
  const int n = mesh.node_count();
  if (static_cast<int>(state.u.size()) != n)
    throw std::invalid_argument("assemble_u_system: state does not match mesh");

  // Weighted stiffness values; pattern buffers are shared with the mesh.
  if (a.n != n) {
    a.n = n;
    a.row_offsets = mesh.row_offsets;
    a.col_indices = mesh.col_indices;
    a.values.resize(a.col_indices.size());
  }
  std::vector<double> weight(mesh.tri_count());
  par::parallel_for(
      mesh.tri_count(),
      [&](std::ptrdiff_t t) {
        const auto& tri = mesh.triangles[t];
        const double mean =
            (state.phi[tri[0]] + state.phi[tri[1]] + state.phi[tri[2]]) / 3.0;
        weight[t] = std::exp(params.chi * mean);
      },
      par::kHeavyGrain);
  par::parallel_for(a.nnz(), [&](std::ptrdiff_t s) {
    double v = 0.0;
    for (int c = mesh.contrib_offsets[s]; c < mesh.contrib_offsets[s + 1]; ++c)
      v += weight[mesh.contrib_tri[c]] * mesh.contrib_value[c];
    a.values[s] = v;
  });

  b.resize(n);
  par::parallel_for(
      n,
      [&](std::ptrdiff_t idx) {
        const double phi_k = state.phi[idx];
        const double t_k = state.t_field[idx];
        const double n_k = state.n_field[idx];
        const FactorValues f = node_factors(phi_k, t_k, factors_zero);
        const double total = t_k + n_k + phi_k;

        const double sink =
            f.p * total + params.alpha * f.s + params.chi * params.gamma * f.r * phi_k;
        const double source =
            t_k * (f.p + params.chi * phi_k *
                             (params.gamma * f.r * total + params.delta * f.q));

        const double e_k = std::exp(params.chi * phi_k);
        const double e_next = std::exp(params.chi * phi_next[idx]);
        a.values[mesh.diag_slot[idx]] += mass[idx] * (e_k / dt + sink * e_next);
        b[idx] = mass[idx] * (e_k * state.u[idx] / dt + source);
      },
      par::kHeavyGrain);
}

NodalField step_u(const CsrMatrix& a, const std::vector<double>& b, const NodalField& u_prev,
                  const CgOptions& opts, int step, StepUReport& report) {
  NodalField u = u_prev;
  report.cg = cg_solve(a, b, u, opts);
  if (!report.cg.converged) {
    char residual[32];
    std::snprintf(residual, sizeof(residual), "%.3e", report.cg.relative_residual);
    throw SolverFailure("cg did not converge within " +
                            std::to_string(opts.max_iter > 0 ? opts.max_iter : 10 * a.n) +
                            " iterations (relative residual " + residual + ")",
                        step);
  }

  const auto n = static_cast<std::ptrdiff_t>(u.size());
  report.min_raw = par::block_min(n, [&](std::ptrdiff_t i) { return u[i]; });
  const double scale = par::block_max(n, [&](std::ptrdiff_t i) { return std::abs(u[i]); });
  if (report.min_raw < -1e-8 * scale)
    throw InvariantViolation("tumor variable went negative beyond solver round-off (min " +
                                 std::to_string(report.min_raw) + ", scale " +
                                 std::to_string(scale) + ")",
                             step);
  if (report.min_raw < 0.0)
    par::parallel_for(n, [&](std::ptrdiff_t i) {
      if (u[i] < 0.0) u[i] = 0.0;
    });
  return u;
}

NodalField step_n(const SimState& state, const NodalField& t_next,
                  const NodalField& phi_next, const DimensionlessParams& params, double dt,
                  bool factors_zero) {
  NodalField n_next(state.n_field.size());
  par::parallel_for(
      static_cast<std::ptrdiff_t>(n_next.size()),
      [&](std::ptrdiff_t a) {
        const FactorValues f = node_factors(state.phi[a], state.t_field[a], factors_zero);
        n_next[a] =
            state.n_field[a] +
            dt * (params.alpha * f.s * t_next[a] + params.delta * f.q * phi_next[a]);
      },
      par::kHeavyGrain);
  return n_next;
}

Simulation::Simulation(const StructuredTriMesh& mesh, DimensionlessParams params,
                       StepperOptions opts)
    : mesh_(mesh), params_(params), opts_(opts), mass_(lumped_mass(mesh)) {
  validate(params_);
}

void Simulation::set_state(SimState state) {
  if (static_cast<int>(state.u.size()) != mesh_.node_count())
    throw std::invalid_argument("Simulation: state does not match mesh");
  state_ = std::move(state);
}

StepDiagnostics Simulation::advance(double dt) {
  const auto start = std::chrono::steady_clock::now();
  const int next_step = state_.step + 1;
  const auto n = static_cast<std::ptrdiff_t>(state_.u.size());

  NodalField phi_next = step_phi(state_, params_, dt, opts_.factors_zero);
  assemble_u_system(state_, phi_next, params_, dt, mesh_, mass_, a_, b_,
                    opts_.factors_zero);

  StepUReport solve;
  NodalField u_next = step_u(a_, b_, state_.u, opts_.cg, next_step, solve);

  NodalField t_next(n);
  par::parallel_for(
      n,
      [&](std::ptrdiff_t a) { t_next[a] = std::exp(params_.chi * phi_next[a]) * u_next[a]; },
      par::kHeavyGrain);
  NodalField n_next = step_n(state_, t_next, phi_next, params_, dt, opts_.factors_zero);

  StepDiagnostics d;
  d.min_u_raw = solve.min_raw;
  d.cg_iterations = solve.cg.iterations;
  d.cg_residual = solve.cg.relative_residual;
  d.min_u = par::block_min(n, [&](std::ptrdiff_t i) { return u_next[i]; });
  d.max_u = par::block_max(n, [&](std::ptrdiff_t i) { return u_next[i]; });
  d.min_n = par::block_min(n, [&](std::ptrdiff_t i) { return n_next[i]; });
  d.max_n = par::block_max(n, [&](std::ptrdiff_t i) { return n_next[i]; });
  d.min_phi = par::block_min(n, [&](std::ptrdiff_t i) { return phi_next[i]; });
  d.max_phi = par::block_max(n, [&](std::ptrdiff_t i) { return phi_next[i]; });
  d.min_t = par::block_min(n, [&](std::ptrdiff_t i) { return t_next[i]; });
  d.max_t = par::block_max(n, [&](std::ptrdiff_t i) { return t_next[i]; });
  d.l1_t = par::block_sum(n, [&](std::ptrdiff_t i) { return mass_[i] * std::abs(t_next[i]); });
  d.l1_n = par::block_sum(n, [&](std::ptrdiff_t i) { return mass_[i] * std::abs(n_next[i]); });
  d.grad_l2_phi = grad_l2_norm(mesh_, phi_next);
  d.grad_l2_n = grad_l2_norm(mesh_, n_next);
  d.grad_l2_u = grad_l2_norm(mesh_, u_next);

  if (d.min_phi < 0.0 || d.max_phi > 1.0)
    throw InvariantViolation("vasculature left [0, 1]", next_step);
  if (d.min_u < 0.0 || d.min_n < 0.0 || d.min_t < 0.0)
    throw InvariantViolation("a nonnegative field went negative", next_step);

  state_.step = next_step;
  state_.time = next_step * dt;
  state_.u = std::move(u_next);
  state_.n_field = std::move(n_next);
  state_.phi = std::move(phi_next);
  state_.t_field = std::move(t_next);

  d.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return d;
}

std::vector<OdePoint> reference_ode_solve(const DimensionlessParams& params,
                                          const std::array<double, 3>& y0, double t_final,
                                          double dt_ref) {
  if (!(dt_ref > 0.0)) throw std::invalid_argument("reference_ode_solve: dt_ref must be > 0");
  auto rhs = [&](const std::array<double, 3>& y) {
    const ReactionRates r = reaction_rhs(y[0], y[1], y[2], params);
    return std::array<double, 3>{r.t_rate, r.n_rate, r.phi_rate};
  };
  auto axpy = [](const std::array<double, 3>& y, double c, const std::array<double, 3>& k) {
    return std::array<double, 3>{y[0] + c * k[0], y[1] + c * k[1], y[2] + c * k[2]};
  };

  const auto steps = static_cast<long>(std::llround(t_final / dt_ref));
  std::vector<OdePoint> series;
  series.reserve(static_cast<std::size_t>(steps) + 1);
  std::array<double, 3> y = y0;
  series.push_back({0.0, y[0], y[1], y[2]});
  for (long k = 0; k < steps; ++k) {
    const auto k1 = rhs(y);
    const auto k2 = rhs(axpy(y, 0.5 * dt_ref, k1));
    const auto k3 = rhs(axpy(y, 0.5 * dt_ref, k2));
    const auto k4 = rhs(axpy(y, dt_ref, k3));
    for (int i = 0; i < 3; ++i)
      y[i] += dt_ref / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    series.push_back({(k + 1) * dt_ref, y[0], y[1], y[2]});
  }
  return series;
}

}  // namespace gbm
