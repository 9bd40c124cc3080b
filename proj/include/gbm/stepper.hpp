#pragma once

#include <array>
#include <vector>

#include "gbm/mesh.hpp"
#include "gbm/params.hpp"
#include "gbm/sparse.hpp"

namespace gbm {

/// Nodal fields at one time level. The tumor field is derived:
/// t_field(a) = exp(chi * phi(a)) * u(a).
struct SimState {
  int step = 0;
  double time = 0.0;
  NodalField u;
  NodalField n_field;
  NodalField phi;
  NodalField t_field;
};

/// Builds a state at step 0 from initial fields, deriving t_field.
SimState make_state(NodalField u0, NodalField n0, NodalField phi0, double chi);

struct StepperOptions {
  CgOptions cg;
  /// Test switch: forces all four factor values to zero. Reactions vanish,
  /// the vasculature and necrosis freeze, and the u-step reduces to weighted
  /// diffusion, which conserves sum_a m_a e^{chi phi(a)} u(a).
  bool factors_zero = false;
};

/// Per-step monitors for the bounds the scheme is designed to preserve.
struct StepDiagnostics {
  double min_u = 0.0, max_u = 0.0;
  double min_n = 0.0, max_n = 0.0;
  double min_phi = 0.0, max_phi = 0.0;
  double min_t = 0.0, max_t = 0.0;
  double min_u_raw = 0.0;  ///< solver output before the round-off clamp
  double l1_t = 0.0, l1_n = 0.0;         ///< lumped L1 norms
  double grad_l2_phi = 0.0, grad_l2_n = 0.0, grad_l2_u = 0.0;
  int cg_iterations = 0;
  double cg_residual = 0.0;
  bool cg_converged = true;
  double wall_seconds = 0.0;
};

/// Closed-form semi-implicit vasculature update at one node. With phi_k in
/// [0,1] and t_k, n_k >= 0 the result stays in [0,1]; with r = q = 0 it
/// returns phi_k exactly.
double phi_update(double phi_k, double r, double q, double t_k, double n_k,
                  const DimensionlessParams& params, double dt);

/// Vasculature half-step: nodewise closed form, then tumor factors frozen at
/// level k.
NodalField step_phi(const SimState& state, const DimensionlessParams& params, double dt,
                    bool factors_zero = false);

/// Builds the symmetric positive definite u-system
///   A = diag(m e^{chi phi_k}/dt) + diag(m c_k e^{chi phi_next}) + S_w(phi_k),
///   b = m (e^{chi phi_k} u_k / dt + g_k),
/// where c_k collects the implicit sink coefficients and g_k the explicit
/// sources; both are nonnegative, so A is an M-matrix and b >= 0.
void assemble_u_system(const SimState& state, const NodalField& phi_next,
                       const DimensionlessParams& params, double dt,
                       const StructuredTriMesh& mesh, const NodalField& mass,
                       CsrMatrix& a, std::vector<double>& b, bool factors_zero = false);

struct StepUReport {
  CgReport cg;
  double min_raw = 0.0;  ///< most negative solver entry before clamping
};

/// Solves A u = b by preconditioned CG warm-started at u_prev. Negative
/// entries within 1e-8 of the solution scale are round-off and clamped to
/// zero; anything below that aborts (the M-matrix structure makes genuine
/// negatives a bug). Throws SolverFailure / InvariantViolation.
NodalField step_u(const CsrMatrix& a, const std::vector<double>& b, const NodalField& u_prev,
                  const CgOptions& opts, int step, StepUReport& report);

/// Necrosis half-step: n_next = n_k + dt (alpha s_k t_next + delta q_k
/// phi_next). Both increments are nonnegative, so necrosis never decreases.
NodalField step_n(const SimState& state, const NodalField& t_next,
                  const NodalField& phi_next, const DimensionlessParams& params, double dt,
                  bool factors_zero = false);

/// One decoupled step (vasculature, then transformed tumor, then necrosis)
/// with reusable assembly workspace.
class Simulation {
 public:
  Simulation(const StructuredTriMesh& mesh, DimensionlessParams params,
             StepperOptions opts = {});

  void set_state(SimState state);
  const SimState& state() const { return state_; }
  const StructuredTriMesh& mesh() const { return mesh_; }
  const NodalField& mass() const { return mass_; }
  const DimensionlessParams& params() const { return params_; }
  const StepperOptions& options() const { return opts_; }

  /// Advances one step of size dt and returns the step monitors. Throws
  /// SolverFailure or InvariantViolation with the step index attached.
  StepDiagnostics advance(double dt);

 private:
  const StructuredTriMesh& mesh_;
  DimensionlessParams params_;
  StepperOptions opts_;
  NodalField mass_;
  SimState state_;
  CsrMatrix a_;
  std::vector<double> b_;
};

/// One sample of the space-homogeneous kinetics.
struct OdePoint {
  double time = 0.0;
  double t_val = 0.0;
  double n_val = 0.0;
  double phi_val = 0.0;
};

/// Classical fixed-step RK4 integration of the homogeneous system. Used only
/// as a verification oracle for the PDE stepper; dt_ref should be small
/// (1e-4 in the checks).
std::vector<OdePoint> reference_ode_solve(const DimensionlessParams& params,
                                          const std::array<double, 3>& y0, double t_final,
                                          double dt_ref);

}  // namespace gbm
