#pragma once

namespace gbm {

/// Physical model coefficients before rescaling. Units are labels only; the
/// adimensionalization map is algebraic.
struct DimensionalParams {
  double nu = 0.0;          ///< diffusion speed, cm^2/s
  double kappa = 0.0;       ///< chemotaxis speed, cm^2/(s * density)
  double rho = 0.0;         ///< tumor proliferation rate, 1/day
  double alpha = 0.0;       ///< hypoxic death rate, 1/day
  double gamma = 0.0;       ///< vasculature proliferation rate, 1/day
  double delta = 0.0;       ///< vasculature destruction rate, 1/day
  double capacity_k = 0.0;  ///< carrying capacity, cell/cm^3
};

/// The four coefficients that survive rescaling (diffusion, proliferation and
/// capacity are normalized to 1), plus the exponent chi of the change of
/// variable T = e^{chi * Phi} * u. In these variables chi equals kappa.
struct DimensionlessParams {
  double kappa = 0.0;
  double alpha = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
  double chi = 0.0;
  bool operator==(const DimensionlessParams&) const = default;
};

/// Builds a parameter set with chi tied to kappa.
DimensionlessParams make_params(double kappa, double alpha, double gamma, double delta);

/// Throws std::invalid_argument unless all fields are nonnegative and
/// chi == kappa.
void validate(const DimensionlessParams& p);

/// Volume fractions controlling proliferation (p), hypoxia (s), vasculature
/// growth (r) and vascular destruction (q). All values lie in [0, 1].
struct FactorValues {
  double p = 0.0;
  double s = 0.0;
  double r = 0.0;
  double q = 0.0;
};

/// Evaluates the factor family
///   p = Phi/(Phi+T),  s = (1-Phi)/(T+Phi+1),
///   r = T/(T^2+Phi+1), q = T/(Phi+T),
/// with 1e-12 added to the p and q denominators so both are 0 at the corner
/// (0,0). Inputs within kDomainTol of the box [0,1] x [0,inf) are clamped
/// onto it; anything further out throws std::domain_error.
FactorValues factors(double phi, double t);

/// Same evaluation but clamping arbitrarily far inputs instead of throwing.
/// Used by finite-difference probes that step outside the box.
FactorValues factors_clamped(double phi, double t);

/// Tolerance around the admissible box accepted by factors().
inline constexpr double kDomainTol = 1e-12;

/// Right-hand sides of the rescaled kinetics at one point.
struct ReactionRates {
  double t_rate = 0.0;    ///< tumor:       p*T*(1-(T+N+Phi)) - alpha*s*T
  double n_rate = 0.0;    ///< necrosis:    alpha*s*T + delta*q*Phi
  double phi_rate = 0.0;  ///< vasculature: gamma*r*Phi*(1-(T+N+Phi)) - delta*q*Phi
};

ReactionRates reaction_rhs(double t_val, double n_val, double phi_val,
                           const DimensionlessParams& params);

struct AdimensionalizedModel {
  DimensionlessParams params;
  double time_scale = 0.0;   ///< rho: t_dimless = rho * t
  double space_scale = 0.0;  ///< sqrt(rho/nu): x_dimless = sqrt(rho/nu) * x
};

/// Maps seven dimensional coefficients onto the four dimensionless ones:
/// kappa* = K*kappa/nu, alpha* = alpha/rho, gamma* = gamma/rho,
/// delta* = delta/rho. Throws std::invalid_argument unless every dimensional
/// field is strictly positive.
AdimensionalizedModel adimensionalize(const DimensionalParams& dp);

struct HypothesisGrid {
  int phi_samples = 0;
  double t_max = 0.0;
  int t_samples = 0;
};

/// Grid suprema standing in for the growth-control constants the boundedness
/// analysis assumes to exist. c1 bounds r*Phi/p; c2..c4 bound the partial
/// derivatives of r*Phi, q*Phi and s*T.
struct HypothesisReport {
  double c1 = 0.0;
  bool rho_condition_holds = false;  ///< 1 >= kappa * gamma * c1
  double c2 = 0.0;
  double c3 = 0.0;
  double c4 = 0.0;
  HypothesisGrid grid;
};

/// Samples the factor family on a uniform (Phi, T) grid over
/// [0,1] x [0,t_max]. Points with p = 0 contribute 0 to c1 (there r*Phi = 0
/// as well). Derivative suprema use central differences with step 1e-5 on
/// clamped evaluations. A failed rho-condition is reported, never thrown.
HypothesisReport check_hypotheses(const DimensionlessParams& params, int phi_samples,
                                  double t_max, int t_samples);

}  // namespace gbm
