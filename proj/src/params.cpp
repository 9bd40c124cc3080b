#include "gbm/params.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gbm/parallel.hpp"

namespace gbm {

namespace {

constexpr double kEps = 1e-12;  // regularizes the p and q denominators at (0,0)

double clamp_phi(double phi) { return std::clamp(phi, 0.0, 1.0); }
double clamp_t(double t) { return std::max(t, 0.0); }

FactorValues evaluate_factors(double phi, double t) {
  FactorValues f;
  const double pt = phi + t + kEps;
  f.p = phi / pt;
  f.q = t / pt;
  f.s = (1.0 - phi) / (t + phi + 1.0);
  f.r = t / (t * t + phi + 1.0);
  return f;
}

}  // namespace

DimensionlessParams make_params(double kappa, double alpha, double gamma, double delta) {
  DimensionlessParams p;
  p.kappa = kappa;
  p.alpha = alpha;
  p.gamma = gamma;
  p.delta = delta;
  p.chi = kappa;
  validate(p);
  return p;
}

void validate(const DimensionlessParams& p) {
  if (!(p.kappa >= 0.0) || !(p.alpha >= 0.0) || !(p.gamma >= 0.0) || !(p.delta >= 0.0))
    throw std::invalid_argument("dimensionless parameters must be nonnegative");
  if (p.chi != p.kappa)
    throw std::invalid_argument("chi must equal kappa in dimensionless variables");
}

FactorValues factors(double phi, double t) {
  if (!(phi >= -kDomainTol) || !(phi <= 1.0 + kDomainTol))
    throw std::domain_error("factors: vasculature value " + std::to_string(phi) +
                            " outside [0, 1]");
  if (!(t >= -kDomainTol))
    throw std::domain_error("factors: tumor value " + std::to_string(t) + " negative");
  return evaluate_factors(clamp_phi(phi), clamp_t(t));
}

FactorValues factors_clamped(double phi, double t) {
  return evaluate_factors(clamp_phi(phi), clamp_t(t));
}

ReactionRates reaction_rhs(double t_val, double n_val, double phi_val,
                           const DimensionlessParams& params) {
  const FactorValues f = factors(phi_val, t_val);
  const double logistic = 1.0 - (t_val + n_val + phi_val);
  ReactionRates r;
  r.t_rate = f.p * t_val * logistic - params.alpha * f.s * t_val;
  r.n_rate = params.alpha * f.s * t_val + params.delta * f.q * phi_val;
  r.phi_rate = params.gamma * f.r * phi_val * logistic - params.delta * f.q * phi_val;
  return r;
}

AdimensionalizedModel adimensionalize(const DimensionalParams& dp) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0))
      throw std::invalid_argument(std::string("dimensional parameter ") + name +
                                  " must be strictly positive");
  };
  positive(dp.nu, "nu");
  positive(dp.kappa, "kappa");
  positive(dp.rho, "rho");
  positive(dp.alpha, "alpha");
  positive(dp.gamma, "gamma");
  positive(dp.delta, "delta");
  positive(dp.capacity_k, "capacity_k");

  AdimensionalizedModel out;
  out.params = make_params(dp.capacity_k * dp.kappa / dp.nu, dp.alpha / dp.rho,
                           dp.gamma / dp.rho, dp.delta / dp.rho);
  out.time_scale = dp.rho;
  out.space_scale = std::sqrt(dp.rho / dp.nu);
  return out;
}

namespace {

// Derivative step for the grid suprema; the factor family is smooth on the
// clamped box so central differences at 1e-5 are accurate to ~1e-10.
constexpr double kFdStep = 1e-5;

double rphi(double phi, double t) { return factors_clamped(phi, t).r * clamp_phi(phi); }
double qphi(double phi, double t) { return factors_clamped(phi, t).q * clamp_phi(phi); }
double st(double phi, double t) { return factors_clamped(phi, t).s * clamp_t(t); }

template <class F>
double fd_max_abs(F&& f, double phi, double t) {
  const double dphi = (f(phi + kFdStep, t) - f(phi - kFdStep, t)) / (2.0 * kFdStep);
  const double dt = (f(phi, t + kFdStep) - f(phi, t - kFdStep)) / (2.0 * kFdStep);
  return std::max(std::abs(dphi), std::abs(dt));
}

}  // namespace

HypothesisReport check_hypotheses(const DimensionlessParams& params, int phi_samples,
                                  double t_max, int t_samples) {
  if (phi_samples < 2 || t_samples < 2)
    throw std::invalid_argument("check_hypotheses: sampling counts must be >= 2");
  if (!(t_max >= 0.0)) throw std::invalid_argument("check_hypotheses: t_max must be >= 0");

  HypothesisReport report;
  report.grid = {phi_samples, t_max, t_samples};

  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(phi_samples) * t_samples;
  auto point = [&](std::ptrdiff_t idx, double& phi, double& t) {
    const std::ptrdiff_t i = idx / t_samples;
    const std::ptrdiff_t j = idx % t_samples;
    phi = static_cast<double>(i) / (phi_samples - 1);
    t = t_max * static_cast<double>(j) / (t_samples - 1);
  };

  report.c1 = par::block_max(n, [&](std::ptrdiff_t idx) {
    double phi, t;
    point(idx, phi, t);
    const FactorValues f = factors_clamped(phi, t);
    return f.p > 0.0 ? f.r * phi / f.p : 0.0;
  });
  report.rho_condition_holds = params.kappa * params.gamma * report.c1 <= 1.0;

  report.c2 = par::block_max(n, [&](std::ptrdiff_t idx) {
    double phi, t;
    point(idx, phi, t);
    return fd_max_abs(rphi, phi, t);
  });
  report.c3 = par::block_max(n, [&](std::ptrdiff_t idx) {
    double phi, t;
    point(idx, phi, t);
    return fd_max_abs(qphi, phi, t);
  });
  report.c4 = par::block_max(n, [&](std::ptrdiff_t idx) {
    double phi, t;
    point(idx, phi, t);
    return fd_max_abs(st, phi, t);
  });
  return report;
}

}  // namespace gbm
