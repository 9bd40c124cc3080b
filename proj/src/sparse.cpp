#include "gbm/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gbm/parallel.hpp"

namespace gbm {

void matvec(const CsrMatrix& a, const std::vector<double>& x, std::vector<double>& y) {
  if (static_cast<int>(x.size()) != a.n)
    throw std::invalid_argument("matvec: dimension mismatch");
  y.resize(a.n);
  par::parallel_for(a.n, [&](std::ptrdiff_t row) {
    double s = 0.0;
    for (int k = a.row_offsets[row]; k < a.row_offsets[row + 1]; ++k)
      s += a.values[k] * x[a.col_indices[k]];
    y[row] = s;
  });
}

namespace {

double dot(const std::vector<double>& x, const std::vector<double>& y) {
  return par::block_sum(static_cast<std::ptrdiff_t>(x.size()),
                        [&](std::ptrdiff_t i) { return x[i] * y[i]; });
}

}  // namespace

CgReport cg_solve(const CsrMatrix& a, const std::vector<double>& b, std::vector<double>& x,
                  const CgOptions& opts) {
  const int n = a.n;
  if (static_cast<int>(b.size()) != n)
    throw std::invalid_argument("cg_solve: dimension mismatch");
  if (!(opts.rel_tol > 0.0) || !(opts.rel_tol < 1.0))
    throw std::invalid_argument("cg_solve: rel_tol must lie in (0, 1)");
  x.resize(n);
  const int max_iter = opts.max_iter > 0 ? opts.max_iter : 10 * n;

  CgReport report;
  const double b_max =
      par::block_max(n, [&](std::ptrdiff_t i) { return std::abs(b[i]); });
  if (b_max == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    report.converged = true;
    return report;
  }

  // Rescale by a power of two near ||b||_inf: exact in floating point, and it
  // keeps the squared quantities inside the iteration in the normal range
  // even when the solution has decayed to ~1e-300 scales, where raw dot
  // products would underflow and break the recurrences.
  int b_exp = 0;
  std::frexp(b_max, &b_exp);
  const double scale = std::ldexp(1.0, std::clamp(b_exp, -1021, 1021));
  std::vector<double> bs(n);
  par::parallel_for(n, [&](std::ptrdiff_t i) {
    bs[i] = b[i] / scale;
    x[i] /= scale;
  });

  std::vector<double> inv_diag(n);
  par::parallel_for(n, [&](std::ptrdiff_t row) {
    double d = 0.0;
    for (int k = a.row_offsets[row]; k < a.row_offsets[row + 1]; ++k)
      if (a.col_indices[k] == static_cast<int>(row)) d = a.values[k];
    inv_diag[row] = d != 0.0 ? 1.0 / d : 1.0;
  });

  std::vector<double> r(n), z(n), p(n), ap(n);
  matvec(a, x, ap);
  par::parallel_for(n, [&](std::ptrdiff_t i) {
    r[i] = bs[i] - ap[i];
    z[i] = inv_diag[i] * r[i];
    p[i] = z[i];
  });
  const double b_norm = std::sqrt(dot(bs, bs));

  double rz = dot(r, z);
  double r_norm = std::sqrt(dot(r, r));
  const double target = opts.rel_tol * b_norm;

  while (r_norm > target && report.iterations < max_iter) {
    matvec(a, p, ap);
    const double p_ap = dot(p, ap);
    if (!(p_ap > 0.0)) break;  // matrix not positive definite along p
    const double step = rz / p_ap;
    par::parallel_for(n, [&](std::ptrdiff_t i) {
      x[i] += step * p[i];
      r[i] -= step * ap[i];
      z[i] = inv_diag[i] * r[i];
    });
    const double rz_next = dot(r, z);
    const double correction = rz_next / rz;
    par::parallel_for(n, [&](std::ptrdiff_t i) { p[i] = z[i] + correction * p[i]; });
    rz = rz_next;
    r_norm = std::sqrt(dot(r, r));
    ++report.iterations;
  }

  par::parallel_for(n, [&](std::ptrdiff_t i) { x[i] *= scale; });
  report.relative_residual = r_norm / b_norm;
  report.converged = r_norm <= target;
  return report;
}

}  // namespace gbm
