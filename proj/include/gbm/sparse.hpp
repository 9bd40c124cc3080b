#pragma once

#include <vector>

namespace gbm {

/// Compressed-row sparse matrix with sorted column indices per row.
struct CsrMatrix {
  int n = 0;
  std::vector<int> row_offsets;   // n+1
  std::vector<int> col_indices;   // nnz, ascending within each row
  std::vector<double> values;     // nnz

  int nnz() const { return static_cast<int>(col_indices.size()); }
};

/// y = A x. Rows are independent, so the parallel product is bit-identical
/// to the serial one.
void matvec(const CsrMatrix& a, const std::vector<double>& x, std::vector<double>& y);

struct CgOptions {
  double rel_tol = 1e-10;
  int max_iter = 0;  // 0 means 10 * n
};

struct CgReport {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

/// Jacobi-preconditioned conjugate gradients for symmetric positive definite
/// systems. Stops when ||b - A x||_2 <= rel_tol * ||b||_2; a zero right-hand
/// side returns x = 0 immediately. Non-convergence is reported, not thrown;
/// the caller decides.
CgReport cg_solve(const CsrMatrix& a, const std::vector<double>& b, std::vector<double>& x,
                  const CgOptions& opts = {});

}  // namespace gbm
