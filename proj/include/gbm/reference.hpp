#pragma once

#include "gbm/mesh.hpp"
#include "gbm/sparse.hpp"

namespace gbm::reference {

/// Plain serial kernels, written independently of the OpenMP production
/// paths. Tests pin the production kernels against these; the benchmark tool
/// compares their timings.

/// Textbook row-by-row product.
void matvec(const CsrMatrix& a, const std::vector<double>& x, std::vector<double>& y);

/// Straight left-to-right accumulation.
double dot(const std::vector<double>& x, const std::vector<double>& y);

/// Element-by-element scatter assembly of the weighted stiffness matrix.
CsrMatrix weighted_stiffness(const StructuredTriMesh& mesh, const NodalField& phi,
                             double chi);

/// Scatter-assembled lumped mass.
NodalField lumped_mass(const StructuredTriMesh& mesh);

}  // namespace gbm::reference
