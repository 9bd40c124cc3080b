#include "gbm/reference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gbm::reference {

void matvec(const CsrMatrix& a, const std::vector<double>& x, std::vector<double>& y) {
  if (static_cast<int>(x.size()) != a.n)
    throw std::invalid_argument("reference::matvec: dimension mismatch");
  y.resize(a.n);
  for (int row = 0; row < a.n; ++row) {
    double s = 0.0;
    for (int k = a.row_offsets[row]; k < a.row_offsets[row + 1]; ++k)
      s += a.values[k] * x[a.col_indices[k]];
    y[row] = s;
  }
}

double dot(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

CsrMatrix weighted_stiffness(const StructuredTriMesh& mesh, const NodalField& phi,
                             double chi) {
  CsrMatrix a;
  a.n = mesh.node_count();
  a.row_offsets = mesh.row_offsets;
  a.col_indices = mesh.col_indices;
  a.values.assign(a.col_indices.size(), 0.0);

  for (int t = 0; t < mesh.tri_count(); ++t) {
    const auto& tri = mesh.triangles[t];
    const double mean = (phi[tri[0]] + phi[tri[1]] + phi[tri[2]]) / 3.0;
    const double w = std::exp(chi * mean);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const auto begin = a.col_indices.begin() + a.row_offsets[tri[i]];
        const auto end = a.col_indices.begin() + a.row_offsets[tri[i] + 1];
        const auto slot = std::lower_bound(begin, end, tri[j]) - a.col_indices.begin();
        a.values[slot] += w * mesh.tri_local[t][3 * i + j];
      }
  }
  return a;
}

NodalField lumped_mass(const StructuredTriMesh& mesh) {
  NodalField mass(mesh.node_count(), 0.0);
  for (int t = 0; t < mesh.tri_count(); ++t)
    for (int v : mesh.triangles[t]) mass[v] += mesh.tri_area[t] / 3.0;
  return mass;
}

}  // namespace gbm::reference
