#pragma once

#include <array>
#include <functional>
#include <vector>

#include "gbm/sparse.hpp"

namespace gbm {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// One value per mesh node, in node-index order.
using NodalField = std::vector<double>;

struct Rect {
  double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;
  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  bool operator==(const Rect&) const = default;
};

/// Which cell diagonal splits each cell into two right triangles. Both
/// choices give nonobtuse conforming meshes; the anti-diagonal variant exists
/// so mirror-symmetry tests can compare against a reflected mesh.
enum class Diagonal { kMain, kAnti };

/// Structured triangulation of a rectangle into 2*nx*ny right triangles with
/// conforming piecewise-linear elements. All geometry and assembly metadata
/// is precomputed once: per-triangle basis gradients and local stiffness,
/// the CSR sparsity pattern of the node graph, per-slot element contribution
/// lists (for weight-only reassembly each time step), and node->triangle
/// incidence. Immutable after build_mesh.
struct StructuredTriMesh {
  Rect bounds;
  int nx = 0, ny = 0;
  double hx = 0.0, hy = 0.0;
  Diagonal diagonal = Diagonal::kMain;

  std::vector<Vec2> nodes;                       // (nx+1)*(ny+1)
  std::vector<std::array<int, 3>> triangles;     // 2*nx*ny, CCW
  std::vector<double> tri_area;
  std::vector<std::array<Vec2, 3>> tri_grad;     // P1 basis gradients
  std::vector<std::array<double, 9>> tri_local;  // area * grad_i . grad_j

  // CSR pattern of the node adjacency graph (diagonal included, sorted).
  std::vector<int> row_offsets;
  std::vector<int> col_indices;
  std::vector<int> diag_slot;  // CSR slot of (a, a)

  // Contribution lists: stiffness value of slot s is
  //   sum over c in [contrib_offsets[s], contrib_offsets[s+1]) of
  //   weight[contrib_tri[c]] * contrib_value[c],
  // with entries stored in ascending triangle order.
  std::vector<int> contrib_offsets;
  std::vector<int> contrib_tri;
  std::vector<double> contrib_value;

  // Triangles incident to each node, ascending.
  std::vector<int> node_tri_offsets;
  std::vector<int> node_tris;

  int node_count() const { return static_cast<int>(nodes.size()); }
  int tri_count() const { return static_cast<int>(triangles.size()); }
  int node_index(int i, int j) const { return j * (nx + 1) + i; }
};

/// Throws std::invalid_argument for degenerate bounds or zero cell counts.
StructuredTriMesh build_mesh(const Rect& bounds, int nx, int ny,
                             Diagonal diagonal = Diagonal::kMain);

/// Diagonal of the consistent P1 mass matrix after row lumping:
/// m_a = sum of area/3 over triangles containing a. Entries are positive and
/// sum to the domain area.
NodalField lumped_mass(const StructuredTriMesh& mesh);

/// Stiffness matrix of the weighted form with per-element weight
/// exp(chi * mean of the three nodal phi values). Symmetric, nonpositive
/// off-diagonals (the mesh is nonobtuse), zero row sums up to round-off.
CsrMatrix weighted_stiffness(const StructuredTriMesh& mesh, const NodalField& phi,
                             double chi);

/// Mass-lumped inner product sum_a f(a) g(a) m_a.
double lumped_inner(const StructuredTriMesh& mesh, const NodalField& mass,
                    const NodalField& f, const NodalField& g);

struct AngleCheck {
  bool nonobtuse = false;
  double worst_angle = 0.0;  // radians
};

/// True iff every triangle angle is <= pi/2 + 1e-12.
AngleCheck nonobtuse_check(const StructuredTriMesh& mesh);

/// Samples a scalar function at the mesh nodes. Throws std::domain_error on a
/// non-finite sample.
NodalField nodal_interpolate(const std::function<double(double, double)>& f,
                             const StructuredTriMesh& mesh);

/// L2 norm of the piecewise-constant P1 gradient of a nodal field.
double grad_l2_norm(const StructuredTriMesh& mesh, const NodalField& f);

}  // namespace gbm
