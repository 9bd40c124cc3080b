#include "gbm/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gbm/parallel.hpp"

namespace gbm {

namespace {

int find_slot(const StructuredTriMesh& mesh, int row, int col) {
  const auto begin = mesh.col_indices.begin() + mesh.row_offsets[row];
  const auto end = mesh.col_indices.begin() + mesh.row_offsets[row + 1];
  const auto it = std::lower_bound(begin, end, col);
  return static_cast<int>(it - mesh.col_indices.begin());
}

void precompute_element(StructuredTriMesh& mesh, int t) {
  const auto& tri = mesh.triangles[t];
  const Vec2 p0 = mesh.nodes[tri[0]];
  const Vec2 p1 = mesh.nodes[tri[1]];
  const Vec2 p2 = mesh.nodes[tri[2]];
  const double two_area = (p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y);
  if (!(two_area > 0.0)) throw std::invalid_argument("mesh triangle with nonpositive area");
  const double area = 0.5 * two_area;
  mesh.tri_area[t] = area;

  // grad phi_i = (y_j - y_k, x_k - x_j) / (2 area), (i, j, k) cyclic
  const Vec2 p[3] = {p0, p1, p2};
  for (int i = 0; i < 3; ++i) {
    const Vec2& pj = p[(i + 1) % 3];
    const Vec2& pk = p[(i + 2) % 3];
    mesh.tri_grad[t][i] = {(pj.y - pk.y) / two_area, (pk.x - pj.x) / two_area};
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const Vec2 gi = mesh.tri_grad[t][i];
      const Vec2 gj = mesh.tri_grad[t][j];
      mesh.tri_local[t][3 * i + j] = area * (gi.x * gj.x + gi.y * gj.y);
    }
}

}  // namespace

StructuredTriMesh build_mesh(const Rect& bounds, int nx, int ny, Diagonal diagonal) {
  if (!(bounds.width() > 0.0) || !(bounds.height() > 0.0))
    throw std::invalid_argument("build_mesh: degenerate bounds");
  if (nx < 1 || ny < 1) throw std::invalid_argument("build_mesh: cell counts must be >= 1");

  StructuredTriMesh mesh;
  mesh.bounds = bounds;
  mesh.nx = nx;
  mesh.ny = ny;
  mesh.hx = bounds.width() / nx;
  mesh.hy = bounds.height() / ny;
  mesh.diagonal = diagonal;

  mesh.nodes.resize(static_cast<std::size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      const double x = (i == nx) ? bounds.xmax : bounds.xmin + i * mesh.hx;
      const double y = (j == ny) ? bounds.ymax : bounds.ymin + j * mesh.hy;
      mesh.nodes[mesh.node_index(i, j)] = {x, y};
    }

  mesh.triangles.reserve(static_cast<std::size_t>(2) * nx * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int a = mesh.node_index(i, j);
      const int b = mesh.node_index(i + 1, j);
      const int c = mesh.node_index(i + 1, j + 1);
      const int d = mesh.node_index(i, j + 1);
      if (diagonal == Diagonal::kMain) {
        mesh.triangles.push_back({a, b, c});
        mesh.triangles.push_back({a, c, d});
      } else {
        mesh.triangles.push_back({a, b, d});
        mesh.triangles.push_back({b, c, d});
      }
    }

  const int nt = mesh.tri_count();
  mesh.tri_area.resize(nt);
  mesh.tri_grad.resize(nt);
  mesh.tri_local.resize(nt);
  for (int t = 0; t < nt; ++t) precompute_element(mesh, t);

  // Sparsity pattern of the node graph.
  const int nn = mesh.node_count();
  std::vector<std::vector<int>> adjacency(nn);
  for (int a = 0; a < nn; ++a) adjacency[a].push_back(a);
  for (const auto& tri : mesh.triangles)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (i != j) adjacency[tri[i]].push_back(tri[j]);

  mesh.row_offsets.assign(nn + 1, 0);
  for (int a = 0; a < nn; ++a) {
    auto& row = adjacency[a];
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    mesh.row_offsets[a + 1] = mesh.row_offsets[a] + static_cast<int>(row.size());
  }
  mesh.col_indices.reserve(mesh.row_offsets[nn]);
  for (int a = 0; a < nn; ++a)
    mesh.col_indices.insert(mesh.col_indices.end(), adjacency[a].begin(), adjacency[a].end());
  mesh.diag_slot.resize(nn);
  for (int a = 0; a < nn; ++a) mesh.diag_slot[a] = find_slot(mesh, a, a);

  // Per-slot contribution lists, in ascending triangle order so that gather
  // assembly reproduces serial scatter assembly bit for bit.
  const int nnz = static_cast<int>(mesh.col_indices.size());
  std::vector<std::vector<std::pair<int, double>>> slot_contribs(nnz);
  for (int t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangles[t];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const int slot = find_slot(mesh, tri[i], tri[j]);
        slot_contribs[slot].emplace_back(t, mesh.tri_local[t][3 * i + j]);
      }
  }
  mesh.contrib_offsets.assign(nnz + 1, 0);
  for (int s = 0; s < nnz; ++s)
    mesh.contrib_offsets[s + 1] =
        mesh.contrib_offsets[s] + static_cast<int>(slot_contribs[s].size());
  mesh.contrib_tri.reserve(mesh.contrib_offsets[nnz]);
  mesh.contrib_value.reserve(mesh.contrib_offsets[nnz]);
  for (int s = 0; s < nnz; ++s)
    for (const auto& [t, v] : slot_contribs[s]) {
      mesh.contrib_tri.push_back(t);
      mesh.contrib_value.push_back(v);
    }

  // Node -> triangle incidence, ascending.
  std::vector<std::vector<int>> incidence(nn);
  for (int t = 0; t < nt; ++t)
    for (int v : mesh.triangles[t]) incidence[v].push_back(t);
  mesh.node_tri_offsets.assign(nn + 1, 0);
  for (int a = 0; a < nn; ++a)
    mesh.node_tri_offsets[a + 1] =
        mesh.node_tri_offsets[a] + static_cast<int>(incidence[a].size());
  mesh.node_tris.reserve(mesh.node_tri_offsets[nn]);
  for (int a = 0; a < nn; ++a)
    mesh.node_tris.insert(mesh.node_tris.end(), incidence[a].begin(), incidence[a].end());

  return mesh;
}

NodalField lumped_mass(const StructuredTriMesh& mesh) {
  NodalField mass(mesh.node_count());
  par::parallel_for(mesh.node_count(), [&](std::ptrdiff_t a) {
    double m = 0.0;
    for (int k = mesh.node_tri_offsets[a]; k < mesh.node_tri_offsets[a + 1]; ++k)
      m += mesh.tri_area[mesh.node_tris[k]] / 3.0;
    mass[a] = m;
  });
  return mass;
}

CsrMatrix weighted_stiffness(const StructuredTriMesh& mesh, const NodalField& phi,
                             double chi) {
  if (static_cast<int>(phi.size()) != mesh.node_count())
    throw std::invalid_argument("weighted_stiffness: field size mismatch");

  std::vector<double> weight(mesh.tri_count());
  par::parallel_for(
      mesh.tri_count(),
      [&](std::ptrdiff_t t) {
        const auto& tri = mesh.triangles[t];
        const double mean = (phi[tri[0]] + phi[tri[1]] + phi[tri[2]]) / 3.0;
        weight[t] = std::exp(chi * mean);
      },
      par::kHeavyGrain);

  CsrMatrix a;
  a.n = mesh.node_count();
  a.row_offsets = mesh.row_offsets;
  a.col_indices = mesh.col_indices;
  a.values.resize(a.col_indices.size());
  par::parallel_for(a.nnz(), [&](std::ptrdiff_t s) {
    double v = 0.0;
    for (int c = mesh.contrib_offsets[s]; c < mesh.contrib_offsets[s + 1]; ++c)
      v += weight[mesh.contrib_tri[c]] * mesh.contrib_value[c];
    a.values[s] = v;
  });
  return a;
}

double lumped_inner(const StructuredTriMesh& mesh, const NodalField& mass,
                    const NodalField& f, const NodalField& g) {
  const auto n = static_cast<std::size_t>(mesh.node_count());
  if (mass.size() != n || f.size() != n || g.size() != n)
    throw std::invalid_argument("lumped_inner: field size mismatch");
  return par::block_sum(mesh.node_count(),
                        [&](std::ptrdiff_t i) { return f[i] * g[i] * mass[i]; });
}

AngleCheck nonobtuse_check(const StructuredTriMesh& mesh) {
  const double worst = par::block_max(mesh.tri_count(), [&](std::ptrdiff_t t) {
    const auto& tri = mesh.triangles[t];
    double largest = 0.0;
    for (int i = 0; i < 3; ++i) {
      const Vec2 v = mesh.nodes[tri[i]];
      const Vec2 u = mesh.nodes[tri[(i + 1) % 3]];
      const Vec2 w = mesh.nodes[tri[(i + 2) % 3]];
      const double ax = u.x - v.x, ay = u.y - v.y;
      const double bx = w.x - v.x, by = w.y - v.y;
      const double cosang = (ax * bx + ay * by) /
                            (std::hypot(ax, ay) * std::hypot(bx, by));
      largest = std::max(largest, std::acos(std::clamp(cosang, -1.0, 1.0)));
    }
    return largest;
  });
  return {worst <= std::numbers::pi / 2.0 + 1e-12, worst};
}

NodalField nodal_interpolate(const std::function<double(double, double)>& f,
                             const StructuredTriMesh& mesh) {
  NodalField out(mesh.node_count());
  for (int a = 0; a < mesh.node_count(); ++a) {
    const double v = f(mesh.nodes[a].x, mesh.nodes[a].y);
    if (!std::isfinite(v)) throw std::domain_error("nodal_interpolate: non-finite sample");
    out[a] = v;
  }
  return out;
}

double grad_l2_norm(const StructuredTriMesh& mesh, const NodalField& f) {
  const double sq = par::block_sum(mesh.tri_count(), [&](std::ptrdiff_t t) {
    const auto& tri = mesh.triangles[t];
    double gx = 0.0, gy = 0.0;
    for (int i = 0; i < 3; ++i) {
      gx += f[tri[i]] * mesh.tri_grad[t][i].x;
      gy += f[tri[i]] * mesh.tri_grad[t][i].y;
    }
    return mesh.tri_area[t] * (gx * gx + gy * gy);
  });
  return std::sqrt(sq);
}

}  // namespace gbm
