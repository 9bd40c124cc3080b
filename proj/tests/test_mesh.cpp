#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gbm/mesh.hpp"
#include "gbm/reference.hpp"
#include "gbm/rng.hpp"
#include "oracles.hpp"

using namespace gbm;

namespace {

NodalField random_admissible_field(const StructuredTriMesh& mesh, SplitMix64& rng) {
  NodalField phi(mesh.node_count());
  for (double& v : phi) v = rng.next_double();
  return phi;
}

}  // namespace

TEST_SUITE_BEGIN("mesh");

TEST_CASE("structured mesh counts and spacing") {
  const StructuredTriMesh paper = build_mesh({-9, 9, -9, 9}, 45, 45);
  CHECK(paper.node_count() == 2116);
  CHECK(paper.tri_count() == 4050);
  CHECK(paper.hx == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(paper.hy == doctest::Approx(0.4).epsilon(1e-15));

  const StructuredTriMesh unit = build_mesh({0, 1, 0, 1}, 1, 1);
  CHECK(unit.node_count() == 4);
  CHECK(unit.tri_count() == 2);

  const StructuredTriMesh rect = build_mesh({0, 2, 0, 1}, 2, 1);
  CHECK(rect.node_count() == 6);
  CHECK(rect.tri_count() == 4);
}

TEST_CASE("mesh builder rejects bad input") {
  CHECK_THROWS_AS(build_mesh({0, 1, 0, 1}, 0, 3), std::invalid_argument);
  CHECK_THROWS_AS(build_mesh({0, 1, 1, 1}, 2, 2), std::invalid_argument);
  CHECK_THROWS_AS(build_mesh({1, 0, 0, 1}, 2, 2), std::invalid_argument);
}

TEST_CASE("triangles are positively oriented and tile the domain") {
  for (Diagonal d : {Diagonal::kMain, Diagonal::kAnti}) {
    const StructuredTriMesh mesh = build_mesh({-2, 1, 0, 2}, 6, 4, d);
    double total = 0.0;
    for (int t = 0; t < mesh.tri_count(); ++t) {
      CHECK(mesh.tri_area[t] > 0.0);
      total += mesh.tri_area[t];
    }
    CHECK(total == doctest::Approx(6.0).epsilon(1e-14));

    // sparsity nonzeros: one per node plus two per shared edge
    const int edges = mesh.nx * (mesh.ny + 1) + mesh.ny * (mesh.nx + 1) + mesh.nx * mesh.ny;
    CHECK(static_cast<int>(mesh.col_indices.size()) == mesh.node_count() + 2 * edges);
  }
}

TEST_CASE("lumped mass on the paper mesh") {
  const StructuredTriMesh mesh = build_mesh({-9, 9, -9, 9}, 45, 45);
  const NodalField mass = lumped_mass(mesh);

  double total = 0.0;
  for (double m : mass) {
    CHECK(m > 0.0);
    total += m;
  }
  CHECK(total == doctest::Approx(324.0).epsilon(1e-13));
  // interior node: six incident triangles of area h^2/2
  CHECK(mass[mesh.node_index(22, 22)] == doctest::Approx(0.16).epsilon(1e-13));
}

TEST_CASE("lumped mass on one cell") {
  const StructuredTriMesh mesh = build_mesh({0, 1, 0, 1}, 1, 1);
  const NodalField mass = lumped_mass(mesh);
  // diagonal nodes (0,0) and (1,1) sit in both triangles
  CHECK(mass[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(mass[3] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(mass[1] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(mass[2] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
}

TEST_CASE("lumped mass equals consistent-mass row sums") {
  for (const StructuredTriMesh& mesh :
       {build_mesh({0, 2, 0, 1}, 7, 3), build_mesh({-1, 1, -1, 1}, 5, 5, Diagonal::kAnti)}) {
    const NodalField mass = lumped_mass(mesh);
    const std::vector<double> sums = oracles::consistent_mass_row_sums(mesh);
    for (int a = 0; a < mesh.node_count(); ++a)
      CHECK(mass[a] == doctest::Approx(sums[a]).epsilon(1e-14));
  }
}

TEST_CASE("unweighted stiffness on two triangles matches hand assembly") {
  const StructuredTriMesh mesh = build_mesh({0, 1, 0, 1}, 1, 1);
  const CsrMatrix s = weighted_stiffness(mesh, NodalField(4, 0.0), 0.0);
  const auto dense = oracles::csr_to_dense(s);
  // node order: (0,0), (1,0), (0,1), (1,1)
  const double expected[4][4] = {{1.0, -0.5, -0.5, 0.0},
                                 {-0.5, 1.0, 0.0, -0.5},
                                 {-0.5, 0.0, 1.0, -0.5},
                                 {0.0, -0.5, -0.5, 1.0}};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      CHECK(dense[i][j] == doctest::Approx(expected[i][j]).epsilon(1e-14));
}

TEST_CASE("constant weight factors out of the stiffness") {
  const StructuredTriMesh mesh = build_mesh({-3, 3, -3, 3}, 8, 8);
  const double c = 0.37, chi = 4.0;
  const CsrMatrix base = weighted_stiffness(mesh, NodalField(mesh.node_count(), 0.0), 0.0);
  const CsrMatrix scaled = weighted_stiffness(mesh, NodalField(mesh.node_count(), c), chi);
  const double factor = std::exp(chi * c);
  for (int k = 0; k < base.nnz(); ++k)
    CHECK(scaled.values[k] == doctest::Approx(factor * base.values[k]).epsilon(1e-14));
}

TEST_CASE("weighted stiffness keeps the M-matrix sign structure") {
  const StructuredTriMesh mesh = build_mesh({-9, 9, -9, 9}, 12, 12);
  SplitMix64 rng(7001);
  for (double chi : {0.0, 1.0, 5.0, 20.0}) {
    for (int rep = 0; rep < 5; ++rep) {
      const NodalField phi = random_admissible_field(mesh, rng);
      const CsrMatrix s = weighted_stiffness(mesh, phi, chi);
      CHECK(s.values == reference::weighted_stiffness(mesh, phi, chi).values);
      for (int row = 0; row < s.n; ++row) {
        double sum = 0.0, scale = 1.0;
        for (int k = s.row_offsets[row]; k < s.row_offsets[row + 1]; ++k) {
          if (s.col_indices[k] != row) CHECK(s.values[k] <= 0.0);
          sum += s.values[k];
          scale = std::max(scale, std::abs(s.values[k]));
        }
        CHECK(std::abs(sum) <= 1e-12 * scale);
      }
    }
  }
}

TEST_CASE("stiffness is symmetric and annihilates linear fields inside") {
  const StructuredTriMesh mesh = build_mesh({0, 1, 0, 1}, 9, 9);
  const CsrMatrix s = weighted_stiffness(mesh, NodalField(mesh.node_count(), 0.0), 0.0);
  const auto dense = oracles::csr_to_dense(s);
  for (int i = 0; i < s.n; ++i)
    for (int j = 0; j < s.n; ++j) CHECK(dense[i][j] == dense[j][i]);

  const NodalField linear =
      nodal_interpolate([](double x, double y) { return 2.0 * x - 0.5 * y; }, mesh);
  std::vector<double> image;
  matvec(s, linear, image);
  for (int j = 1; j < mesh.ny; ++j)
    for (int i = 1; i < mesh.nx; ++i)
      CHECK(std::abs(image[mesh.node_index(i, j)]) <= 1e-10);
}

TEST_CASE("lumped inner product") {
  const StructuredTriMesh mesh = build_mesh({-9, 9, -9, 9}, 45, 45);
  const NodalField mass = lumped_mass(mesh);
  const NodalField ones(mesh.node_count(), 1.0);
  CHECK(lumped_inner(mesh, mass, ones, ones) == doctest::Approx(324.0).epsilon(1e-13));

  const NodalField g =
      nodal_interpolate([](double x, double y) { return std::exp(-x * x - y * y); }, mesh);
  double direct = 0.0;
  for (int a = 0; a < mesh.node_count(); ++a) direct += mass[a] * g[a];
  CHECK(lumped_inner(mesh, mass, ones, g) == doctest::Approx(direct).epsilon(1e-14));

  NodalField spike(mesh.node_count(), 0.0);
  spike[mesh.node_index(10, 17)] = 1.0;
  CHECK(lumped_inner(mesh, mass, spike, spike) == doctest::Approx(0.16).epsilon(1e-13));

  CHECK_THROWS_AS(lumped_inner(mesh, mass, ones, NodalField(3, 1.0)), std::invalid_argument);
}

TEST_CASE("angle check accepts right triangles and flags obtuse ones") {
  const StructuredTriMesh structured = build_mesh({0, 5, 0, 1}, 10, 2);
  const AngleCheck right = nonobtuse_check(structured);
  CHECK(right.nonobtuse);
  CHECK(right.worst_angle == doctest::Approx(std::numbers::pi / 2).epsilon(1e-12));

  StructuredTriMesh handmade;
  handmade.nodes = {{0, 0}, {1, 0}, {-2, 0.1}};
  handmade.triangles = {{0, 2, 1}};
  const AngleCheck obtuse = nonobtuse_check(handmade);
  CHECK_FALSE(obtuse.nonobtuse);
  CHECK(obtuse.worst_angle > std::numbers::pi / 2);

  handmade.nodes = {{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2.0}};
  handmade.triangles = {{0, 1, 2}};
  const AngleCheck equilateral = nonobtuse_check(handmade);
  CHECK(equilateral.nonobtuse);
  CHECK(equilateral.worst_angle == doctest::Approx(std::numbers::pi / 3).epsilon(1e-12));
}

TEST_CASE("nodal interpolation samples functions at nodes") {
  const StructuredTriMesh unit = build_mesh({0, 1, 0, 1}, 1, 1);
  const NodalField ones = nodal_interpolate([](double, double) { return 1.0; }, unit);
  CHECK(ones == NodalField{1.0, 1.0, 1.0, 1.0});

  const NodalField xs = nodal_interpolate([](double x, double) { return x; }, unit);
  CHECK(xs == NodalField{0.0, 1.0, 0.0, 1.0});

  const StructuredTriMesh mesh = build_mesh({-2, 2, -2, 2}, 6, 6);
  const NodalField bump = nodal_interpolate(
      [](double x, double y) { return std::exp(-(x * x + y * y)); }, mesh);
  for (int a = 0; a < mesh.node_count(); ++a) {
    const Vec2 p = mesh.nodes[a];
    CHECK(bump[a] == std::exp(-(p.x * p.x + p.y * p.y)));
  }

  CHECK_THROWS_AS(
      nodal_interpolate([](double x, double) { return 1.0 / x; }, build_mesh({0, 1, 0, 1}, 1, 1)),
      std::domain_error);
}

TEST_CASE("element gradients integrate linear fields exactly") {
  const StructuredTriMesh mesh = build_mesh({-1, 2, 0, 2}, 7, 5);
  const NodalField linear = nodal_interpolate([](double x, double) { return x; }, mesh);
  CHECK(grad_l2_norm(mesh, linear) == doctest::Approx(std::sqrt(6.0)).epsilon(1e-13));
  CHECK(grad_l2_norm(mesh, NodalField(mesh.node_count(), 0.7)) == 0.0);
}

TEST_SUITE_END();
