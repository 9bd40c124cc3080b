#include "gbm/metrics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gbm/parallel.hpp"
#include "gbm/rng.hpp"

namespace gbm {

namespace {

// Containment slack relative to the circle scale; covers round-off in the
// circumcenter solve without admitting a smaller circle.
constexpr double kCircleTol = 1e-12;

double dist2(const Vec2& a, const Vec2& b) {
  const double dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy;
}

bool contains(const Circle& c, const Vec2& p) {
  const double r = c.radius;
  return dist2(c.center, p) <= r * r + kCircleTol * (1.0 + r * r);
}

Circle from_two(const Vec2& a, const Vec2& b) {
  const Vec2 center{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
  return {center, 0.5 * std::sqrt(dist2(a, b))};
}

// Circumcircle; falls back to the best two-point circle when the points are
// (near) collinear, which can only happen here through duplicated nodes.
Circle from_three(const Vec2& a, const Vec2& b, const Vec2& c) {
  const double bx = b.x - a.x, by = b.y - a.y;
  const double cx = c.x - a.x, cy = c.y - a.y;
  const double d = 2.0 * (bx * cy - by * cx);
  if (d == 0.0) {
    Circle best = from_two(a, b);
    if (!contains(best, c)) {
      const Circle ac = from_two(a, c);
      best = contains(ac, b) ? ac : from_two(b, c);
    }
    return best;
  }
  const double b2 = bx * bx + by * by;
  const double c2 = cx * cx + cy * cy;
  const Vec2 center{a.x + (cy * b2 - by * c2) / d, a.y + (bx * c2 - cx * b2) / d};
  const double r = std::sqrt(std::max({dist2(center, a), dist2(center, b), dist2(center, c)}));
  return {center, r};
}

}  // namespace

Circle min_enclosing_circle(const std::vector<Vec2>& points) {
  if (points.empty()) return {};
  if (points.size() == 1) return {points[0], 0.0};

  std::vector<Vec2> pts = points;
  SplitMix64 rng(0x6d65635f32643137ull);
  deterministic_shuffle(pts, rng);

  Circle circle = from_two(pts[0], pts[1]);
  for (std::size_t i = 2; i < pts.size(); ++i) {
    if (contains(circle, pts[i])) continue;
    // pts[i] lies on the boundary of the new circle
    circle = from_two(pts[0], pts[i]);
    for (std::size_t j = 1; j < i; ++j) {
      if (contains(circle, pts[j])) continue;
      circle = from_two(pts[i], pts[j]);
      for (std::size_t k = 0; k < j; ++k) {
        if (!contains(circle, pts[k])) circle = from_three(pts[i], pts[j], pts[k]);
      }
    }
  }
  return circle;
}

namespace {

void check_sizes(const StructuredTriMesh& mesh, const NodalField& mass,
                 const NodalField& t_field, const NodalField& n_field) {
  const auto n = static_cast<std::size_t>(mesh.node_count());
  if (mass.size() != n || t_field.size() != n || n_field.size() != n)
    throw std::invalid_argument("metrics: field size does not match mesh");
}

}  // namespace

double ring_quotient(const StructuredTriMesh& mesh, const NodalField& mass,
                     const NodalField& t_field, const NodalField& n_field) {
  check_sizes(mesh, mass, t_field, n_field);
  const auto n = static_cast<std::ptrdiff_t>(t_field.size());
  const double num = par::block_sum(n, [&](std::ptrdiff_t i) { return mass[i] * t_field[i]; });
  const double den = par::block_sum(
      n, [&](std::ptrdiff_t i) { return mass[i] * (t_field[i] + n_field[i]); });
  return den > 0.0 ? num / den : 1.0;
}

NodalField tumor_indicator(const NodalField& t_field, const NodalField& n_field) {
  if (t_field.size() != n_field.size())
    throw std::invalid_argument("tumor_indicator: field size mismatch");
  NodalField ind(t_field.size());
  par::parallel_for(static_cast<std::ptrdiff_t>(ind.size()), [&](std::ptrdiff_t i) {
    ind[i] = (t_field[i] + n_field[i] >= kIndicatorThreshold) ? 1.0 : 0.0;
  });
  return ind;
}

Circle enclosing_radius(const StructuredTriMesh& mesh, const NodalField& indicator) {
  std::vector<Vec2> pts;
  for (int a = 0; a < mesh.node_count(); ++a)
    if (indicator[a] != 0.0) pts.push_back(mesh.nodes[a]);
  return min_enclosing_circle(pts);
}

double surface_quotient(const StructuredTriMesh& mesh, const NodalField& mass,
                        const NodalField& t_field, const NodalField& n_field) {
  check_sizes(mesh, mass, t_field, n_field);
  const NodalField ind = tumor_indicator(t_field, n_field);
  const Circle circle = enclosing_radius(mesh, ind);
  if (circle.radius <= 0.0) return 0.0;
  const double area = par::block_sum(static_cast<std::ptrdiff_t>(ind.size()),
                                     [&](std::ptrdiff_t i) { return mass[i] * ind[i]; });
  return area / (std::numbers::pi * circle.radius * circle.radius);
}

double total_density(const StructuredTriMesh& mesh, const NodalField& mass,
                     const NodalField& t_field, const NodalField& n_field) {
  check_sizes(mesh, mass, t_field, n_field);
  return par::block_sum(static_cast<std::ptrdiff_t>(t_field.size()), [&](std::ptrdiff_t i) {
    return mass[i] * (t_field[i] + n_field[i]);
  });
}

MetricsSample compute_metrics(const StructuredTriMesh& mesh, const NodalField& mass,
                              const NodalField& t_field, const NodalField& n_field,
                              double time) {
  check_sizes(mesh, mass, t_field, n_field);
  MetricsSample m;
  m.time = time;
  const auto n = static_cast<std::ptrdiff_t>(t_field.size());
  m.int_t = par::block_sum(n, [&](std::ptrdiff_t i) { return mass[i] * t_field[i]; });
  m.int_n = par::block_sum(n, [&](std::ptrdiff_t i) { return mass[i] * n_field[i]; });
  m.int_total = par::block_sum(
      n, [&](std::ptrdiff_t i) { return mass[i] * (t_field[i] + n_field[i]); });
  m.rq = m.int_total > 0.0 ? m.int_t / m.int_total : 1.0;

  const NodalField ind = tumor_indicator(t_field, n_field);
  m.area = par::block_sum(n, [&](std::ptrdiff_t i) { return mass[i] * ind[i]; });
  const Circle circle = enclosing_radius(mesh, ind);
  m.r_max = circle.radius;
  m.enclosing_center = circle.center;
  m.sq = circle.radius > 0.0
             ? m.area / (std::numbers::pi * circle.radius * circle.radius)
             : 0.0;
  return m;
}

}  // namespace gbm
