#pragma once

#include <vector>

#include "gbm/mesh.hpp"

namespace gbm {

/// Morphology sample at one output time.
struct MetricsSample {
  double time = 0.0;
  double rq = 0.0;         ///< ring quotient: int T / int (T+N); 1 when the tumor is extinct
  double sq = 0.0;         ///< surface quotient: thresholded area / enclosing circle area
  double int_t = 0.0;      ///< lumped integral of T
  double int_n = 0.0;      ///< lumped integral of N
  double int_total = 0.0;  ///< lumped integral of T+N
  double area = 0.0;       ///< lumped area where T+N >= threshold
  double r_max = 0.0;      ///< radius of the smallest circle containing that region
  Vec2 enclosing_center;
};

/// Detection threshold for the tumor indicator.
inline constexpr double kIndicatorThreshold = 0.001;

/// int T / int (T+N) with lumped integrals; 1 when the denominator vanishes.
double ring_quotient(const StructuredTriMesh& mesh, const NodalField& mass,
                     const NodalField& t_field, const NodalField& n_field);

/// 1 where T+N >= 0.001, else 0 (boundary included).
NodalField tumor_indicator(const NodalField& t_field, const NodalField& n_field);

struct Circle {
  Vec2 center;
  double radius = 0.0;
};

/// Smallest circle containing every point, by the randomized incremental
/// (move-to-front) algorithm; expected linear time, exact result. The
/// internal shuffle is fixed-seeded so results are reproducible.
Circle min_enclosing_circle(const std::vector<Vec2>& points);

/// Circle over the nodes flagged by a binary indicator field; (0, origin)
/// when the set is empty.
Circle enclosing_radius(const StructuredTriMesh& mesh, const NodalField& indicator);

/// area(indicator) / (pi r_max^2); 0 when r_max = 0. Values above 1 are
/// possible on coarse meshes and reported as-is.
double surface_quotient(const StructuredTriMesh& mesh, const NodalField& mass,
                        const NodalField& t_field, const NodalField& n_field);

/// Lumped integral of T+N.
double total_density(const StructuredTriMesh& mesh, const NodalField& mass,
                     const NodalField& t_field, const NodalField& n_field);

/// All morphology metrics for one state.
MetricsSample compute_metrics(const StructuredTriMesh& mesh, const NodalField& mass,
                              const NodalField& t_field, const NodalField& n_field,
                              double time);

}  // namespace gbm
