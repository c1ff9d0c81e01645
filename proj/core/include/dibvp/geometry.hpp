#ifndef DIBVP_GEOMETRY_HPP
#define DIBVP_GEOMETRY_HPP

#include <optional>
#include <vector>

#include "dibvp/expression.hpp"

namespace dibvp {

/// Closed interval [lo, hi] on the straightened spatial axis.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x, double pad = 0.0) const { return x >= lo - pad && x <= hi + pad; }
  double width() const { return hi - lo; }
};

/// Disjoint union of intervals, kept sorted by lo.
using Region = std::vector<Interval>;

Region merge_region(Region r);
bool region_contains(const Region& r, double x, double pad = 0.0);

enum class Direction { Future, Past };

/// Computational spacetime strip in straightened coordinates (t, ztilde):
/// time in [0, T], space in [0, L], boundary walls at ztilde = 0 and L.
///
/// half_minkowski carries the wall speed a of the original frame (wall
/// z = a t straightened to ztilde = 0); diagonal_metric carries lapse and
/// spatial factor expressions and is used for coefficient analysis only.
struct Geometry {
  enum class Kind { HalfMinkowski, DiagonalMetric };

  int spatial_dim = 1;
  Kind kind = Kind::HalfMinkowski;
  double boundary_speed = 0.0; // a, |a| < 1
  Expr lapse;                  // beta(t,z) > 0
  Expr spatial_factor;         // alpha(t,z) > 0
  double time_horizon = 1.0;   // T
  double length = 1.0;         // L

  /// Maximal coordinate speed of future-directed causal curves toward +z.
  double speed_right() const;
  /// Same toward -z (reported positive).
  double speed_left() const;
  double max_speed() const;

  bool in_strip(double t) const { return t >= 0.0 && t <= time_horizon; }
};

Geometry make_half_minkowski(int spatial_dim, double boundary_speed, double time_horizon,
                             double length);

Geometry make_diagonal_metric(int spatial_dim, const Expr& lapse, const Expr& spatial_factor,
                              double time_horizon, double length);

/// Slice at time t of the causal future/past of `support` living on the time
/// slice t0, clipped to [0, L]. Future slices need t >= t0, past slices
/// t <= t0; times outside the strip throw std::out_of_range.
Region causal_envelope(const Geometry& geom, const Region& support, double t0, Direction dir,
                       double t);

/// Spacetime support box for a source: time extent [t0, t1], spatial region.
struct SpacetimeSupport {
  double t0 = 0.0;
  double t1 = 0.0;
  Region region;
};

/// Data supports feeding the propagation region: initial support on Sigma_0
/// plus an optional source support box.
struct DataSupport {
  Region initial;                          // supp h at t = 0
  std::optional<SpacetimeSupport> source;  // supp f inside the strip
};

/// Slice at time t of the region J+(supp f) ∪ J+(supp h) clipped to the strip.
Region reachable_region(const Geometry& geom, const DataSupport& data, double t);

/// Sampled-point causal relation used by the duality property tests.
bool causally_reaches(const Geometry& geom, double t_from, double z_from, double t_to,
                      double z_to);

} // namespace dibvp

#endif
