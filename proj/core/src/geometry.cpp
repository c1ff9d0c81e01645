#include "dibvp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dibvp/errors.hpp"

namespace dibvp {

Region merge_region(Region r) {
  r.erase(std::remove_if(r.begin(), r.end(), [](const Interval& i) { return i.hi < i.lo; }),
          r.end());
  std::sort(r.begin(), r.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  Region out;
  for (const Interval& i : r) {
    if (!out.empty() && i.lo <= out.back().hi) {
      out.back().hi = std::max(out.back().hi, i.hi);
    } else {
      out.push_back(i);
    }
  }
  return out;
}

bool region_contains(const Region& r, double x, double pad) {
  for (const Interval& i : r)
    if (i.contains(x, pad)) return true;
  return false;
}

double Geometry::speed_right() const {
  if (kind == Kind::HalfMinkowski) return 1.0 - boundary_speed;
  return max_speed();
}

double Geometry::speed_left() const {
  if (kind == Kind::HalfMinkowski) return 1.0 + boundary_speed;
  return max_speed();
}

double Geometry::max_speed() const {
  if (kind == Kind::HalfMinkowski) return 1.0 + std::abs(boundary_speed);
  // beta/alpha maximized over a strip sample; conservative for the envelope.
  double vmax = 0.0;
  const int nt = 33, nz = 33;
  for (int it = 0; it <= nt; ++it) {
    for (int iz = 0; iz <= nz; ++iz) {
      double t = time_horizon * it / nt;
      double z = length * iz / nz;
      double beta = lapse.eval(t, z).real();
      double alpha = spatial_factor.eval(t, z).real();
      vmax = std::max(vmax, beta / alpha);
    }
  }
  return vmax;
}

Geometry make_half_minkowski(int spatial_dim, double boundary_speed, double time_horizon,
                             double length) {
  if (spatial_dim < 1) throw structural_error("spatial_dim must be >= 1");
  if (std::abs(boundary_speed) >= 1.0) throw structural_error("boundary not timelike");
  if (time_horizon <= 0.0 || length <= 0.0)
    throw structural_error("strip extents must be positive");
  Geometry g;
  g.spatial_dim = spatial_dim;
  g.kind = Geometry::Kind::HalfMinkowski;
  g.boundary_speed = boundary_speed;
  g.time_horizon = time_horizon;
  g.length = length;
  return g;
}

Geometry make_diagonal_metric(int spatial_dim, const Expr& lapse, const Expr& spatial_factor,
                              double time_horizon, double length) {
  if (spatial_dim < 1) throw structural_error("spatial_dim must be >= 1");
  if (time_horizon <= 0.0 || length <= 0.0)
    throw structural_error("strip extents must be positive");
  Geometry g;
  g.spatial_dim = spatial_dim;
  g.kind = Geometry::Kind::DiagonalMetric;
  g.lapse = lapse;
  g.spatial_factor = spatial_factor;
  g.time_horizon = time_horizon;
  g.length = length;
  const int nt = 17, nz = 17;
  for (int it = 0; it <= nt; ++it) {
    for (int iz = 0; iz <= nz; ++iz) {
      double t = time_horizon * it / nt;
      double z = length * iz / nz;
      Complex beta = lapse.eval(t, z);
      Complex alpha = spatial_factor.eval(t, z);
      if (beta.imag() != 0.0 || alpha.imag() != 0.0)
        throw structural_error("metric factors must be real-valued");
      if (beta.real() <= 0.0 || alpha.real() <= 0.0)
        throw structural_error("metric factors must be positive on the strip");
    }
  }
  return g;
}

Region causal_envelope(const Geometry& geom, const Region& support, double t0, Direction dir,
                       double t) {
  if (!geom.in_strip(t) || !geom.in_strip(t0))
    throw std::out_of_range("time outside the strip");
  for (const Interval& i : support)
    if (i.lo < 0.0 || i.hi > geom.length)
      throw std::out_of_range("support outside the spatial extent");

  const double dt = (dir == Direction::Future) ? t - t0 : t0 - t;
  if (dt < 0.0) throw std::out_of_range("queried time on the wrong side of the support");

  // A future cone widens at speed_right toward +z and speed_left toward -z;
  // tracing a past cone swaps the two rates.
  const double grow_hi = (dir == Direction::Future) ? geom.speed_right() : geom.speed_left();
  const double grow_lo = (dir == Direction::Future) ? geom.speed_left() : geom.speed_right();

  Region out;
  for (const Interval& i : support) {
    Interval j{std::max(0.0, i.lo - grow_lo * dt), std::min(geom.length, i.hi + grow_hi * dt)};
    if (j.hi >= j.lo) out.push_back(j);
  }
  return merge_region(std::move(out));
}

Region reachable_region(const Geometry& geom, const DataSupport& data, double t) {
  Region out;
  if (!data.initial.empty()) {
    Region r = causal_envelope(geom, data.initial, 0.0, Direction::Future, t);
    out.insert(out.end(), r.begin(), r.end());
  }
  if (data.source && t >= data.source->t0) {
    // earliest source time gives the widest cone at time t
    Region r = causal_envelope(geom, data.source->region, data.source->t0, Direction::Future, t);
    out.insert(out.end(), r.begin(), r.end());
  }
  return merge_region(std::move(out));
}

bool causally_reaches(const Geometry& geom, double t_from, double z_from, double t_to,
                      double z_to) {
  if (t_to < t_from) return false;
  const double dt = t_to - t_from;
  return z_to >= z_from - geom.speed_left() * dt && z_to <= z_from + geom.speed_right() * dt;
}

} // namespace dibvp
