#ifndef DIBVP_SOLVER_HPP
#define DIBVP_SOLVER_HPP

#include <functional>
#include <optional>
#include <vector>

#include "dibvp/boundary.hpp"
#include "dibvp/data.hpp"
#include "dibvp/system.hpp"

namespace dibvp {

/// Uniform grid on [0, L] with the CFL-coupled time step dt = cfl dz / vmax.
struct Grid {
  int nz = 0;
  double length = 0.0;
  double dz = 0.0;
  double cfl = 0.5;
  double dt = 0.0;

  static Grid make(int nz, double length, double cfl, double vmax);
  double z(int i) const { return dz * i; }
};

/// Time-indexed family of grid spinor fields with support-envelope metadata.
struct Trajectory {
  Grid grid;
  std::vector<double> times;
  std::vector<Matrix> fields; // N x nz each
  std::vector<std::optional<Interval>> envelopes;
  double support_threshold = 0.0; // absolute threshold the envelopes used
  double max_abs = 0.0;
  double max_boundary_residual = 0.0;

  int rank() const { return fields.empty() ? 0 : static_cast<int>(fields[0].rows()); }
  int steps() const { return static_cast<int>(times.size()); }

  /// sqrt of the trapezoid z-integral of |psi|^2 at snapshot idx.
  double l2_slice(int idx) const;
  /// L2 norm over the whole strip (trapezoid in z and t).
  double l2_strip() const;
};

struct SolveOptions {
  double support_eps = 1e-10;      // relative envelope threshold
  bool planted_double_az = false;  // negative control: doubles the Az coefficient
};

/// March dt psi = -(Az dz psi + B psi) + f with classic RK4; second-order
/// centered differences inside, one-sided at the walls; after every stage the
/// wall states are projected onto ker M. add_source accumulates f(t) into the
/// N x nz buffer (may be null).
Trajectory integrate_constant(const Matrix& Az, const Matrix& B, const BoundaryCondition& left,
                              const BoundaryCondition& right, const Matrix& initial,
                              const std::function<void(double, Matrix&)>& add_source,
                              const Grid& grid, double T, const SolveOptions& opts = {});

/// Solve the initial-boundary value problem for the normal-form system on the
/// strip. Requires constant coefficients (flat strips; curved geometries are
/// analysis-only).
Trajectory solve_ibvp(const NormalForm& nf, const BoundaryCondition& left,
                      const BoundaryCondition& right, const CauchyData& data, const Grid& grid,
                      double T, const SolveOptions& opts = {});

/// Trade nonzero initial data for a modified source: the returned data has
/// h = 0 and f replaced by f + G h, so that solving it and adding h back
/// reproduces the original solution.
CauchyData reduce_zero_initial(const CauchyData& data, const NormalForm& nf);

/// Evaluate the initial section of `data` on the grid.
Matrix initial_on_grid(const CauchyData& data, const Grid& grid, int rank);

/// Source accumulator for `data` on the grid (analytic part sampled exactly,
/// grid part linearly interpolated in t); null when there is no source.
std::function<void(double, Matrix&)> source_on_grid(const CauchyData& data, const Grid& grid,
                                                    int rank);

} // namespace dibvp

#endif
