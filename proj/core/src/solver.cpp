#include "dibvp/solver.hpp"

#include <cmath>

#include "dibvp/errors.hpp"

namespace dibvp {

Grid Grid::make(int nz, double length, double cfl, double vmax) {
  if (nz < 5) throw config_error("grid needs at least 5 nodes");
  if (length <= 0.0) throw config_error("grid length must be positive");
  if (!(cfl > 0.0) || cfl > 1.0)
    throw config_error("CFL violation: cfl must lie in (0, 1]");
  if (vmax <= 0.0) throw config_error("characteristic speed must be positive");
  Grid g;
  g.nz = nz;
  g.length = length;
  g.dz = length / (nz - 1);
  g.cfl = cfl;
  g.dt = cfl * g.dz / vmax;
  return g;
}

double Trajectory::l2_slice(int idx) const {
  const Matrix& f = fields[static_cast<size_t>(idx)];
  double acc = 0.0;
  for (int i = 0; i < grid.nz; ++i) {
    const double w = (i == 0 || i == grid.nz - 1) ? 0.5 : 1.0;
    acc += w * f.col(i).squaredNorm();
  }
  return std::sqrt(acc * grid.dz);
}

double Trajectory::l2_strip() const {
  if (times.size() < 2) return 0.0;
  double acc = 0.0;
  for (size_t k = 0; k < times.size(); ++k) {
    double wt;
    if (k == 0)
      wt = 0.5 * (times[1] - times[0]);
    else if (k + 1 == times.size())
      wt = 0.5 * (times[k] - times[k - 1]);
    else
      wt = 0.5 * (times[k + 1] - times[k - 1]);
    double s = l2_slice(static_cast<int>(k));
    acc += wt * s * s;
  }
  return std::sqrt(acc);
}

namespace {

// Second-order first derivative: centered inside, one-sided at the walls.
void d_dz(const Matrix& f, double dz, Matrix& out) {
  const int nz = static_cast<int>(f.cols());
  for (int i = 1; i + 1 < nz; ++i) out.col(i) = (f.col(i + 1) - f.col(i - 1)) / (2.0 * dz);
  out.col(0) = (-3.0 * f.col(0) + 4.0 * f.col(1) - f.col(2)) / (2.0 * dz);
  out.col(nz - 1) = (3.0 * f.col(nz - 1) - 4.0 * f.col(nz - 2) + f.col(nz - 3)) / (2.0 * dz);
}

void validate_bc(const BoundaryCondition& bc, int rank) {
  if (bc.rank() != rank) throw structural_error("boundary condition has wrong rank");
  if (bc.kernel_dim == 0)
    throw structural_error("boundary condition admits no states (invertible M)");
  if (bc.kernel_dim == rank)
    throw structural_error("boundary condition is vacuous (M = 0)");
}

} // namespace

Trajectory integrate_constant(const Matrix& Az, const Matrix& B, const BoundaryCondition& left,
                              const BoundaryCondition& right, const Matrix& initial,
                              const std::function<void(double, Matrix&)>& add_source,
                              const Grid& grid, double T, const SolveOptions& opts) {
  const int N = static_cast<int>(Az.rows());
  const int nz = grid.nz;
  if (initial.rows() != N || initial.cols() != nz)
    throw structural_error("initial data shape does not match the grid");
  validate_bc(left, N);
  validate_bc(right, N);
  if (T <= 0.0) throw config_error("time horizon must be positive");

  Matrix A = opts.planted_double_az ? Matrix(2.0 * Az) : Az;

  const int nsteps = std::max(1, static_cast<int>(std::ceil(T / grid.dt - 1e-12)));
  const double dt = T / nsteps;

  Trajectory traj;
  traj.grid = grid;
  traj.times.reserve(static_cast<size_t>(nsteps) + 1);
  traj.fields.reserve(static_cast<size_t>(nsteps) + 1);

  auto project_walls = [&](Matrix& u) {
    u.col(0) = left.kernel_projector * u.col(0);
    u.col(nz - 1) = right.kernel_projector * u.col(nz - 1);
  };

  Matrix u = initial;
  project_walls(u);
  traj.times.push_back(0.0);
  traj.fields.push_back(u);

  Matrix du(N, nz), k1(N, nz), k2(N, nz), k3(N, nz), k4(N, nz), stage(N, nz);

  auto rhs = [&](double t, const Matrix& v, Matrix& out) {
    d_dz(v, grid.dz, du);
    out.noalias() = -(A * du);
    out.noalias() -= B * v;
    if (add_source) add_source(t, out);
  };

  double residual_max = 0.0;
  for (int s = 0; s < nsteps; ++s) {
    const double t = s * dt;
    rhs(t, u, k1);
    stage = u + (0.5 * dt) * k1;
    project_walls(stage);
    rhs(t + 0.5 * dt, stage, k2);
    stage = u + (0.5 * dt) * k2;
    project_walls(stage);
    rhs(t + 0.5 * dt, stage, k3);
    stage = u + dt * k3;
    project_walls(stage);
    rhs(t + dt, stage, k4);
    u += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    project_walls(u);

    if (!u.allFinite())
      throw divergence_error("non-finite field values during integration", t + dt);

    residual_max = std::max(residual_max, (left.M * u.col(0)).norm());
    residual_max = std::max(residual_max, (right.M * u.col(nz - 1)).norm());

    traj.times.push_back((s + 1) * dt);
    traj.fields.push_back(u);
  }
  traj.max_boundary_residual = residual_max;

  // Support envelopes relative to the trajectory-wide maximum.
  double mx = 0.0;
  for (const Matrix& f : traj.fields)
    for (int i = 0; i < nz; ++i) mx = std::max(mx, f.col(i).norm());
  traj.max_abs = mx;
  traj.support_threshold = opts.support_eps * mx;
  traj.envelopes.reserve(traj.fields.size());
  for (const Matrix& f : traj.fields) {
    int lo = -1, hi = -1;
    for (int i = 0; i < nz; ++i) {
      if (f.col(i).norm() > traj.support_threshold) {
        if (lo < 0) lo = i;
        hi = i;
      }
    }
    if (lo < 0)
      traj.envelopes.push_back(std::nullopt);
    else
      traj.envelopes.push_back(Interval{grid.z(lo), grid.z(hi)});
  }
  return traj;
}

Matrix initial_on_grid(const CauchyData& data, const Grid& grid, int rank) {
  if (data.initial_grid) {
    if (data.initial_grid->rows() != rank || data.initial_grid->cols() != grid.nz)
      throw structural_error("initial grid does not match the solver grid");
    return *data.initial_grid;
  }
  Matrix h = Matrix::Zero(rank, grid.nz);
  if (data.initial_expr) {
    if (data.initial_expr->rank() != rank) throw structural_error("initial field has wrong rank");
    for (int i = 0; i < grid.nz; ++i) h.col(i) = data.initial_expr->eval(0.0, grid.z(i));
  }
  return h;
}

std::function<void(double, Matrix&)> source_on_grid(const CauchyData& data, const Grid& grid,
                                                    int rank) {
  if (!data.has_source()) return nullptr;
  std::optional<FieldExpr> fe = data.source_expr;
  if (fe && fe->rank() != rank) throw structural_error("source field has wrong rank");
  std::optional<GridSource> gs = data.source_grid;
  if (gs) {
    if (gs->times.size() < 2 || gs->times.size() != gs->values.size())
      throw structural_error("grid source needs matching times and values");
    for (const Matrix& v : gs->values)
      if (v.rows() != rank || v.cols() != grid.nz)
        throw structural_error("grid source does not match the solver grid");
  }
  return [fe, gs, grid, rank](double t, Matrix& out) {
    if (fe) {
      for (int i = 0; i < grid.nz; ++i) out.col(i) += fe->eval(t, grid.z(i));
    }
    if (gs) {
      const auto& ts = gs->times;
      if (t <= ts.front()) {
        out += gs->values.front();
      } else if (t >= ts.back()) {
        out += gs->values.back();
      } else {
        size_t k = 1;
        while (k < ts.size() && ts[k] < t) ++k;
        const double w = (t - ts[k - 1]) / (ts[k] - ts[k - 1]);
        out += (1.0 - w) * gs->values[k - 1] + w * gs->values[k];
      }
    }
    (void)rank;
  };
}

Trajectory solve_ibvp(const NormalForm& nf, const BoundaryCondition& left,
                      const BoundaryCondition& right, const CauchyData& data, const Grid& grid,
                      double T, const SolveOptions& opts) {
  if (!nf.constant_coefficients())
    throw analysis_error("time stepper supports constant coefficients only");
  const int N = nf.rep.rank;
  Matrix h = initial_on_grid(data, grid, N);
  auto src = source_on_grid(data, grid, N);
  return integrate_constant(nf.constant_Az(), nf.constant_B(), left, right, h, src, grid, T,
                            opts);
}

CauchyData reduce_zero_initial(const CauchyData& data, const NormalForm& nf) {
  const int N = nf.rep.rank;
  CauchyData out = data;
  if (!data.has_initial()) return out;

  if (data.initial_expr) {
    // f_tilde = f + G h with G h = -(Az dz h + B h); h is time independent, so
    // the correction is too.
    const FieldExpr& h = *data.initial_expr;
    if (h.rank() != N) throw structural_error("initial field has wrong rank");
    FieldExpr dzh = h.d_dz();
    FieldExpr corr = FieldExpr::zero(N);
    for (int i = 0; i < N; ++i) {
      Expr acc;
      for (int k = 0; k < N; ++k) {
        acc = acc + nf.Ahat_z.entry(i, k) * dzh.components[static_cast<size_t>(k)] +
              nf.Bhat.entry(i, k) * h.components[static_cast<size_t>(k)];
      }
      corr.components[static_cast<size_t>(i)] = Expr() - acc;
    }
    FieldExpr f = data.source_expr.value_or(FieldExpr::zero(N));
    if (f.rank() != N) throw structural_error("source field has wrong rank");
    FieldExpr combined;
    for (int i = 0; i < N; ++i)
      combined.components.push_back(f.components[static_cast<size_t>(i)] +
                                    corr.components[static_cast<size_t>(i)]);
    out.source_expr = combined;
    out.initial_expr.reset();
    out.initial_grid.reset();
  } else {
    throw analysis_error("zero-initial-data reduction needs an analytic initial section");
  }

  // The correction is supported where h is; fold it into the source support.
  Region r = data.support.initial;
  if (data.support.source) {
    r.insert(r.end(), data.support.source->region.begin(), data.support.source->region.end());
  }
  SpacetimeSupport s;
  s.t0 = 0.0;
  s.t1 = nf.geometry.time_horizon;
  s.region = merge_region(std::move(r));
  out.support.initial.clear();
  out.support.source = s;
  return out;
}

} // namespace dibvp
