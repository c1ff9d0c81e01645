#ifndef DIBVP_DATA_HPP
#define DIBVP_DATA_HPP

#include <optional>
#include <vector>

#include "dibvp/clifford.hpp"
#include "dibvp/expression.hpp"
#include "dibvp/geometry.hpp"

namespace dibvp {

/// Spinor field given componentwise by expressions in (t, z).
struct FieldExpr {
  std::vector<Expr> components;

  int rank() const { return static_cast<int>(components.size()); }

  SpinVector eval(double t, double z) const {
    SpinVector v(rank());
    for (int i = 0; i < rank(); ++i) v[i] = components[static_cast<size_t>(i)].eval(t, z);
    return v;
  }

  FieldExpr d_dt() const {
    FieldExpr out;
    for (const Expr& c : components) out.components.push_back(c.d_dt());
    return out;
  }

  FieldExpr d_dz() const {
    FieldExpr out;
    for (const Expr& c : components) out.components.push_back(c.d_dz());
    return out;
  }

  static FieldExpr zero(int rank) {
    FieldExpr out;
    out.components.assign(static_cast<size_t>(rank), Expr());
    return out;
  }
};

/// Source samples on the solver grid at increasing times; evaluated by linear
/// interpolation in t (first-order, flagged in run reports).
struct GridSource {
  std::vector<double> times;
  std::vector<Matrix> values; // each N x nz
};

/// Cauchy data for the strip problem: initial section h on Sigma_0 and source
/// f, each either analytic or grid-sampled, plus declared support metadata
/// used by the propagation certificates.
struct CauchyData {
  std::optional<FieldExpr> initial_expr; // h(z); evaluated at t = 0
  std::optional<Matrix> initial_grid;    // h sampled N x nz on the solver grid
  std::optional<FieldExpr> source_expr;  // f(t,z)
  std::optional<GridSource> source_grid;
  DataSupport support;

  bool has_initial() const { return initial_expr.has_value() || initial_grid.has_value(); }
  bool has_source() const { return source_expr.has_value() || source_grid.has_value(); }
};

} // namespace dibvp

#endif
