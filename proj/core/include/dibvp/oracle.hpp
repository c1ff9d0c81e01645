#ifndef DIBVP_ORACLE_HPP
#define DIBVP_ORACLE_HPP

#include "dibvp/boundary.hpp"
#include "dibvp/solver.hpp"

namespace dibvp {

/// Exact solution of the constant-coefficient n = 1 strip problem by
/// characteristic transport: Az is diagonalized into one right-moving and one
/// left-moving amplitude, amplitudes ride the characteristics, and each wall
/// couples them through the unique linear reflection determined by
/// "post-reflection state lies in ker M". Zero-order terms proportional to
/// the identity are carried as the explicit factor e^{-lambda t}.
///
/// Independent of the finite-difference path by construction: no grids, no
/// stencils, just ray tracing plus a 2x2 solve per wall.
class OracleSolution {
public:
  double c_plus = 1.0;   // speed of the + characteristic (> 0)
  double c_minus = -1.0; // speed of the - characteristic (< 0)
  SpinVector v_plus, v_minus;
  Complex refl_left{0.0, 0.0};  // outgoing(+) = refl_left * incoming(-) at z = 0
  Complex refl_right{0.0, 0.0}; // outgoing(-) = refl_right * incoming(+) at z = L
  double lambda = 0.0;
  double length = 0.0;

  SpinVector eval(double t, double z) const;
  Matrix sample(const Grid& grid, double t) const;

  FieldExpr initial;

private:
  Complex amp_plus(double t, double z, int depth) const;
  Complex amp_minus(double t, double z, int depth) const;
  Complex w0(bool plus, double z) const;
};

OracleSolution characteristic_oracle(const NormalForm& nf, const BoundaryCondition& left,
                                     const BoundaryCondition& right, const CauchyData& data);

} // namespace dibvp

#endif
