#include "dibvp/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "dibvp/errors.hpp"

namespace dibvp {

namespace {

constexpr int kMaxBounces = 64;

// Unique scalar r with r*incoming + outgoing-direction combination in ker M:
// solve [v_out, -u] (r, c)^T = -v_in for the wall's 1-dimensional kernel.
Complex reflection_coefficient(const SpinVector& v_out, const SpinVector& v_in,
                               const Matrix& kernel_basis) {
  if (kernel_basis.cols() != 1)
    throw analysis_error("oracle reflection needs a one-dimensional kernel");
  Matrix A(2, 2);
  A.col(0) = v_out;
  A.col(1) = -kernel_basis.col(0);
  SpinVector rhs = -v_in;
  SpinVector sol = A.colPivHouseholderQr().solve(rhs);
  if ((A * sol - rhs).norm() > 1e-10)
    throw analysis_error("boundary condition does not couple the characteristics");
  return sol[0];
}

} // namespace

Complex OracleSolution::w0(bool plus, double z) const {
  SpinVector h = initial.eval(0.0, z);
  return plus ? v_plus.dot(h) : v_minus.dot(h); // Eigen dot conjugates the left factor
}

Complex OracleSolution::amp_plus(double t, double z, int depth) const {
  if (depth > kMaxBounces) throw analysis_error("oracle bounce budget exceeded");
  const double xi = z - c_plus * t;
  if (xi >= 0.0) return w0(true, xi);
  const double t_wall = t - z / c_plus;
  return refl_left * amp_minus(t_wall, 0.0, depth + 1);
}

Complex OracleSolution::amp_minus(double t, double z, int depth) const {
  if (depth > kMaxBounces) throw analysis_error("oracle bounce budget exceeded");
  const double xi = z - c_minus * t;
  if (xi <= length) return w0(false, xi);
  const double t_wall = t - (length - z) / c_minus;
  return refl_right * amp_plus(t_wall, length, depth + 1);
}

SpinVector OracleSolution::eval(double t, double z) const {
  const Complex gauge = std::exp(Complex(-lambda * t, 0.0));
  return gauge * (amp_plus(t, z, 0) * v_plus + amp_minus(t, z, 0) * v_minus);
}

Matrix OracleSolution::sample(const Grid& grid, double t) const {
  Matrix out(v_plus.size(), grid.nz);
  for (int i = 0; i < grid.nz; ++i) out.col(i) = eval(t, grid.z(i));
  return out;
}

OracleSolution characteristic_oracle(const NormalForm& nf, const BoundaryCondition& left,
                                     const BoundaryCondition& right, const CauchyData& data) {
  if (!nf.constant_coefficients()) throw analysis_error("oracle needs constant coefficients");
  const int N = nf.rep.rank;
  if (N != 2) throw analysis_error("oracle supports the n = 1 representation");
  if (data.has_source()) throw analysis_error("oracle supports source-free problems");
  if (!data.initial_expr) throw analysis_error("oracle needs an analytic initial section");

  const Matrix Az = nf.constant_Az();
  const Matrix B = nf.constant_B();
  const Complex lam = B(0, 0);
  if ((B - lam * Matrix::Identity(N, N)).cwiseAbs().maxCoeff() > 1e-12 ||
      std::abs(lam.imag()) > 1e-12)
    throw analysis_error("oracle needs B proportional to the identity");

  Eigen::SelfAdjointEigenSolver<Matrix> es(Az);
  OracleSolution sol;
  // SelfAdjointEigenSolver sorts ascending: index 0 is the left mover.
  sol.c_minus = es.eigenvalues()[0];
  sol.c_plus = es.eigenvalues()[1];
  if (!(sol.c_minus < 0.0 && sol.c_plus > 0.0))
    throw analysis_error("oracle expects one left- and one right-moving characteristic");
  sol.v_minus = es.eigenvectors().col(0);
  sol.v_plus = es.eigenvectors().col(1);
  sol.lambda = lam.real();
  sol.length = nf.geometry.length;
  sol.initial = *data.initial_expr;

  sol.refl_left = reflection_coefficient(sol.v_plus, sol.v_minus, left.kernel_basis);
  sol.refl_right = reflection_coefficient(sol.v_minus, sol.v_plus, right.kernel_basis);
  return sol;
}

} // namespace dibvp
