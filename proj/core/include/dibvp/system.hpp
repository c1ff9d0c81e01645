#ifndef DIBVP_SYSTEM_HPP
#define DIBVP_SYSTEM_HPP

#include <optional>
#include <vector>

#include "dibvp/clifford.hpp"
#include "dibvp/expression.hpp"
#include "dibvp/geometry.hpp"

namespace dibvp {

/// Matrix-valued field on the strip, stored as a sum of scalar expressions
/// times constant matrices. Closed under the t/z derivatives the density
/// terms of the positivity analysis need.
class MatrixField {
public:
  MatrixField() = default;
  explicit MatrixField(Matrix constant);
  MatrixField(Expr coefficient, Matrix matrix);

  static MatrixField zero(int rank);

  Matrix eval(double t, double z) const;
  MatrixField d_dt() const;
  MatrixField d_dz() const;
  MatrixField scaled(const Expr& s) const;
  MatrixField operator+(const MatrixField& other) const;
  /// Entry (i,k) as a scalar expression in (t, z).
  Expr entry(int i, int k) const;

  bool is_constant() const;
  int rank() const;

private:
  std::vector<std::pair<Expr, Matrix>> terms_;
};

/// First-order system S = A0 dt + sum_j Aj dxj + Az dz + B acting on spinor
/// fields over the strip. The last spatial direction is the straightened
/// boundary-normal coordinate. Immutable after assembly.
struct HyperbolicSystem {
  GammaRep rep;
  Geometry geometry;
  double lambda = 0.0;
  MatrixField A0;
  std::vector<MatrixField> A_tangential; // directions x^1 ... x^{n-1}
  MatrixField A_z;
  MatrixField B;
  Expr sqrt_g; // density |det g|^(1/2)

  int rank() const { return rep.rank; }
};

/// Sampling lattice for pointwise scans over the strip.
struct SampleRegion {
  int nt = 21;
  int nz = 21;
};

/// kappa = herm(B) - [d/dt(sqrt_g A0) + d/dz(sqrt_g Az)] / sqrt_g, the
/// symmetrized zero-order part whose positivity is condition (P).
struct KappaField {
  MatrixField kappa;
  double min_eig = 0.0;
  double hermiticity_residual = 0.0;
  SampleRegion region;
  double min_eig_t = 0.0; // sample point attaining the minimum
  double min_eig_z = 0.0;
};

enum class DerivativeMethod { Symbolic, FiniteDifference };

struct SymbolReport {
  double min_symbol_eig = 0.0;     // over all sampled covectors and points
  double hermiticity_residual = 0.0; // condition (S) residual over A0, Aj, Az
  bool passes_S = false;
  bool passes_H = false;
  double tolerance = 1e-12;
};

/// Boundary-adapted form d/dt - G with identity time coefficient:
/// G = -(sum_j Ahat_j dxj + Ahat_z dz + Bhat). The multiplier Id - a g0 gn is
/// the invertible factor relating Ahat_z to g0 gn; its spectrum certifies
/// that Ahat_z is nonsingular on the walls.
struct NormalForm {
  GammaRep rep;
  Geometry geometry;
  Matrix multiplier;                  // Id - a g0 gn
  std::vector<double> multiplier_spectrum;
  MatrixField E;                      // A0^{-1}, the time-normalizing factor
  std::vector<MatrixField> Ahat_tangential;
  MatrixField Ahat_z;
  MatrixField Bhat;
  double lambda = 0.0;

  bool constant_coefficients() const;
  /// Constant coefficient matrices for the stepper; throws analysis_error if
  /// the fields are not constant.
  Matrix constant_Az() const;
  Matrix constant_B() const;
  /// Spectral radius of Ahat_z, the maximal characteristic speed.
  double max_characteristic_speed() const;
};

/// Assemble S = -i g(e0) D + lambda Id over the geometry in straightened
/// coordinates. extra_zero_order, when given, must be Hermitian (a
/// mass/potential term) and is folded into B.
HyperbolicSystem dirac_to_system(const Geometry& geometry, const GammaRep& rep, double lambda,
                                 const std::optional<Matrix>& extra_zero_order = std::nullopt);

KappaField compute_kappa(const HyperbolicSystem& system, const SampleRegion& region = {},
                         DerivativeMethod method = DerivativeMethod::Symbolic);

/// Smallest lambda (to within 1e-6) making min_eig(kappa) >= margin on the
/// region. margin must be positive.
double choose_lambda(const HyperbolicSystem& system_template, const SampleRegion& region,
                     double margin);

/// Evaluate conditions (S) and (H) on the given covector samples
/// tau = dt + sum alpha_j dx^j (alpha per spatial direction).
SymbolReport check_symbol(const HyperbolicSystem& system,
                          const std::vector<Eigen::VectorXd>& covector_alphas,
                          const SampleRegion& region = {});

NormalForm normal_form(const HyperbolicSystem& system);

} // namespace dibvp

#endif
