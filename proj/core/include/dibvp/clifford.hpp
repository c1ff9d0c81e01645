#ifndef DIBVP_CLIFFORD_HPP
#define DIBVP_CLIFFORD_HPP

#include <Eigen/Dense>
#include <vector>

namespace dibvp {

using Matrix = Eigen::MatrixXcd;
using SpinVector = Eigen::VectorXcd;

/// A concrete gamma-matrix representation of the Clifford algebra for
/// signature (-,+,...,+) in n spatial dimensions, fiber rank
/// N = 2^floor((n+1)/2).
///
/// Conventions: gamma0 is Hermitian with gamma0^2 = Id, the spatial gammas are
/// anti-Hermitian with square -Id, and all pairs anticommute. Immutable after
/// construction.
struct GammaRep {
  int spatial_dim = 0;
  int rank = 0;
  Matrix gamma0;
  std::vector<Matrix> gammas; // gamma(e_1) ... gamma(e_n)

  /// gamma(e_0) * gamma(e_j), 1-based j. Hermitian with eigenvalues +-1.
  Matrix a(int j) const;
};

/// Per-identity maximal absolute entrywise residuals of the algebra relations.
struct AlgebraReport {
  double anticommutator = 0.0;   // max over (mu,nu) of |{g_mu,g_nu} + 2 eta_{mu nu}|
  double gamma0_hermitian = 0.0; // |gamma0 - gamma0^dag|
  double gamma0_square = 0.0;    // |gamma0^2 - Id|
  double spatial_antihermitian = 0.0;
  double a_hermitian = 0.0;      // |(g0 gj) - (g0 gj)^dag|
  double tolerance = 1e-12;
  bool passed = false;

  double max_residual() const;
};

/// Deterministic representation for any n >= 1 by iterated doubling from the
/// 2x2 seed gamma0 = diag(1,-1), gamma1 = [[0,i],[i,0]].
GammaRep build_gamma_rep(int spatial_dim);

/// Check every algebra relation of the representation; passed iff all
/// residuals are at or below tol. Throws structural_error on shape mismatch.
AlgebraReport verify_clifford(const GammaRep& rep, double tol = 1e-12);

} // namespace dibvp

#endif
