#ifndef DIBVP_BOUNDARY_HPP
#define DIBVP_BOUNDARY_HPP

#include <string>
#include <vector>

#include "dibvp/clifford.hpp"
#include "dibvp/data.hpp"
#include "dibvp/system.hpp"

namespace dibvp {

enum class Side { Left, Right }; // left wall z=0 (outward normal -e_n), right wall z=L

/// Local boundary condition M psi = 0 on one wall. M is constant in time;
/// kernel data are precomputed so the stepper can project states onto ker M.
struct BoundaryCondition {
  Side side = Side::Left;
  std::string label;
  Matrix M;
  int kernel_dim = 0;
  Matrix kernel_basis;      // N x r, orthonormal columns
  Matrix kernel_projector;  // orthogonal projector onto ker M
  Matrix gamma_normal;      // gamma(n) for this wall, n the outward normal

  int rank() const { return static_cast<int>(M.rows()); }
};

/// Flux matrix gamma(e_0) gamma(n) whose vanishing on ker M is the
/// admissibility condition.
Matrix flux_matrix(const GammaRep& rep, const BoundaryCondition& bc);

/// MIT bag condition M = gamma(n) - i with kernel projector P_- = (Id - i gamma(n))/2.
BoundaryCondition make_mit(const GammaRep& rep, Side side);

/// Chirality condition M = Id - gamma(n) G for an involutive unitary G that
/// anticommutes with every gamma. Throws "not a chirality element" otherwise.
BoundaryCondition make_chirality(const GammaRep& rep, Side side, const Matrix& G);

/// The phase-fixed product of all gammas; exists (anticommuting) for odd n.
Matrix standard_chirality(const GammaRep& rep);

/// General constant matrix condition; kernel computed by SVD. Invertible M is
/// accepted here and flagged by admissibility_check.
BoundaryCondition make_matrix_condition(const GammaRep& rep, Side side, const Matrix& M);

/// Adjoint condition: the returned condition's kernel is
/// { phi : <phi, gamma(e0) gamma(n) psi> = 0 for all psi in ker M }.
BoundaryCondition adjoint_condition(const BoundaryCondition& bc, const GammaRep& rep);

struct AdmissibilityReport {
  double max_flux_residual = 0.0; // over the Gram matrices of ker M and ker M-adjoint
  bool rank_constant = true;
  int kernel_dim = 0;
  bool invertible = false; // "invertible M: no admissible states"
  bool admissible = false;
  double tolerance = 1e-12;
};

AdmissibilityReport admissibility_check(const BoundaryCondition& bc, const GammaRep& rep,
                                        double tol = 1e-12);

/// Compatibility jets at the corner where the wall meets Sigma_0.
struct JetReport {
  std::vector<SpinVector> jets;  // h_0 ... h_K evaluated at the corner
  std::vector<double> residuals; // rho_1 ... rho_K
  double tolerance = 0.0;
  bool compatible = false;
  int order = 0;
};

/// Jets of dt Psi = G Psi + f at the corner by the Leibniz recursion
/// h_k = sum_j binom(k-1,j) (dt^j G) h_{k-1-j} + dt^{k-1} f, with residual
/// rho_k = |sum_j binom(k,j) (dt^j M) h_{k-j}| (M constant here, so M h_k).
/// tolerance = tol_scale * 1e-8 * (1 + |h|_inf). Analytic data are
/// differentiated symbolically; grid initial data use one-sided second-order
/// differences and need nz >= 2K+3.
JetReport compatibility_jets(const NormalForm& nf, const BoundaryCondition& bc,
                             const CauchyData& data, int order, double tol_scale = 1.0);

} // namespace dibvp

#endif
