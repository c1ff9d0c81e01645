#include "dibvp/boundary.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

#include "dibvp/errors.hpp"

namespace dibvp {

namespace {

const Complex kI{0.0, 1.0};

Matrix gamma_normal_for(const GammaRep& rep, Side side) {
  const int n = rep.spatial_dim;
  return side == Side::Left ? Matrix(-rep.gammas[static_cast<size_t>(n - 1)])
                            : rep.gammas[static_cast<size_t>(n - 1)];
}

// Orthonormal basis of the eigenspace of a Hermitian matrix for eigenvalue ev.
Matrix hermitian_eigenspace(const Matrix& H, double ev, double tol = 1e-8) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(H);
  std::vector<int> idx;
  for (int i = 0; i < H.rows(); ++i)
    if (std::abs(es.eigenvalues()[i] - ev) < tol) idx.push_back(i);
  Matrix basis(H.rows(), static_cast<int>(idx.size()));
  for (size_t k = 0; k < idx.size(); ++k) basis.col(static_cast<int>(k)) = es.eigenvectors().col(idx[k]);
  return basis;
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

} // namespace

Matrix flux_matrix(const GammaRep& rep, const BoundaryCondition& bc) {
  return rep.gamma0 * bc.gamma_normal;
}

BoundaryCondition make_mit(const GammaRep& rep, Side side) {
  const int N = rep.rank;
  const Matrix id = Matrix::Identity(N, N);
  BoundaryCondition bc;
  bc.side = side;
  bc.label = "mit";
  bc.gamma_normal = gamma_normal_for(rep, side);
  bc.M = bc.gamma_normal - kI * id;
  bc.kernel_projector = 0.5 * (id - kI * bc.gamma_normal); // P_-
  bc.kernel_basis = hermitian_eigenspace(kI * bc.gamma_normal, -1.0);
  bc.kernel_dim = static_cast<int>(bc.kernel_basis.cols());
  return bc;
}

BoundaryCondition make_chirality(const GammaRep& rep, Side side, const Matrix& G) {
  const int N = rep.rank;
  const Matrix id = Matrix::Identity(N, N);
  if (G.rows() != N || G.cols() != N) throw structural_error("chirality element has wrong shape");
  const double tol = 1e-12;
  if ((G * G - id).cwiseAbs().maxCoeff() > tol ||
      (G.adjoint() * G - id).cwiseAbs().maxCoeff() > tol)
    throw structural_error("not a chirality element");
  if ((G * rep.gamma0 + rep.gamma0 * G).cwiseAbs().maxCoeff() > tol)
    throw structural_error("not a chirality element");
  for (const Matrix& g : rep.gammas)
    if ((G * g + g * G).cwiseAbs().maxCoeff() > tol)
      throw structural_error("not a chirality element");

  BoundaryCondition bc;
  bc.side = side;
  bc.label = "chirality";
  bc.gamma_normal = gamma_normal_for(rep, side);
  bc.M = id - bc.gamma_normal * G;
  // gamma(n) G is Hermitian, involutive and trace free; its +1 eigenspace is ker M.
  Matrix H = bc.gamma_normal * G;
  bc.kernel_basis = hermitian_eigenspace(H, 1.0);
  bc.kernel_dim = static_cast<int>(bc.kernel_basis.cols());
  bc.kernel_projector = bc.kernel_basis * bc.kernel_basis.adjoint();
  return bc;
}

Matrix standard_chirality(const GammaRep& rep) {
  if (rep.spatial_dim % 2 == 0)
    throw structural_error("no anticommuting chirality element in even spatial dimension");
  Matrix w = rep.gamma0;
  for (const Matrix& g : rep.gammas) w = w * g;
  const int N = rep.rank;
  Matrix w2 = w * w;
  if ((w2 - Matrix::Identity(N, N)).cwiseAbs().maxCoeff() < 1e-10) return w;
  return kI * w;
}

BoundaryCondition make_matrix_condition(const GammaRep& rep, Side side, const Matrix& M) {
  const int N = rep.rank;
  if (M.rows() != N || M.cols() != N) throw structural_error("boundary matrix has wrong shape");
  BoundaryCondition bc;
  bc.side = side;
  bc.label = "matrix";
  bc.gamma_normal = gamma_normal_for(rep, side);
  bc.M = M;
  Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeFullV);
  const double cutoff = 1e-10 * std::max(1.0, svd.singularValues().maxCoeff());
  std::vector<int> null_idx;
  for (int i = 0; i < N; ++i)
    if (svd.singularValues()[i] <= cutoff) null_idx.push_back(i);
  bc.kernel_dim = static_cast<int>(null_idx.size());
  bc.kernel_basis = Matrix(N, bc.kernel_dim);
  for (size_t k = 0; k < null_idx.size(); ++k)
    bc.kernel_basis.col(static_cast<int>(k)) = svd.matrixV().col(null_idx[k]);
  bc.kernel_projector = bc.kernel_basis * bc.kernel_basis.adjoint();
  return bc;
}

BoundaryCondition adjoint_condition(const BoundaryCondition& bc, const GammaRep& rep) {
  const int N = rep.rank;
  const int r = bc.kernel_dim;
  if (r == 0 || r == N)
    throw structural_error("adjoint condition undefined for invertible or zero M");

  // ker M-adjoint = (F ker M)^perp with F the flux matrix; F is invertible, so
  // the complement has dimension N - r.
  Matrix W = flux_matrix(rep, bc) * bc.kernel_basis; // N x r
  Eigen::JacobiSVD<Matrix> svd(W, Eigen::ComputeFullU);
  Matrix range = svd.matrixU().leftCols(r);      // span of F ker M
  Matrix complement = svd.matrixU().rightCols(N - r);

  BoundaryCondition adj;
  adj.side = bc.side;
  adj.label = bc.label + "_adjoint";
  adj.gamma_normal = bc.gamma_normal;
  adj.M = range * range.adjoint(); // any matrix with kernel (F ker M)^perp
  adj.kernel_basis = complement;
  adj.kernel_dim = N - r;
  adj.kernel_projector = complement * complement.adjoint();
  return adj;
}

AdmissibilityReport admissibility_check(const BoundaryCondition& bc, const GammaRep& rep,
                                        double tol) {
  AdmissibilityReport rpt;
  rpt.tolerance = tol;
  rpt.kernel_dim = bc.kernel_dim;
  rpt.rank_constant = true; // conditions here are constant in t
  const int N = rep.rank;
  if (bc.kernel_dim == 0 || bc.kernel_dim == N) {
    rpt.invertible = bc.kernel_dim == 0;
    rpt.admissible = false;
    return rpt;
  }
  const Matrix F = flux_matrix(rep, bc);
  // The flux form vanishes on a subspace iff the whole Gram matrix does.
  Matrix gram = bc.kernel_basis.adjoint() * F * bc.kernel_basis;
  rpt.max_flux_residual = gram.cwiseAbs().maxCoeff();
  BoundaryCondition adj = adjoint_condition(bc, rep);
  Matrix gram_adj = adj.kernel_basis.adjoint() * F * adj.kernel_basis;
  rpt.max_flux_residual = std::max(rpt.max_flux_residual, gram_adj.cwiseAbs().maxCoeff());
  rpt.admissible = rpt.max_flux_residual <= tol;
  return rpt;
}

JetReport compatibility_jets(const NormalForm& nf, const BoundaryCondition& bc,
                             const CauchyData& data, int order, double tol_scale) {
  if (order < 1) throw structural_error("jet order must be >= 1");
  const int N = nf.rep.rank;
  const double corner_z = bc.side == Side::Left ? 0.0 : nf.geometry.length;
  const double T = nf.geometry.time_horizon;
  (void)T;

  JetReport rpt;
  rpt.order = order;

  if (data.source_grid.has_value())
    throw analysis_error("compatibility jets need an analytic (or absent) source");

  if (data.initial_expr.has_value()) {
    if (data.initial_expr->rank() != N) throw structural_error("initial field has wrong rank");
    // Precompute dt^j of the coefficient fields of G.
    std::vector<MatrixField> az_derivs{nf.Ahat_z};
    std::vector<MatrixField> b_derivs{nf.Bhat};
    for (int j = 1; j < order; ++j) {
      az_derivs.push_back(az_derivs.back().d_dt());
      b_derivs.push_back(b_derivs.back().d_dt());
    }

    auto apply_Gj = [&](int j, const FieldExpr& v) {
      FieldExpr dzv = v.d_dz();
      FieldExpr out = FieldExpr::zero(N);
      for (int i = 0; i < N; ++i) {
        Expr acc;
        for (int k = 0; k < N; ++k) {
          Expr az_ik = az_derivs[static_cast<size_t>(j)].entry(i, k);
          Expr b_ik = b_derivs[static_cast<size_t>(j)].entry(i, k);
          acc = acc + az_ik * dzv.components[static_cast<size_t>(k)] +
                b_ik * v.components[static_cast<size_t>(k)];
        }
        out.components[static_cast<size_t>(i)] = Expr() - acc;
      }
      return out;
    };

    std::vector<FieldExpr> jets;
    jets.push_back(*data.initial_expr);
    FieldExpr f = data.source_expr.value_or(FieldExpr::zero(N));
    if (f.rank() != N) throw structural_error("source field has wrong rank");
    for (int k = 1; k <= order; ++k) {
      FieldExpr sum = FieldExpr::zero(N);
      for (int j = 0; j <= k - 1; ++j) {
        FieldExpr term = apply_Gj(j, jets[static_cast<size_t>(k - 1 - j)]);
        const double c = binom(k - 1, j);
        for (int i = 0; i < N; ++i)
          sum.components[static_cast<size_t>(i)] =
              sum.components[static_cast<size_t>(i)] +
              Expr(c) * term.components[static_cast<size_t>(i)];
      }
      FieldExpr ft = f;
      for (int j = 0; j < k - 1; ++j) ft = ft.d_dt();
      for (int i = 0; i < N; ++i)
        sum.components[static_cast<size_t>(i)] =
            sum.components[static_cast<size_t>(i)] + ft.components[static_cast<size_t>(i)];
      jets.push_back(std::move(sum));
    }

    for (const FieldExpr& j : jets) rpt.jets.push_back(j.eval(0.0, corner_z));

    double hmax = 0.0;
    for (int s = 0; s <= 100; ++s)
      hmax = std::max(hmax, data.initial_expr->eval(0.0, nf.geometry.length * s / 100.0).norm());
    rpt.tolerance = tol_scale * 1e-8 * (1.0 + hmax);
  } else if (data.initial_grid.has_value()) {
    if (!nf.constant_coefficients())
      throw analysis_error("grid jets need constant coefficients");
    const Matrix& h = *data.initial_grid;
    const int nz = static_cast<int>(h.cols());
    if (h.rows() != N) throw structural_error("initial grid has wrong rank");
    if (nz < 2 * order + 3)
      throw analysis_error("grid too coarse for requested jet order");
    const double dz = nf.geometry.length / (nz - 1);
    const Matrix Az = nf.constant_Az();
    const Matrix B = nf.constant_B();

    auto apply_G = [&](const Matrix& v) {
      Matrix d(N, nz);
      for (int iz = 1; iz + 1 < nz; ++iz) d.col(iz) = (v.col(iz + 1) - v.col(iz - 1)) / (2 * dz);
      d.col(0) = (-3.0 * v.col(0) + 4.0 * v.col(1) - v.col(2)) / (2 * dz);
      d.col(nz - 1) = (3.0 * v.col(nz - 1) - 4.0 * v.col(nz - 2) + v.col(nz - 3)) / (2 * dz);
      return Matrix(-(Az * d) - B * v);
    };

    FieldExpr f = data.source_expr.value_or(FieldExpr::zero(N));
    std::vector<Matrix> jets{h};
    for (int k = 1; k <= order; ++k) {
      Matrix next = apply_G(jets.back());
      FieldExpr ft = f;
      for (int j = 0; j < k - 1; ++j) ft = ft.d_dt();
      for (int iz = 0; iz < nz; ++iz) next.col(iz) += ft.eval(0.0, iz * dz);
      jets.push_back(std::move(next));
    }
    const int corner_idx = bc.side == Side::Left ? 0 : nz - 1;
    for (const Matrix& j : jets) rpt.jets.push_back(j.col(corner_idx));
    double hmax = 0.0;
    for (int iz = 0; iz < nz; ++iz) hmax = std::max(hmax, h.col(iz).norm());
    rpt.tolerance = tol_scale * 1e-8 * (1.0 + hmax);
  } else {
    // no initial data at all: jets of the source alone
    FieldExpr f = data.source_expr.value_or(FieldExpr::zero(N));
    CauchyData with_zero = data;
    with_zero.initial_expr = FieldExpr::zero(N);
    return compatibility_jets(nf, bc, with_zero, order, tol_scale);
  }

  // Constant M: only the j = 0 Leibniz term survives in rho_k.
  for (int k = 1; k <= order; ++k)
    rpt.residuals.push_back((bc.M * rpt.jets[static_cast<size_t>(k)]).norm());
  rpt.compatible = true;
  for (double r : rpt.residuals)
    if (r > rpt.tolerance) rpt.compatible = false;
  return rpt;
}

} // namespace dibvp
