#include "dibvp/clifford.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include "dibvp/errors.hpp"

namespace dibvp {

namespace {

constexpr int kMaxSpatialDim = 16; // N = 2^8 = 256 at n = 16

const Complex kI{0.0, 1.0};

Matrix pauli1() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix pauli3() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

// Product gamma(e_0)...gamma(e_n) with the phase fixed so the result is
// anti-Hermitian and squares to -Id. This is the element that extends an
// odd-n set to n+1 spatial dimensions at the same rank.
Matrix volume_element(const GammaRep& rep) {
  Matrix w = rep.gamma0;
  for (const Matrix& g : rep.gammas) w = w * g;
  const int N = rep.rank;
  Matrix w2 = w * w;
  if ((w2 + Matrix::Identity(N, N)).cwiseAbs().maxCoeff() < 1e-10) return w;
  return kI * w;
}

} // namespace

Matrix GammaRep::a(int j) const {
  if (j < 1 || j > spatial_dim) throw structural_error("gamma index out of range");
  return gamma0 * gammas[static_cast<size_t>(j - 1)];
}

double AlgebraReport::max_residual() const {
  double m = anticommutator;
  m = std::max(m, gamma0_hermitian);
  m = std::max(m, gamma0_square);
  m = std::max(m, spatial_antihermitian);
  m = std::max(m, a_hermitian);
  return m;
}

GammaRep build_gamma_rep(int spatial_dim) {
  if (spatial_dim < 1) throw structural_error("spatial_dim must be >= 1");
  if (spatial_dim > kMaxSpatialDim)
    throw structural_error("spatial_dim " + std::to_string(spatial_dim) +
                           " exceeds the supported limit " + std::to_string(kMaxSpatialDim));

  GammaRep rep;
  rep.spatial_dim = 1;
  rep.rank = 2;
  rep.gamma0 = pauli3();
  Matrix g1(2, 2);
  g1 << 0, kI, kI, 0;
  rep.gammas = {g1};

  while (rep.spatial_dim < spatial_dim) {
    if (rep.spatial_dim % 2 == 1) {
      // odd -> even: same rank, append the phase-fixed volume element
      rep.gammas.push_back(volume_element(rep));
      rep.spatial_dim += 1;
    } else {
      // even -> odd: double the rank, G_mu = g_mu (x) s1, new = i Id (x) s3
      const int N = rep.rank;
      Matrix s1 = pauli1(), s3 = pauli3();
      GammaRep next;
      next.spatial_dim = rep.spatial_dim + 1;
      next.rank = 2 * N;
      next.gamma0 = Eigen::kroneckerProduct(s1, rep.gamma0);
      for (const Matrix& g : rep.gammas)
        next.gammas.push_back(Eigen::kroneckerProduct(s1, g));
      next.gammas.push_back(kI * Eigen::kroneckerProduct(s3, Matrix::Identity(N, N)));
      rep = std::move(next);
    }
  }
  return rep;
}

AlgebraReport verify_clifford(const GammaRep& rep, double tol) {
  const int N = rep.rank;
  if (N < 2 || rep.gamma0.rows() != N || rep.gamma0.cols() != N)
    throw structural_error("gamma0 shape does not match rank");
  if (static_cast<int>(rep.gammas.size()) != rep.spatial_dim)
    throw structural_error("wrong number of spatial gamma matrices");
  for (const Matrix& g : rep.gammas)
    if (g.rows() != N || g.cols() != N) throw structural_error("spatial gamma shape mismatch");

  AlgebraReport rpt;
  rpt.tolerance = tol;
  const Matrix id = Matrix::Identity(N, N);

  std::vector<const Matrix*> all;
  all.push_back(&rep.gamma0);
  for (const Matrix& g : rep.gammas) all.push_back(&g);
  const int m = static_cast<int>(all.size());
  for (int mu = 0; mu < m; ++mu) {
    for (int nu = mu; nu < m; ++nu) {
      const double eta = (mu == 0 && nu == 0) ? -1.0 : (mu == nu ? 1.0 : 0.0);
      Matrix ac = (*all[mu]) * (*all[nu]) + (*all[nu]) * (*all[mu]) + 2.0 * eta * id;
      rpt.anticommutator = std::max(rpt.anticommutator, ac.cwiseAbs().maxCoeff());
    }
  }

  rpt.gamma0_hermitian = (rep.gamma0 - rep.gamma0.adjoint()).cwiseAbs().maxCoeff();
  rpt.gamma0_square = (rep.gamma0 * rep.gamma0 - id).cwiseAbs().maxCoeff();
  for (const Matrix& g : rep.gammas) {
    rpt.spatial_antihermitian =
        std::max(rpt.spatial_antihermitian, (g + g.adjoint()).cwiseAbs().maxCoeff());
    Matrix a = rep.gamma0 * g;
    rpt.a_hermitian = std::max(rpt.a_hermitian, (a - a.adjoint()).cwiseAbs().maxCoeff());
  }

  rpt.passed = rpt.max_residual() <= tol;
  return rpt;
}

} // namespace dibvp
