#include "dibvp/system.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "dibvp/errors.hpp"

namespace dibvp {

namespace {

double hermiticity_residual(const Matrix& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

double min_eig_hermitian(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()));
  return es.eigenvalues().minCoeff();
}

} // namespace

MatrixField::MatrixField(Matrix constant) {
  terms_.emplace_back(Expr(1.0), std::move(constant));
}

MatrixField::MatrixField(Expr coefficient, Matrix matrix) {
  terms_.emplace_back(std::move(coefficient), std::move(matrix));
}

MatrixField MatrixField::zero(int rank) { return MatrixField(Matrix::Zero(rank, rank)); }

Matrix MatrixField::eval(double t, double z) const {
  if (terms_.empty()) return Matrix();
  Matrix out = Matrix::Zero(terms_[0].second.rows(), terms_[0].second.cols());
  for (const auto& [coef, mat] : terms_) out += coef.eval(t, z) * mat;
  return out;
}

MatrixField MatrixField::d_dt() const {
  MatrixField out;
  for (const auto& [coef, mat] : terms_) out.terms_.emplace_back(coef.d_dt(), mat);
  return out;
}

MatrixField MatrixField::d_dz() const {
  MatrixField out;
  for (const auto& [coef, mat] : terms_) out.terms_.emplace_back(coef.d_dz(), mat);
  return out;
}

MatrixField MatrixField::scaled(const Expr& s) const {
  MatrixField out;
  for (const auto& [coef, mat] : terms_) out.terms_.emplace_back(s * coef, mat);
  return out;
}

MatrixField MatrixField::operator+(const MatrixField& other) const {
  MatrixField out = *this;
  out.terms_.insert(out.terms_.end(), other.terms_.begin(), other.terms_.end());
  return out;
}

Expr MatrixField::entry(int i, int k) const {
  Expr acc;
  for (const auto& [coef, mat] : terms_) acc = acc + coef * Expr(mat(i, k));
  return acc;
}

bool MatrixField::is_constant() const {
  for (const auto& [coef, mat] : terms_) {
    (void)mat;
    if (!coef.is_constant()) return false;
  }
  return true;
}

int MatrixField::rank() const {
  return terms_.empty() ? 0 : static_cast<int>(terms_[0].second.rows());
}

HyperbolicSystem dirac_to_system(const Geometry& geometry, const GammaRep& rep, double lambda,
                                 const std::optional<Matrix>& extra_zero_order) {
  if (rep.spatial_dim != geometry.spatial_dim)
    throw structural_error("representation and geometry dimensions differ");
  const int N = rep.rank;
  const int n = rep.spatial_dim;

  if (extra_zero_order) {
    if (extra_zero_order->rows() != N || extra_zero_order->cols() != N)
      throw structural_error("extra zero-order term has wrong shape");
    if (hermiticity_residual(*extra_zero_order) > 1e-12)
      throw structural_error("extra zero-order term must be Hermitian");
  }

  HyperbolicSystem sys;
  sys.rep = rep;
  sys.geometry = geometry;
  sys.lambda = lambda;

  Matrix zero_order = lambda * Matrix::Identity(N, N);
  if (extra_zero_order) zero_order += *extra_zero_order;

  if (geometry.kind == Geometry::Kind::HalfMinkowski) {
    const double a = geometry.boundary_speed;
    sys.A0 = MatrixField(Matrix::Identity(N, N));
    for (int j = 1; j <= n - 1; ++j) sys.A_tangential.push_back(MatrixField(rep.a(j)));
    // straightening z -> z - a t turns the normal coefficient into
    // g0 gn - a Id = (Id - a g0 gn) g0 gn
    sys.A_z = MatrixField(rep.a(n) - a * Matrix::Identity(N, N));
    sys.B = MatrixField(zero_order);
    sys.sqrt_g = Expr(1.0);
  } else {
    const Expr beta = geometry.lapse;
    const Expr alpha = geometry.spatial_factor;
    sys.A0 = MatrixField(Expr(1.0) / beta, Matrix::Identity(N, N));
    for (int j = 1; j <= n - 1; ++j)
      sys.A_tangential.push_back(MatrixField(Expr(1.0) / alpha, rep.a(j)));
    sys.A_z = MatrixField(Expr(1.0) / alpha, rep.a(n));
    sys.B = MatrixField(zero_order);
    Expr sg = beta;
    for (int j = 0; j < n; ++j) sg = sg * alpha;
    sys.sqrt_g = sg;
  }
  return sys;
}

KappaField compute_kappa(const HyperbolicSystem& system, const SampleRegion& region,
                         DerivativeMethod method) {
  if (region.nt < 2 || region.nz < 2) throw structural_error("kappa region must be nonempty");
  const int N = system.rank();
  const Geometry& geom = system.geometry;

  // Fields never depend on the tangential coordinates, so only the t and z
  // density derivatives contribute.
  MatrixField dens_t = system.A0.scaled(system.sqrt_g).d_dt();
  MatrixField dens_z = system.A_z.scaled(system.sqrt_g).d_dz();
  Expr inv_sg = Expr(1.0) / system.sqrt_g;
  MatrixField kappa = system.B + dens_t.scaled(-Expr(1.0) * inv_sg) + dens_z.scaled(-inv_sg);

  KappaField out;
  out.kappa = kappa;
  out.region = region;
  out.min_eig = std::numeric_limits<double>::infinity();

  const double fd_step = 1e-4;
  for (int it = 0; it < region.nt; ++it) {
    for (int iz = 0; iz < region.nz; ++iz) {
      const double t = geom.time_horizon * it / (region.nt - 1);
      const double z = geom.length * iz / (region.nz - 1);
      Matrix k;
      if (method == DerivativeMethod::Symbolic) {
        k = kappa.eval(t, z);
      } else {
        auto dens = [&](double tt, double zz) {
          return std::pair<Matrix, Matrix>{
              system.sqrt_g.eval(tt, zz) * system.A0.eval(tt, zz),
              system.sqrt_g.eval(tt, zz) * system.A_z.eval(tt, zz)};
        };
        Matrix dt = (dens(t + fd_step, z).first - dens(t - fd_step, z).first) / (2 * fd_step);
        Matrix dz = (dens(t, z + fd_step).second - dens(t, z - fd_step).second) / (2 * fd_step);
        k = system.B.eval(t, z) - (dt + dz) / system.sqrt_g.eval(t, z).real();
      }
      if (!k.allFinite()) throw analysis_error("kappa evaluation produced non-finite entries");
      out.hermiticity_residual = std::max(out.hermiticity_residual, hermiticity_residual(k));
      double me = min_eig_hermitian(k);
      if (me < out.min_eig) {
        out.min_eig = me;
        out.min_eig_t = t;
        out.min_eig_z = z;
      }
    }
  }
  (void)N;
  return out;
}

double choose_lambda(const HyperbolicSystem& system_template, const SampleRegion& region,
                     double margin) {
  if (margin <= 0.0) throw structural_error("margin must be positive");
  KappaField base = compute_kappa(system_template, region);
  // kappa(lambda) = kappa(base) + (lambda - lambda_base) Id, so the minimum
  // shifts linearly; bisection pins it to the bracketing tolerance.
  const double min0 = base.min_eig - system_template.lambda;
  double lo = margin - min0 - 1.0, hi = margin - min0 + 1.0;
  auto ok = [&](double lam) { return min0 + lam >= margin; };
  while (hi - lo > 1e-6) {
    double mid = 0.5 * (lo + hi);
    (ok(mid) ? hi : lo) = mid;
  }
  return hi;
}

SymbolReport check_symbol(const HyperbolicSystem& system,
                          const std::vector<Eigen::VectorXd>& covector_alphas,
                          const SampleRegion& region) {
  const Geometry& geom = system.geometry;
  const int n = geom.spatial_dim;
  SymbolReport rpt;
  rpt.min_symbol_eig = std::numeric_limits<double>::infinity();

  for (int it = 0; it < region.nt; ++it) {
    for (int iz = 0; iz < region.nz; ++iz) {
      const double t = geom.time_horizon * it / (region.nt - 1);
      const double z = geom.length * iz / (region.nz - 1);
      Matrix a0 = system.A0.eval(t, z);
      std::vector<Matrix> as;
      for (const auto& f : system.A_tangential) as.push_back(f.eval(t, z));
      as.push_back(system.A_z.eval(t, z));

      rpt.hermiticity_residual = std::max(rpt.hermiticity_residual, hermiticity_residual(a0));
      for (const Matrix& m : as)
        rpt.hermiticity_residual = std::max(rpt.hermiticity_residual, hermiticity_residual(m));

      for (const auto& alpha : covector_alphas) {
        if (alpha.size() != n) throw structural_error("covector has wrong dimension");
        Matrix sym = a0;
        for (int j = 0; j < n; ++j) sym += alpha[j] * as[static_cast<size_t>(j)];
        rpt.min_symbol_eig = std::min(rpt.min_symbol_eig, min_eig_hermitian(sym));
      }
    }
  }
  rpt.passes_S = rpt.hermiticity_residual <= rpt.tolerance;
  rpt.passes_H = rpt.min_symbol_eig > 0.0;
  return rpt;
}

bool NormalForm::constant_coefficients() const {
  if (!Ahat_z.is_constant() || !Bhat.is_constant()) return false;
  for (const auto& f : Ahat_tangential)
    if (!f.is_constant()) return false;
  return true;
}

Matrix NormalForm::constant_Az() const {
  if (!Ahat_z.is_constant()) throw analysis_error("Ahat_z is not constant");
  return Ahat_z.eval(0.0, 0.0);
}

Matrix NormalForm::constant_B() const {
  if (!Bhat.is_constant()) throw analysis_error("Bhat is not constant");
  return Bhat.eval(0.0, 0.0);
}

double NormalForm::max_characteristic_speed() const {
  double vmax = 0.0;
  const int nt = 9, nz = 9;
  for (int it = 0; it < nt; ++it) {
    for (int iz = 0; iz < nz; ++iz) {
      const double t = geometry.time_horizon * it / (nt - 1);
      const double z = geometry.length * iz / (nz - 1);
      Matrix az = Ahat_z.eval(t, z);
      Eigen::ComplexEigenSolver<Matrix> es(az);
      vmax = std::max(vmax, es.eigenvalues().cwiseAbs().maxCoeff());
      if (Ahat_z.is_constant()) return vmax;
    }
  }
  return vmax;
}

NormalForm normal_form(const HyperbolicSystem& system) {
  const int N = system.rank();
  const int n = system.geometry.spatial_dim;
  const Matrix id = Matrix::Identity(N, N);

  NormalForm nf;
  nf.rep = system.rep;
  nf.geometry = system.geometry;
  nf.lambda = system.lambda;

  const double a = system.geometry.kind == Geometry::Kind::HalfMinkowski
                       ? system.geometry.boundary_speed
                       : 0.0;
  nf.multiplier = id - a * system.rep.a(n);
  {
    Eigen::SelfAdjointEigenSolver<Matrix> es(nf.multiplier);
    if (es.eigenvalues().cwiseAbs().minCoeff() < 1e-12)
      throw structural_error("boundary not timelike");
    nf.multiplier_spectrum.assign(es.eigenvalues().data(),
                                  es.eigenvalues().data() + es.eigenvalues().size());
  }

  if (system.geometry.kind == Geometry::Kind::HalfMinkowski) {
    // A0 is already the identity in the straightened coordinates.
    nf.E = MatrixField(id);
    nf.Ahat_tangential = system.A_tangential;
    nf.Ahat_z = system.A_z;
    nf.Bhat = system.B;
  } else {
    // A0 = Id / beta, so E = beta Id restores the identity time coefficient.
    Expr beta = system.geometry.lapse;
    nf.E = MatrixField(beta, id);
    for (const auto& f : system.A_tangential) nf.Ahat_tangential.push_back(f.scaled(beta));
    nf.Ahat_z = system.A_z.scaled(beta);
    nf.Bhat = system.B.scaled(beta);
  }

  // Az must stay invertible along both walls.
  for (double z : {0.0, system.geometry.length}) {
    const int nt = 9;
    for (int it = 0; it < nt; ++it) {
      const double t = system.geometry.time_horizon * it / (nt - 1);
      Matrix az = nf.Ahat_z.eval(t, z);
      Eigen::JacobiSVD<Matrix> svd(az);
      if (svd.singularValues().minCoeff() < 1e-12)
        throw structural_error("boundary-normal coefficient singular on the wall");
      if (nf.Ahat_z.is_constant()) break;
    }
    if (nf.Ahat_z.is_constant()) break;
  }
  return nf;
}

} // namespace dibvp
