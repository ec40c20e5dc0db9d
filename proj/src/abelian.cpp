#include "kecone/abelian.hpp"

#include <cmath>

namespace kecone::abelian {

RVec PeriodData::b_const() const {
  RVec b(n);
  for (int a = 0; a < n; ++a) b[a] = Y(a, a) - 2.0 * t[a].imag();
  return b;
}

PeriodData make_period_data(int n, const IVec& delta, const CMat& Z,
                            const CVec& t) {
  if (n < 1) throw InvalidPeriodData("n must be >= 1");
  if (delta.size() != n || Z.rows() != n || Z.cols() != n || t.size() != n) {
    throw InvalidPeriodData("dimension mismatch in period data");
  }
  for (int a = 0; a < n; ++a) {
    if (delta[a] < 1) throw InvalidPeriodData("delta entries must be >= 1");
  }
  const double sym = (Z - Z.transpose()).cwiseAbs().maxCoeff();
  if (sym > 1e-12) {
    throw InvalidPeriodData("Z not symmetric (Riemann relation I)");
  }

  PeriodData pd;
  pd.n = n;
  pd.delta = delta;
  pd.Z = Z;
  pd.t = t;
  pd.X = Z.real();
  pd.Y = -Z.imag();

  Eigen::LLT<RMat> llt_y(pd.Y);
  if (llt_y.info() != Eigen::Success) {
    throw InvalidPeriodData("Y = -Im Z not positive definite (Riemann relation II)");
  }
  pd.W = pd.Y.inverse();
  Eigen::LLT<RMat> llt_w(pd.W);
  if (llt_w.info() != Eigen::Success) {
    throw InvalidPeriodData("W = Y^{-1} not positive definite");
  }
  pd.V_chol = llt_w.matrixL();

  pd.Omega = CMat::Zero(n, 2 * n);
  for (int a = 0; a < n; ++a) pd.Omega(a, a) = Complex(delta[a], 0.0);
  pd.Omega.rightCols(n) = Z;

  RMat real_omega(2 * n, 2 * n);
  real_omega.topRows(n) = pd.Omega.real();
  real_omega.bottomRows(n) = pd.Omega.imag();
  pd.lattice_solve = real_omega.inverse();
  return pd;
}

ValidationReport validate_period_data(const PeriodData& pd, double tol) {
  ValidationReport rep;
  const int n = pd.n;

  // Q = [[0, Delta], [-Delta, 0]], so Q^{-1} = [[0, -Delta^{-1}],
  // [Delta^{-1}, 0]].
  CMat qinv = CMat::Zero(2 * n, 2 * n);
  for (int a = 0; a < n; ++a) {
    qinv(a, n + a) = Complex(-1.0 / pd.delta[a], 0.0);
    qinv(n + a, a) = Complex(1.0 / pd.delta[a], 0.0);
  }
  const CMat r1 = pd.Omega * qinv * pd.Omega.transpose();
  rep.riemann_residual = r1.cwiseAbs().maxCoeff();

  // -i Omega Q^{-1} Omegabar^t, which reduces to 2 Im Z.
  const CMat herm = Complex(0, -1) * (pd.Omega * qinv * pd.Omega.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (herm + herm.adjoint()));
  rep.im_form_max_eig = es.eigenvalues().maxCoeff();
  rep.symmetry_residual = (pd.Z - pd.Z.transpose()).cwiseAbs().maxCoeff();

  rep.valid = rep.riemann_residual <= tol && rep.im_form_max_eig < 0.0;
  if (!rep.valid) {
    rep.message = rep.riemann_residual > tol
                      ? "Omega Q^{-1} Omega^t != 0"
                      : "2 Im Z not negative definite";
    throw InvalidPeriodData(rep.message);
  }
  rep.message = "ok";
  return rep;
}

CPoint lattice_embed(const PeriodData& pd, const LatticeVector& v) {
  if (v.coeffs.size() != 2 * pd.n) {
    throw InvalidPeriodData("lattice vector has wrong length");
  }
  return pd.Omega * v.coeffs.cast<Complex>();
}

namespace {

// One generator step of the cocycle composition. `alpha` indexes the
// lambda_{n+alpha} generator; lambda_alpha generators contribute factor 1.
Complex gen_factor(const PeriodData& pd, int alpha, const CPoint& z) {
  return std::exp(Complex(0, -2.0 * kPi) * (z[alpha] - pd.t[alpha]));
}

}  // namespace

Complex transition_factor(const PeriodData& pd, const LatticeVector& v,
                          const CPoint& z) {
  const int n = pd.n;
  CPoint zc = z;
  Complex factor(1.0, 0.0);
  // lambda_{n+alpha} generators first, ascending alpha.
  for (int a = 0; a < n; ++a) {
    const int count = v.coeffs[n + a];
    const CVec col = pd.Z.col(a);
    for (int k = 0; k < std::abs(count); ++k) {
      if (count > 0) {
        factor *= gen_factor(pd, a, zc);
        zc += col;
      } else {
        zc -= col;
        factor /= gen_factor(pd, a, zc);
      }
    }
  }
  // lambda_alpha generators are identically 1; they only translate z.
  return factor;
}

double log_hermitian_h(const PeriodData& pd, const CPoint& z) {
  // The quadratic exponent contracts c_a = z_a - zbar_a + iY_aa - t_a + tbar_a
  // = i v_a with v real, so log h = (pi/2) v^t W v.
  RVec v = pd.b_const();
  for (int a = 0; a < pd.n; ++a) v[a] += 2.0 * z[a].imag();
  return 0.5 * kPi * v.dot(pd.W * v);
}

double hermitian_h(const PeriodData& pd, const CPoint& z) {
  return std::exp(log_hermitian_h(pd, z));
}

double descent_check(const PeriodData& pd, const LatticeVector& v,
                     const CPoint& z) {
  const CPoint lam = lattice_embed(pd, v);
  const Complex e = transition_factor(pd, v, z);
  const double log_ratio = log_hermitian_h(pd, z + lam) +
                           2.0 * std::log(std::abs(e)) -
                           log_hermitian_h(pd, z);
  return std::abs(std::expm1(log_ratio));
}

wirtinger::ScalarField log_h_field(const PeriodData& pd) {
  wirtinger::ScalarField f;
  f.dim = pd.n;
  f.eval = [pd](const CPoint& z) { return log_hermitian_h(pd, z); };
  return f;
}

double chern_check(const PeriodData& pd, const CPoint& z,
                   const wirtinger::StencilConfig& cfg) {
  const wirtinger::ScalarField f = log_h_field(pd);
  const wirtinger::HermitianForm hess =
      wirtinger::metric_from_potential(f, z, cfg);
  const CMat target = (kPi * pd.W).cast<Complex>();
  return (hess.entries - target).cwiseAbs().maxCoeff();
}

}  // namespace kecone::abelian
