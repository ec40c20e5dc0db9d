#include "kecone/ballquotient.hpp"

#include <algorithm>
#include <cmath>

namespace kecone::ballq {

namespace {

Complex quad_shift(const PeriodData& pd, const CVec& z) {
  // i pi z^t W z - i (pi/2) b^t W b - 2 pi z^t W b, the u-shift of the
  // Heisenberg change with b the real constant vector of the h-exponent.
  // The b^t W b term is imaginary: it cancels the constant part of log h
  // in Im u~, so that Im u~ - sum |z~|^2 = -F(u, z) holds exactly.
  const RVec b = pd.b_const();
  const CMat wc = pd.W.cast<Complex>();
  const CVec bc = b.cast<Complex>();
  const Complex zwz = z.transpose() * wc * z;
  const Complex zwb = z.transpose() * wc * bc;
  const double bwb = b.dot(pd.W * b);
  return Complex(0, kPi) * zwz - Complex(0, 0.5 * kPi) * bwb -
         2.0 * kPi * zwb;
}

}  // namespace

BundlePoint exp_map(const UpstairsPoint& x) {
  return BundlePoint{std::exp(Complex(0, 0.5) * x.u), x.z};
}

double cusp_height(const PeriodData& pd, const UpstairsPoint& x) {
  return -x.u.imag() + abelian::log_hermitian_h(pd, x.z);
}

HeisenbergPoint heisenberg_forward(const PeriodData& pd,
                                   const UpstairsPoint& x) {
  HeisenbergPoint y;
  y.u_t = x.u + quad_shift(pd, x.z);
  y.z_t = std::sqrt(kPi) * (pd.V_chol.transpose().cast<Complex>() * x.z);
  return y;
}

UpstairsPoint heisenberg_inverse(const PeriodData& pd,
                                 const HeisenbergPoint& y) {
  UpstairsPoint x;
  const CMat vt = pd.V_chol.transpose().cast<Complex>();
  x.z = vt.triangularView<Eigen::Upper>().solve(y.z_t / std::sqrt(kPi));
  x.u = y.u_t - quad_shift(pd, x.z);
  return x;
}

double heisenberg_level(const HeisenbergPoint& y) {
  return y.u_t.imag() - y.z_t.squaredNorm();
}

CMat deck_matrix(const PeriodData& pd, const DeckElement& g) {
  const int n = pd.n;
  if (g.m.size() != n || g.l.size() != n) {
    throw InvalidPeriodData("deck element has wrong dimension");
  }
  CMat mat = CMat::Identity(n + 2, n + 2);
  Complex corner(4.0 * kPi * g.p, 0.0);
  for (int a = 0; a < n; ++a) {
    mat(0, 1 + a) = Complex(-4.0 * kPi * g.m[a], 0.0);
    corner += 2.0 * kPi * static_cast<double>(g.m[a]) * pd.Z(a, a);
    for (int b = 0; b < n; ++b) {
      corner -= 2.0 * kPi * static_cast<double>(g.m[a]) *
                static_cast<double>(g.m[b]) * pd.Z(a, b);
    }
    Complex last(static_cast<double>(pd.delta[a] * g.l[a]), 0.0);
    for (int b = 0; b < n; ++b) {
      last += pd.Z(a, b) * static_cast<double>(g.m[b]);
    }
    mat(1 + a, n + 1) = last;
  }
  mat(0, n + 1) = corner;
  return mat;
}

UpstairsPoint deck_apply(const PeriodData& pd, const DeckElement& g,
                         const UpstairsPoint& x) {
  const int n = pd.n;
  CVec hom(n + 2);
  hom[0] = x.u;
  for (int a = 0; a < n; ++a) hom[1 + a] = x.z[a] - pd.t[a];
  hom[n + 1] = Complex(1.0, 0.0);
  const CVec out = deck_matrix(pd, g) * hom;
  UpstairsPoint y;
  y.u = out[0];
  y.z.resize(n);
  for (int a = 0; a < n; ++a) y.z[a] = out[1 + a] + pd.t[a];
  return y;
}

DeckElement deck_compose(const PeriodData& pd, const DeckElement& g1,
                         const DeckElement& g2) {
  DeckElement g;
  g.m = g1.m + g2.m;
  g.l = g1.l + g2.l;
  long cross = 0;
  for (int a = 0; a < pd.n; ++a) {
    cross += static_cast<long>(pd.delta[a]) * g1.l[a] * g2.m[a];
  }
  g.p = g1.p + g2.p - cross;

  const CMat lhs = deck_matrix(pd, g);
  const CMat rhs = deck_matrix(pd, g2) * deck_matrix(pd, g1);
  const double res = (lhs - rhs).cwiseAbs().maxCoeff();
  if (res > 1e-10) {
    throw GroupClosureError("deck composition disagrees with matrix product");
  }
  return g;
}

DeckElement deck_inverse(const PeriodData& pd, const DeckElement& g) {
  DeckElement inv;
  inv.m = -g.m;
  inv.l = -g.l;
  long cross = 0;
  for (int a = 0; a < pd.n; ++a) {
    cross += static_cast<long>(pd.delta[a]) * g.l[a] * g.m[a];
  }
  inv.p = -g.p - cross;
  return inv;
}

double ball_potential(const HeisenbergPoint& y, int n) {
  const double level = heisenberg_level(y);
  if (!(level > 0.0)) {
    throw DomainViolation("point outside the Heisenberg model domain");
  }
  return -(n + 2) * std::log(level);
}

double quotient_potential(const PeriodData& pd, const BundlePoint& b, int n) {
  const double log_r =
      2.0 * std::log(std::abs(b.w)) + abelian::log_hermitian_h(pd, b.z);
  if (!(log_r < 0.0) || !std::isfinite(log_r)) {
    throw DomainViolation("point outside the punctured disc bundle");
  }
  return -(n + 2) * std::log(-log_r);
}

wirtinger::ScalarField ball_potential_field(int n) {
  wirtinger::ScalarField f;
  f.dim = n + 1;
  f.eval = [n](const CPoint& p) {
    const double level = p[n].imag() - p.head(n).squaredNorm();
    if (!(level > 0.0)) {
      throw DomainViolation("point outside the Heisenberg model domain");
    }
    return -(n + 2) * std::log(level);
  };
  f.in_domain = [n](const CPoint& p) {
    return p[n].imag() - p.head(n).squaredNorm() > 0.0;
  };
  // The potential depends on u/level and z/sqrt(level) only, so steps in
  // those units keep the stencils uniformly conditioned at every height.
  f.step_scale = [n](const CPoint& p) {
    RVec s(n + 1);
    const double level = p[n].imag() - p.head(n).squaredNorm();
    const double r = std::max(level, 1e-12);
    for (int a = 0; a < n; ++a) s[a] = std::sqrt(r);
    s[n] = r;
    return s;
  };
  return f;
}

wirtinger::ScalarField quotient_potential_field(const PeriodData& pd) {
  const int n = pd.n;
  wirtinger::ScalarField f;
  f.dim = n + 1;
  f.eval = [pd, n](const CPoint& p) {
    const double log_r = 2.0 * std::log(std::abs(p[n])) +
                         abelian::log_hermitian_h(pd, p.head(n));
    if (!(log_r < 0.0)) {
      throw DomainViolation("point outside the punctured disc bundle");
    }
    return -(n + 2) * std::log(-log_r);
  };
  f.in_domain = [pd, n](const CPoint& p) {
    const double aw = std::abs(p[n]);
    if (!(aw > 0.0)) return false;
    return 2.0 * std::log(aw) + abelian::log_hermitian_h(pd, p.head(n)) < 0.0;
  };
  // Fiber steps live in the log chart; deeper into the cusp the potential
  // flattens in log r, so scales grow with depth to keep roundoff out of
  // the nested Ricci stencils.
  f.log_axes = {n};
  f.step_scale = [pd, n](const CPoint& p) {
    RVec s = RVec::Ones(n + 1);
    const double depth = -(2.0 * std::log(std::abs(p[n])) +
                           abelian::log_hermitian_h(pd, p.head(n)));
    const double kz = std::clamp(std::sqrt(depth) / 2.0, 1.0, 4.0);
    for (int a = 0; a < n; ++a) s[a] = kz;
    s[n] = std::clamp(depth / 2.0, 2.0, 20.0);
    return s;
  };
  return f;
}

double literal_sign_min_eig(const PeriodData& pd, const CPoint& p,
                            const wirtinger::StencilConfig& cfg) {
  const int n = pd.n;
  wirtinger::ScalarField f = quotient_potential_field(pd);
  auto base = f.eval;
  f.eval = [base, n](const CPoint& q) { return -base(q) / (n + 2); };
  const wirtinger::HermitianForm hess =
      wirtinger::metric_from_potential(f, p, cfg);
  return wirtinger::min_eigenvalue(hess);
}

}  // namespace kecone::ballq
