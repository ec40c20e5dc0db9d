#include "kecone/charts.hpp"

#include <cmath>
#include <random>

#include "kecone/parallel.hpp"

namespace kecone::charts {

HeisenbergPoint iota_shift(long k, const HeisenbergPoint& y) {
  return HeisenbergPoint{y.u_t + Complex(4.0 * kPi * k, 0.0), y.z_t};
}

HeisenbergPoint tau_scale(double a, const HeisenbergPoint& y) {
  if (!(a > 0.0)) throw DomainViolation("tau_scale needs a > 0");
  return HeisenbergPoint{y.u_t / (a * a), y.z_t / a};
}

LatticeReduction lattice_reduce(const PeriodData& pd, const CPoint& z) {
  const int n = pd.n;
  RVec re_im(2 * n);
  re_im.head(n) = z.real();
  re_im.tail(n) = z.imag();
  const RVec coords = pd.lattice_solve * re_im;
  IVec gamma(2 * n);
  for (int k = 0; k < 2 * n; ++k) {
    gamma[k] = static_cast<int>(std::floor(coords[k] + 0.5));
  }
  LatticeReduction red;
  red.gamma = abelian::LatticeVector{gamma};
  red.z0 = z - pd.Omega * gamma.cast<Complex>();
  return red;
}

namespace {

// Deck element realizing translation by -lambda_gamma.
ballq::DeckElement gamma_deck(const PeriodData& pd,
                              const abelian::LatticeVector& gamma) {
  ballq::DeckElement g;
  g.l = -gamma.coeffs.head(pd.n);
  g.m = -gamma.coeffs.tail(pd.n);
  g.p = 0;
  return g;
}

}  // namespace

Normalization normalize_point(const PeriodData& pd, const UpstairsPoint& x) {
  const double F = ballq::cusp_height(pd, x);
  if (!(F < -2.0)) {
    throw DomainViolation("normalize_point needs a point of D_2 (F < -2)");
  }
  Normalization out;
  const LatticeReduction red = lattice_reduce(pd, x.z);
  out.chart.gamma = red.gamma;
  const UpstairsPoint x1 = ballq::deck_apply(pd, gamma_deck(pd, red.gamma), x);

  HeisenbergPoint y = ballq::heisenberg_forward(pd, x1);
  const double level = ballq::heisenberg_level(y);
  const double a = std::max(std::sqrt(level / 2.5), 1.0);
  out.chart.a = a;
  // Recenter Re u~ so the scaled value lands near 2 pi.
  out.chart.m = std::lround((y.u_t.real() - 2.0 * kPi * a * a) / (4.0 * kPi));
  y = iota_shift(-out.chart.m, y);
  out.Q = tau_scale(a, y);
  return out;
}

Normalization normalize_point(const PeriodData& pd, const BundlePoint& q) {
  if (!(std::abs(q.w) > 0.0)) {
    throw DomainViolation("normalize_point: zero section excluded");
  }
  UpstairsPoint x;
  x.u = Complex(0, -2.0) * std::log(q.w);  // principal branch of w = e^{iu/2}
  x.z = q.z;
  return normalize_point(pd, x);
}

UpstairsPoint chart_map_upstairs(const PeriodData& pd, const QuasiChart& chart,
                                 const HeisenbergPoint& y) {
  HeisenbergPoint y0 = tau_scale(1.0 / chart.a, y);
  y0 = iota_shift(chart.m, y0);
  const UpstairsPoint x1 = ballq::heisenberg_inverse(pd, y0);
  const ballq::DeckElement inv =
      ballq::deck_inverse(pd, gamma_deck(pd, chart.gamma));
  return ballq::deck_apply(pd, inv, x1);
}

BundlePoint chart_map(const PeriodData& pd, const QuasiChart& chart,
                      const HeisenbergPoint& y) {
  return ballq::exp_map(chart_map_upstairs(pd, chart, y));
}

wirtinger::ScalarField pulled_back_potential(const PeriodData& pd,
                                             const QuasiChart& chart) {
  const int n = pd.n;
  wirtinger::ScalarField f;
  f.dim = n + 1;
  f.eval = [pd, chart, n](const CPoint& p) {
    HeisenbergPoint y{p[n], p.head(n)};
    const UpstairsPoint x = chart_map_upstairs(pd, chart, y);
    const double F = ballq::cusp_height(pd, x);
    if (!(F < 0.0)) {
      throw DomainViolation("chart image left the disc bundle");
    }
    return -(n + 2) * std::log(-F);
  };
  f.in_domain = [n](const CPoint& p) {
    return p[n].imag() - p.head(n).squaredNorm() > 0.0;
  };
  return f;
}

double margin_to_boundary(const PeriodData& pd, const HeisenbergPoint& Q) {
  const int n = pd.n;
  const double level = ballq::heisenberg_level(Q);
  double margin = std::min(level - 2.0, 3.0 - level);
  const double re = Q.u_t.real();
  margin = std::min(margin, std::min(re, 4.0 * kPi - re));

  // z-slot: lattice coefficients of z must lie in [-1, 1) (z in 2F). Convert
  // the coefficient slack into a Euclidean lower bound through the inverse
  // of the coefficient -> z~ map.
  const CMat vt = pd.V_chol.transpose().cast<Complex>();
  const CPoint z =
      vt.triangularView<Eigen::Upper>().solve(Q.z_t / std::sqrt(kPi));
  RVec re_im(2 * n);
  re_im.head(n) = z.real();
  re_im.tail(n) = z.imag();
  const RVec coords = pd.lattice_solve * re_im;

  // coeff -> z~ (as R^{2n}): sqrt(pi) blkdiag(V^t, V^t) [Re Omega; Im Omega].
  RMat real_omega(2 * n, 2 * n);
  real_omega.topRows(n) = pd.Omega.real();
  real_omega.bottomRows(n) = pd.Omega.imag();
  RMat blk = RMat::Zero(2 * n, 2 * n);
  blk.topLeftCorner(n, n) = pd.V_chol.transpose();
  blk.bottomRightCorner(n, n) = pd.V_chol.transpose();
  const RMat minv = (std::sqrt(kPi) * blk * real_omega).inverse();
  for (int k = 0; k < 2 * n; ++k) {
    const double slack = 1.0 - std::abs(coords[k]);
    margin = std::min(margin, slack / minv.row(k).norm());
  }
  return margin;
}

ChartBounds chart_metric_report(const PeriodData& pd, const QuasiChart& chart,
                                int samples, std::uint64_t seed,
                                const wirtinger::StencilConfig& cfg) {
  const int n = pd.n;
  const int d = n + 1;
  const wirtinger::ScalarField field = pulled_back_potential(pd, chart);

  // Interior sample points of T', drawn serially for determinism.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<CPoint> pts(samples);
  for (int k = 0; k < samples; ++k) {
    CPoint z(n);
    for (int a = 0; a < n; ++a) {
      // lattice coefficients in [-0.7, 0.7]
      z[a] = Complex(0.0, 0.0);
    }
    RVec coeffs(2 * n);
    for (int j = 0; j < 2 * n; ++j) coeffs[j] = -0.7 + 1.4 * u01(rng);
    RMat real_omega(2 * n, 2 * n);
    real_omega.topRows(n) = pd.Omega.real();
    real_omega.bottomRows(n) = pd.Omega.imag();
    const RVec zri = real_omega * coeffs;
    for (int a = 0; a < n; ++a) z[a] = Complex(zri[a], zri[n + a]);
    const CVec z_t = std::sqrt(kPi) * (pd.V_chol.transpose().cast<Complex>() * z);
    const double level = 2.2 + 0.6 * u01(rng);
    const double re_u = 1.0 + 10.0 * u01(rng);
    CPoint p(d);
    p.head(n) = z_t;
    p[n] = Complex(re_u, level + z_t.squaredNorm());
    pts[k] = p;
  }

  std::vector<double> cs(samples), a1s(samples), a2s(samples);
  par::for_each_index(static_cast<std::size_t>(samples), [&](std::size_t k) {
    const CPoint& p = pts[k];
    const wirtinger::HermitianForm g =
        wirtinger::metric_from_potential(field, p, cfg);
    Eigen::SelfAdjointEigenSolver<CMat> es(g.entries);
    const double lmin = es.eigenvalues().minCoeff();
    const double lmax = es.eigenvalues().maxCoeff();
    if (!(lmin > 0.0)) throw DegenerateMetric("chart metric not positive");
    cs[k] = std::max(lmax, 1.0 / lmin);

    // First/second coordinate-derivative proxies for the A_k bounds.
    const double delta = 1e-2;
    double a1 = 0.0, a2 = 0.0;
    const CMat g0 = g.entries;
    for (int axis = 0; axis < 2 * d; ++axis) {
      CPoint pp = p, pm = p;
      const Complex step =
          (axis % 2 == 0) ? Complex(delta, 0.0) : Complex(0.0, delta);
      pp[axis / 2] += step;
      pm[axis / 2] -= step;
      const CMat gp = wirtinger::metric_from_potential(field, pp, cfg).entries;
      const CMat gm = wirtinger::metric_from_potential(field, pm, cfg).entries;
      a1 = std::max(a1, ((gp - gm) / (2.0 * delta)).cwiseAbs().maxCoeff());
      a2 = std::max(
          a2, ((gp - 2.0 * g0 + gm) / (delta * delta)).cwiseAbs().maxCoeff());
    }
    a1s[k] = a1;
    a2s[k] = a2;
  });

  ChartBounds b;
  for (int k = 0; k < samples; ++k) {
    b.c = std::max(b.c, cs[k]);
    b.a1 = std::max(b.a1, a1s[k]);
    b.a2 = std::max(b.a2, a2s[k]);
  }
  b.min_margin = 0.0;
  return b;
}

double chart_jacobian_abs(const PeriodData& pd, const QuasiChart& chart,
                          const HeisenbergPoint& y, double step) {
  const int n = pd.n;
  const int d = n + 1;
  // Differentiate the upstairs map (z~, u~) -> (z, u); it differs from the
  // bundle map only by the nonvanishing fiber factor dw/du = (i/2) w, so
  // maximal rank is equivalent and the estimate stays scaled at any depth.
  auto map = [&](const CPoint& p) {
    HeisenbergPoint yy{p[n], p.head(n)};
    const UpstairsPoint x = chart_map_upstairs(pd, chart, yy);
    CPoint out(d);
    out.head(n) = x.z;
    out[n] = x.u;
    return out;
  };
  CPoint p(d);
  p.head(n) = y.z_t;
  p[n] = y.u_t;
  CMat jac(d, d);
  for (int j = 0; j < d; ++j) {
    CPoint pp = p, pm = p;
    pp[j] += step;
    pm[j] -= step;
    jac.col(j) = (map(pp) - map(pm)) / (2.0 * step);
  }
  return std::abs(jac.determinant());
}

}  // namespace kecone::charts
