#include "kecone/calabi.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "kecone/parallel.hpp"

namespace kecone::calabi {

namespace {

double pow_int(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

// rho_sss from the ODE, used as the Hermite derivative of rho_ss:
// d/ds rho_ss = rho_ss (f - n rho_ss / f), f = 1 + rho_s.
double rho_sss_from_ode(const ProfileValue& v, int n) {
  const double f = 1.0 + v.rho_s;
  return v.rho_ss * (f - n * v.rho_ss / f);
}

double hermite(double s, double s0, double s1, double y0, double y1,
               double d0, double d1) {
  const double h = s1 - s0;
  const double u = (s - s0) / h;
  const double u2 = u * u;
  const double u3 = u2 * u;
  return (2 * u3 - 3 * u2 + 1) * y0 + (u3 - 2 * u2 + u) * h * d0 +
         (-2 * u3 + 3 * u2) * y1 + (u3 - u2) * h * d1;
}

}  // namespace

ProfileValue rho_closed(int n, double s) {
  if (!(s < 0.0)) throw DomainViolation("closed-form profile needs s < 0");
  ProfileValue v;
  v.rho = -(n + 2) * std::log(-s) - s;
  v.rho_s = -(n + 2) / s - 1.0;
  v.rho_ss = (n + 2) / (s * s);
  return v;
}

double ode_residual(const ProfileValue& v, double s, int n, double c_norm) {
  return pow_int(1.0 + v.rho_s, n) * v.rho_ss - c_norm * std::exp(v.rho + s);
}

double first_integral(const ProfileValue& v, int n) {
  const double f = 1.0 + v.rho_s;
  return (v.rho_ss - f * f / (n + 2)) * pow_int(f, n);
}

AnsatzProfile AnsatzProfile::closed_form(int n) {
  AnsatzProfile p;
  p.closed_ = true;
  p.n_ = n;
  p.c_norm_ = pow_int(n + 2, n + 1);
  p.C_ = 0.0;
  return p;
}

AnsatzProfile AnsatzProfile::tabulated(std::vector<double> s,
                                       std::vector<ProfileValue> values,
                                       int n, double c_norm, double C) {
  if (s.size() != values.size() || s.size() < 2) {
    throw NumericError("tabulated profile needs at least two nodes");
  }
  AnsatzProfile p;
  p.closed_ = false;
  p.n_ = n;
  p.c_norm_ = c_norm;
  p.C_ = C;
  if (s.front() > s.back()) {
    std::reverse(s.begin(), s.end());
    std::reverse(values.begin(), values.end());
  }
  p.s_ = std::move(s);
  p.values_ = std::move(values);
  return p;
}

double AnsatzProfile::s_min() const {
  return closed_ ? -std::numeric_limits<double>::infinity() : s_.front();
}

double AnsatzProfile::s_max() const {
  return closed_ ? 0.0 : s_.back();
}

ProfileValue AnsatzProfile::eval(double s) const {
  if (closed_) return rho_closed(n_, s);
  if (s < s_.front() - 1e-12 || s > s_.back() + 1e-12) {
    throw DomainViolation("s outside the tabulated profile range");
  }
  const auto it = std::upper_bound(s_.begin(), s_.end(), s);
  std::size_t hi = std::min<std::size_t>(
      std::max<std::ptrdiff_t>(it - s_.begin(), 1), s_.size() - 1);
  const std::size_t lo = hi - 1;
  const double s0 = s_[lo], s1 = s_[hi];
  const ProfileValue& a = values_[lo];
  const ProfileValue& b = values_[hi];
  ProfileValue v;
  v.rho = hermite(s, s0, s1, a.rho, b.rho, a.rho_s, b.rho_s);
  v.rho_s = hermite(s, s0, s1, a.rho_s, b.rho_s, a.rho_ss, b.rho_ss);
  v.rho_ss = hermite(s, s0, s1, a.rho_ss, b.rho_ss,
                     rho_sss_from_ode(a, n_), rho_sss_from_ode(b, n_));
  return v;
}

AnsatzProfile ode_solve(int n, double c_norm, double s0, double rho0,
                        double rhos0, double s_end, double tol, double h_max) {
  if (!(1.0 + rhos0 > 0.0)) {
    throw DegenerateMetric("initial data violates 1 + rho_s > 0");
  }
  using State = std::array<double, 2>;
  double last_ok = s0;
  auto sys = [&](const State& y, State& dyds, double s) {
    const double f = 1.0 + y[1];
    if (!(f > 1e-12)) {
      throw DegenerateMetric("profile degenerated (1 + rho_s -> 0) at s = " +
                             std::to_string(last_ok));
    }
    dyds[0] = y[1];
    dyds[1] = c_norm * std::exp(y[0] + s) / pow_int(f, n);
  };

  std::vector<double> grid;
  std::vector<ProfileValue> nodes;
  auto observe = [&](const State& y, double s) {
    last_ok = s;
    ProfileValue v;
    v.rho = y[0];
    v.rho_s = y[1];
    v.rho_ss = c_norm * std::exp(y[0] + s) / pow_int(1.0 + y[1], n);
    grid.push_back(s);
    nodes.push_back(v);
  };

  namespace ode = boost::numeric::odeint;
  State y{rho0, rhos0};
  const double dir = (s_end > s0) ? 1.0 : -1.0;
  auto stepper =
      ode::make_controlled<ode::runge_kutta_dopri5<State>>(tol * 1e-2, tol);
  ode::integrate_const(stepper, sys, y, s0, s_end, dir * h_max, observe);
  // integrate_const may stop one observation short of s_end.
  if (std::abs(grid.back() - s_end) > 1e-12) {
    ode::integrate_adaptive(stepper, sys, y, grid.back(), s_end,
                            dir * h_max * 0.5);
    observe(y, s_end);
  }

  const ProfileValue& v0 = nodes.front();
  const double C = first_integral(v0, n);
  return AnsatzProfile::tabulated(std::move(grid), std::move(nodes), n,
                                  c_norm, C);
}

double LineBundleGeom::x1(const CPoint& z) const {
  RVec re_im(2 * pd.n);
  re_im.head(pd.n) = z.real();
  re_im.tail(pd.n) = z.imag();
  return (pd.lattice_solve.row(0) * re_im)(0);
}

double LineBundleGeom::log_a(const CPoint& z) const {
  double v = abelian::log_hermitian_h(pd, z);
  if (eps != 0.0) v += eps * std::sin(2.0 * kPi * x1(z));
  return v;
}

CVec LineBundleGeom::grad_log_a(const CPoint& z) const {
  RVec v = pd.b_const();
  for (int a = 0; a < pd.n; ++a) v[a] += 2.0 * z[a].imag();
  CVec g = Complex(0, -kPi) * (pd.W * v).cast<Complex>();
  if (eps != 0.0) {
    const RVec row = pd.lattice_solve.row(0);
    CVec gamma(pd.n);
    for (int a = 0; a < pd.n; ++a) {
      gamma[a] = Complex(row[a], -row[pd.n + a]);
    }
    g += eps * kPi * std::cos(2.0 * kPi * x1(z)) * gamma;
  }
  return g;
}

CMat LineBundleGeom::hess_log_a(const CPoint& z) const {
  CMat h = (kPi * pd.W).cast<Complex>();
  if (eps != 0.0) {
    const RVec row = pd.lattice_solve.row(0);
    CVec gamma(pd.n);
    for (int a = 0; a < pd.n; ++a) {
      gamma[a] = Complex(row[a], -row[pd.n + a]);
    }
    h += -eps * kPi * kPi * std::sin(2.0 * kPi * x1(z)) *
         (gamma * gamma.adjoint());
  }
  return h;
}

LineBundleGeom make_flat_geom(const PeriodData& pd) {
  return LineBundleGeom{pd, 0.0};
}

LineBundleGeom make_perturbed_geom(const PeriodData& pd, double eps) {
  return LineBundleGeom{pd, eps};
}

wirtinger::HermitianForm calabi_metric(const LineBundleGeom& geom,
                                       const AnsatzProfile& profile,
                                       const BundlePoint& b) {
  const int n = geom.pd.n;
  if (!(std::abs(b.w) > 0.0)) {
    throw DomainViolation("zero section excluded");
  }
  const double s = geom.log_a(b.z) + 2.0 * std::log(std::abs(b.w));
  const ProfileValue pv = profile.eval(s);

  CMat g = CMat::Zero(n + 1, n + 1);
  g.topLeftCorner(n, n) = (1.0 + pv.rho_s) * geom.hess_log_a(b.z);
  CVec B(n + 1);
  B.head(n) = geom.grad_log_a(b.z);
  B[n] = Complex(1.0, 0.0) / b.w;
  g += pv.rho_ss * (B * B.adjoint());

  CPoint base(n + 1);
  base.head(n) = b.z;
  base[n] = b.w;
  return wirtinger::HermitianForm{g, base, 0.0};
}

double det_identity_check(const LineBundleGeom& geom,
                          const AnsatzProfile& profile, const BundlePoint& b) {
  const int n = geom.pd.n;
  const double s = geom.log_a(b.z) + 2.0 * std::log(std::abs(b.w));
  const ProfileValue pv = profile.eval(s);
  const wirtinger::HermitianForm g = calabi_metric(geom, profile, b);
  const double det = g.entries.determinant().real();
  const double base_det = geom.hess_log_a(b.z).determinant().real();
  const double rhs = pow_int(1.0 + pv.rho_s, n) * base_det * pv.rho_ss /
                     std::norm(b.w);
  return std::abs(det - rhs) / std::max(std::abs(rhs), 1e-300);
}

wirtinger::ScalarField total_potential_field(const LineBundleGeom& geom,
                                             const AnsatzProfile& profile) {
  const int n = geom.pd.n;
  wirtinger::ScalarField f;
  f.dim = n + 1;
  const double smin = profile.s_min();
  const double smax = profile.s_max();
  f.eval = [geom, profile, n](const CPoint& p) {
    const double la = geom.log_a(p.head(n));
    const double s = la + 2.0 * std::log(std::abs(p[n]));
    return la + profile.eval(s).rho;
  };
  f.in_domain = [geom, n, smin, smax](const CPoint& p) {
    const double aw = std::abs(p[n]);
    if (!(aw > 0.0)) return false;
    const double s = geom.log_a(p.head(n)) + 2.0 * std::log(aw);
    return s > smin && s < smax;
  };
  // Fiber steps live in the log chart; both scales grow with depth, where
  // the potential flattens and larger spans keep roundoff out of the
  // nested Ricci stencils.
  f.log_axes = {n};
  f.step_scale = [geom, n](const CPoint& p) {
    RVec s = RVec::Ones(n + 1);
    const double depth =
        -(geom.log_a(p.head(n)) + 2.0 * std::log(std::abs(p[n])));
    const double kz = std::clamp(depth / 6.0, 1.0, 8.0);
    for (int a = 0; a < n; ++a) s[a] = kz;
    s[n] = std::clamp(depth / 2.0, 2.0, 20.0);
    return s;
  };
  return f;
}

double fiber_length(const LineBundleGeom& geom, const AnsatzProfile& profile,
                    const CPoint& z, double k1, double k2) {
  (void)geom;
  (void)z;
  if (!(k2 > k1) || !(k1 > 0.0)) {
    throw DomainViolation("fiber_length needs 0 < k1 < k2");
  }
  // dl = sqrt(g_{eta etabar}) d|eta| = sqrt(rho_ss(s))/2 ds along the ray.
  static const std::array<double, 8> gl_x = {
      -0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
      -0.1834346424956498, 0.1834346424956498, 0.5255324099163290,
      0.7966664774136267, 0.9602898564975363};
  static const std::array<double, 8> gl_w = {
      0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
      0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
      0.2223810344533745, 0.1012285362903763};
  const double a = -k2, b = -k1;
  const int panels = std::max(16, static_cast<int>(8 * std::log(k2 / k1)));
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double pa = a + (b - a) * p / panels;
    const double pb = a + (b - a) * (p + 1) / panels;
    const double mid = 0.5 * (pa + pb), half = 0.5 * (pb - pa);
    for (int q = 0; q < 8; ++q) {
      const double s = mid + half * gl_x[q];
      total += half * gl_w[q] * 0.5 * std::sqrt(profile.eval(s).rho_ss);
    }
  }
  return total;
}

ProbeResult curvature_probe(const LineBundleGeom& geom,
                            const AnsatzProfile& profile, const CPoint& z_base,
                            double arg_eta, double s_lo, double s_hi,
                            int samples, const wirtinger::StencilConfig& cfg) {
  if (samples < 2) throw NumericError("probe needs >= 2 samples");
  const int n = geom.pd.n;
  const int d = n + 1;
  const wirtinger::ScalarField field = total_potential_field(geom, profile);
  wirtinger::StencilConfig outer = cfg;
  outer.step = cfg.step * cfg.outer_step_factor;

  ProbeResult result;
  result.rows.resize(samples);
  par::for_each_index(static_cast<std::size_t>(samples), [&](std::size_t k) {
    const double s = s_lo + (s_hi - s_lo) * static_cast<double>(k) /
                                (samples - 1);
    const double abs_eta =
        std::sqrt(std::exp(s - geom.log_a(z_base)));
    CPoint p(d);
    p.head(n) = z_base;
    p[d - 1] = std::polar(abs_eta, arg_eta);

    const auto metric_at = [&](const CPoint& q) {
      return wirtinger::metric_from_potential(field, q, cfg).entries;
    };
    const CMat g = metric_at(p);

    // R_{1 1bar 1 1bar} = -d1 d1bar g_{1 1bar}
    //                     + g^{qbar p} (d1 g_{1 qbar})(d1bar g_{p 1bar}).
    wirtinger::ScalarField g11;
    g11.dim = d;
    g11.in_domain = field.in_domain;
    g11.step_scale = field.step_scale;
    g11.log_axes = field.log_axes;
    g11.eval = [&](const CPoint& q) { return metric_at(q)(0, 0).real(); };
    const double t1 =
        wirtinger::mixed_derivative(g11, p, 0, 0, outer).real();

    CVec v(d);
    for (int q = 0; q < d; ++q) {
      auto entry = [&, q](const CPoint& pt) { return metric_at(pt)(0, q); };
      v[q] = wirtinger::holomorphic_derivative(entry, field, p, 0, outer);
    }
    const CMat ginv = g.inverse();
    const double corr = (v.transpose() * ginv * v.conjugate())(0).real();
    const double curv_num = -t1 + corr;
    const double g11v = g(0, 0).real();

    ProbeRow row;
    row.log_r = s;
    row.sect_curv = curv_num / (g11v * g11v);
    row.einstein_residual = wirtinger::einstein_residual(field, p, -1.0, cfg);
    result.rows[k] = row;
  });

  // Affine fit of curvature against |log r| = -s.
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (const ProbeRow& r : result.rows) {
    const double x = -r.log_r;
    sx += x;
    sy += r.sect_curv;
    sxx += x * x;
    sxy += x * r.sect_curv;
    syy += r.sect_curv * r.sect_curv;
  }
  const double m = samples;
  const double denom = m * sxx - sx * sx;
  result.fit_slope = (m * sxy - sx * sy) / denom;
  const double ss_tot = syy - sy * sy / m;
  const double intercept = (sy - result.fit_slope * sx) / m;
  double ss_res = 0.0;
  for (const ProbeRow& r : result.rows) {
    const double pred = intercept + result.fit_slope * (-r.log_r);
    ss_res += (r.sect_curv - pred) * (r.sect_curv - pred);
  }
  result.fit_r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;

  double cmin = result.rows.front().sect_curv, cmax = cmin;
  for (const ProbeRow& r : result.rows) {
    cmin = std::min(cmin, r.sect_curv);
    cmax = std::max(cmax, r.sect_curv);
  }
  result.curvature_spread = cmax - cmin;
  return result;
}

}  // namespace kecone::calabi
