#include "kecone/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>

#include <json.hpp>

#include "kecone/calabi.hpp"
#include "kecone/charts.hpp"
#include "kecone/parallel.hpp"

namespace kecone::report {

namespace {

constexpr const char* kVersion = "0.1.0";

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// Per-check RNG stream: independent of which suites run together.
std::mt19937_64 rng_for(const ToolkitConfig& cfg, const std::string& check) {
  return std::mt19937_64(cfg.seed ^ fnv1a(check));
}

CPoint random_z(std::mt19937_64& rng, int n, double box) {
  std::uniform_real_distribution<double> u(-box, box);
  CPoint z(n);
  for (int a = 0; a < n; ++a) z[a] = Complex(u(rng), u(rng));
  return z;
}

IVec random_ivec(std::mt19937_64& rng, int len, int lo, int hi) {
  std::uniform_int_distribution<int> u(lo, hi);
  IVec v(len);
  for (int k = 0; k < len; ++k) v[k] = u(rng);
  return v;
}

double max_of(const std::vector<double>& v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  return m;
}

using CheckFn = std::function<double(CheckResult&)>;

CheckResult run_check(const std::string& name, double tol, int samples,
                      const CheckFn& fn) {
  CheckResult r;
  r.name = name;
  r.tolerance = tol;
  r.samples = samples;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    r.max_residual = fn(r);
    r.passed = r.max_residual <= tol;
  } catch (const std::exception& e) {
    r.passed = false;
    r.max_residual = std::numeric_limits<double>::infinity();
    r.note = e.what();
  }
  const auto t1 = std::chrono::steady_clock::now();
  r.wall_time = std::chrono::duration<double>(t1 - t0).count();
  return r;
}

// ---------------------------------------------------------------- riemann

void suite_riemann(const ToolkitConfig& cfg, std::vector<CheckResult>& out) {
  out.push_back(run_check("riemann-relations", 1e-12, 1, [&](CheckResult&) {
    const auto rep = abelian::validate_period_data(cfg.pd);
    if (rep.im_form_max_eig >= 0.0) {
      throw InvalidPeriodData("2 Im Z not negative definite");
    }
    return rep.riemann_residual;
  }));
}

// ----------------------------------------------------------------- bundle

void suite_bundle(const ToolkitConfig& cfg, std::vector<CheckResult>& out) {
  const int n = cfg.pd.n;
  out.push_back(run_check("bundle-cocycle", 1e-10, 200, [&](CheckResult&) {
    auto rng = rng_for(cfg, "bundle-cocycle");
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
      abelian::LatticeVector v{random_ivec(rng, 2 * n, -3, 3)};
      abelian::LatticeVector vp{random_ivec(rng, 2 * n, -3, 3)};
      const CPoint z = random_z(rng, n, 1.0);
      const CPoint lam = abelian::lattice_embed(cfg.pd, v);
      abelian::LatticeVector sum{v.coeffs + vp.coeffs};
      const Complex lhs = abelian::transition_factor(cfg.pd, vp, z + lam) *
                          abelian::transition_factor(cfg.pd, v, z);
      const Complex rhs = abelian::transition_factor(cfg.pd, sum, z);
      worst = std::max(worst, std::abs(lhs / rhs - 1.0));
    }
    return worst;
  }));
  out.push_back(run_check("bundle-descent", 1e-10, 200, [&](CheckResult&) {
    auto rng = rng_for(cfg, "bundle-descent");
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
      abelian::LatticeVector v{random_ivec(rng, 2 * n, -3, 3)};
      const CPoint z = random_z(rng, n, 1.0);
      worst = std::max(worst, abelian::descent_check(cfg.pd, v, z));
    }
    return worst;
  }));
  out.push_back(run_check("bundle-chern", cfg.tier2, 10, [&](CheckResult&) {
    auto rng = rng_for(cfg, "bundle-chern");
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
      worst = std::max(worst,
                       abelian::chern_check(cfg.pd, random_z(rng, n, 1.0)));
    }
    return worst;
  }));
}

// ------------------------------------------------------------------- deck

ballq::UpstairsPoint random_upstairs(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> ure(-10.0, 10.0);
  std::uniform_real_distribution<double> uim(0.5, 8.0);
  ballq::UpstairsPoint x;
  x.u = Complex(ure(rng), uim(rng));
  x.z = random_z(rng, n, 1.2);
  return x;
}

void suite_deck(const ToolkitConfig& cfg, std::vector<CheckResult>& out) {
  const int n = cfg.pd.n;
  out.push_back(run_check("deck-invariance", 1e-10, 200, [&](CheckResult&) {
    auto rng = rng_for(cfg, "deck-invariance");
    std::uniform_int_distribution<int> up(-5, 5);
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
      ballq::DeckElement g{random_ivec(rng, n, -5, 5),
                           random_ivec(rng, n, -5, 5), up(rng)};
      const ballq::UpstairsPoint x = random_upstairs(rng, n);
      const double f0 = ballq::cusp_height(cfg.pd, x);
      const double f1 =
          ballq::cusp_height(cfg.pd, ballq::deck_apply(cfg.pd, g, x));
      worst = std::max(worst, std::abs(f1 - f0));
    }
    return worst;
  }));
  out.push_back(run_check("deck-closure", 1e-10, 200, [&](CheckResult&) {
    auto rng = rng_for(cfg, "deck-closure");
    std::uniform_int_distribution<int> up(-5, 5);
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
      ballq::DeckElement g1{random_ivec(rng, n, -5, 5),
                            random_ivec(rng, n, -5, 5), up(rng)};
      ballq::DeckElement g2{random_ivec(rng, n, -5, 5),
                            random_ivec(rng, n, -5, 5), up(rng)};
      const ballq::DeckElement g = ballq::deck_compose(cfg.pd, g1, g2);
      const CMat lhs = ballq::deck_matrix(cfg.pd, g);
      const CMat rhs =
          ballq::deck_matrix(cfg.pd, g2) * ballq::deck_matrix(cfg.pd, g1);
      worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
    }
    return worst;
  }));
}

// ------------------------------------------------------------- heisenberg

void suite_heisenberg(const ToolkitConfig& cfg,
                      std::vector<CheckResult>& out) {
  const int n = cfg.pd.n;
  out.push_back(run_check("heisenberg-identity", 1e-11, 500,
                          [&](CheckResult&) {
    auto rng = rng_for(cfg, "heisenberg-identity");
    double worst = 0.0;
    for (int k = 0; k < 500; ++k) {
      const ballq::UpstairsPoint x = random_upstairs(rng, n);
      const ballq::HeisenbergPoint y =
          ballq::heisenberg_forward(cfg.pd, x);
      worst = std::max(worst, std::abs(ballq::heisenberg_level(y) +
                                       ballq::cusp_height(cfg.pd, x)));
    }
    return worst;
  }));
  out.push_back(run_check("heisenberg-roundtrip", 1e-12, 500,
                          [&](CheckResult&) {
    auto rng = rng_for(cfg, "heisenberg-roundtrip");
    double worst = 0.0;
    for (int k = 0; k < 500; ++k) {
      const ballq::UpstairsPoint x = random_upstairs(rng, n);
      const ballq::UpstairsPoint x2 = ballq::heisenberg_inverse(
          cfg.pd, ballq::heisenberg_forward(cfg.pd, x));
      double err = std::abs(x2.u - x.u);
      err = std::max(err, (x2.z - x.z).cwiseAbs().maxCoeff());
      worst = std::max(worst, err);
    }
    return worst;
  }));
}

// ---------------------------------------------------------- einstein-ball

std::vector<CPoint> sample_bundle_points(const ToolkitConfig& cfg,
                                         const std::string& stream, int count,
                                         double f_lo, double f_hi) {
  const int n = cfg.pd.n;
  auto rng = rng_for(cfg, stream);
  std::uniform_real_distribution<double> uf(f_lo, f_hi);
  std::uniform_real_distribution<double> uph(0.0, 2.0 * kPi);
  std::vector<CPoint> pts;
  pts.reserve(count);
  for (int k = 0; k < count; ++k) {
    const CPoint z = random_z(rng, n, 0.5);
    const double f = uf(rng);
    const double log_abs_w =
        0.5 * (f - abelian::log_hermitian_h(cfg.pd, z));
    CPoint p(n + 1);
    p.head(n) = z;
    p[n] = std::polar(std::exp(log_abs_w), uph(rng));
    pts.push_back(p);
  }
  return pts;
}

void suite_einstein_ball(const ToolkitConfig& cfg,
                         std::vector<CheckResult>& out) {
  out.push_back(run_check("einstein-ball", cfg.tier4, cfg.samples,
                          [&](CheckResult&) {
    const auto pts = sample_bundle_points(cfg, "einstein-ball", cfg.samples,
                                          -8.0, -1.5);
    const wirtinger::ScalarField phi =
        ballq::quotient_potential_field(cfg.pd);
    wirtinger::StencilConfig scfg;
    std::vector<double> res(pts.size());
    par::for_each_index(pts.size(), [&](std::size_t k) {
      res[k] = wirtinger::einstein_residual(phi, pts[k], -1.0, scfg);
    });
    return max_of(res);
  }));
}

// -------------------------------------------------------- einstein-calabi

std::vector<CPoint> sample_calabi_points(const ToolkitConfig& cfg,
                                         const calabi::LineBundleGeom& geom,
                                         const std::string& stream, int count,
                                         double s_lo, double s_hi) {
  const int n = cfg.pd.n;
  auto rng = rng_for(cfg, stream);
  std::uniform_real_distribution<double> us(s_lo, s_hi);
  std::uniform_real_distribution<double> uph(0.0, 2.0 * kPi);
  std::vector<CPoint> pts;
  pts.reserve(count);
  for (int k = 0; k < count; ++k) {
    const CPoint z = random_z(rng, n, 0.5);
    const double s = us(rng);
    const double log_abs_eta = 0.5 * (s - geom.log_a(z));
    CPoint p(n + 1);
    p.head(n) = z;
    p[n] = std::polar(std::exp(log_abs_eta), uph(rng));
    pts.push_back(p);
  }
  return pts;
}

void suite_einstein_calabi(const ToolkitConfig& cfg,
                           std::vector<CheckResult>& out) {
  const int n = cfg.pd.n;
  const calabi::LineBundleGeom geom = calabi::make_flat_geom(cfg.pd);
  const calabi::AnsatzProfile profile = calabi::AnsatzProfile::closed_form(n);
  const wirtinger::ScalarField phi =
      calabi::total_potential_field(geom, profile);

  out.push_back(run_check("einstein-calabi", cfg.tier4, cfg.samples,
                          [&](CheckResult&) {
    const auto pts = sample_calabi_points(cfg, geom, "einstein-calabi",
                                          cfg.samples, cfg.s_range_lo,
                                          cfg.s_range_hi);
    wirtinger::StencilConfig scfg;
    std::vector<double> res(pts.size());
    par::for_each_index(pts.size(), [&](std::size_t k) {
      res[k] = wirtinger::einstein_residual(phi, pts[k], -1.0, scfg);
    });
    return max_of(res);
  }));

  out.push_back(run_check("calabi-assembly", 1e-6, cfg.samples,
                          [&](CheckResult&) {
    const auto pts = sample_calabi_points(cfg, geom, "calabi-assembly",
                                          cfg.samples, cfg.s_range_lo,
                                          cfg.s_range_hi);
    wirtinger::StencilConfig scfg;
    std::vector<double> res(pts.size());
    par::for_each_index(pts.size(), [&](std::size_t k) {
      const CPoint& p = pts[k];
      calabi::BundlePoint b{p[n], p.head(n)};
      const CMat asm_g = calabi::calabi_metric(geom, profile, b).entries;
      const CMat fd_g =
          wirtinger::metric_from_potential(phi, p, scfg).entries;
      res[k] = (asm_g - fd_g).cwiseAbs().maxCoeff() /
               asm_g.cwiseAbs().maxCoeff();
    });
    return max_of(res);
  }));
}

void suite_det_identity(const ToolkitConfig& cfg,
                        std::vector<CheckResult>& out) {
  const int n = cfg.pd.n;
  const calabi::LineBundleGeom geom = calabi::make_flat_geom(cfg.pd);
  const calabi::AnsatzProfile profile = calabi::AnsatzProfile::closed_form(n);
  out.push_back(run_check("det-identity", 1e-8, cfg.samples,
                          [&](CheckResult&) {
    const auto pts = sample_calabi_points(cfg, geom, "det-identity",
                                          cfg.samples, cfg.s_range_lo,
                                          cfg.s_range_hi);
    double worst = 0.0;
    for (const CPoint& p : pts) {
      calabi::BundlePoint b{p[n], p.head(n)};
      worst = std::max(worst, calabi::det_identity_check(geom, profile, b));
    }
    return worst;
  }));
}

// -------------------------------------------------------------------- ode

void suite_ode(const ToolkitConfig& cfg, std::vector<CheckResult>& out,
               bool write_csv) {
  const int n = cfg.pd.n;
  double c_exact = 1.0;
  for (int i = 0; i < n + 1; ++i) c_exact *= (n + 2);

  out.push_back(run_check("ode-closed-form", 1e-12, 100, [&](CheckResult&) {
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      const double s = -1.01 * std::pow(100.0, k / 99.0);
      const calabi::ProfileValue v = calabi::rho_closed(n, s);
      worst = std::max(worst, std::abs(calabi::ode_residual(v, s, n, c_exact)));
    }
    return worst;
  }));

  calabi::AnsatzProfile tab = [&] {
    const calabi::ProfileValue ic = calabi::rho_closed(n, -10.0);
    return calabi::ode_solve(n, c_exact, -10.0, ic.rho, ic.rho_s, -100.0,
                             1e-12);
  }();

  out.push_back(run_check("ode-integration", 1e-8, 200, [&](CheckResult&) {
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
      const double s = -10.1 - 89.8 * k / 199.0;
      const calabi::ProfileValue num = tab.eval(s);
      const calabi::ProfileValue ref = calabi::rho_closed(n, s);
      worst = std::max(worst, std::abs(num.rho - ref.rho));
      worst = std::max(worst,
                       std::abs((1.0 + num.rho_s) - (n + 2) / (-s)));
    }
    return worst;
  }));

  out.push_back(run_check("ode-first-integral", 1e-8,
                          static_cast<int>(tab.grid().size()),
                          [&](CheckResult& r) {
    const double c0 = tab.first_integral();
    double worst = 0.0;
    for (const calabi::ProfileValue& v : tab.nodes()) {
      worst = std::max(worst, std::abs(calabi::first_integral(v, n) - c0));
    }
    r.note = "C = " + std::to_string(c0);
    return worst;
  }));

  if (write_csv) {
    std::ofstream csv(cfg.csv_dir + "/profile.csv");
    csv << "s,rho,rho_s,rho_ss\n";
    for (std::size_t k = 0; k < tab.grid().size(); ++k) {
      const auto& v = tab.nodes()[k];
      csv << tab.grid()[k] << ',' << v.rho << ',' << v.rho_s << ','
          << v.rho_ss << '\n';
    }
  }
}

// --------------------------------------------------------------- coincide

void suite_coincide(const ToolkitConfig& cfg,
                    std::vector<CheckResult>& out) {
  const int n = cfg.pd.n;
  const calabi::LineBundleGeom geom = calabi::make_flat_geom(cfg.pd);
  const calabi::AnsatzProfile profile = calabi::AnsatzProfile::closed_form(n);
  const wirtinger::ScalarField tot =
      calabi::total_potential_field(geom, profile);
  const wirtinger::ScalarField quo = ballq::quotient_potential_field(cfg.pd);

  out.push_back(run_check("coincide-pluriharmonic", 1e-8, cfg.samples,
                          [&](CheckResult&) {
    const auto pts = sample_calabi_points(cfg, geom, "coincide", cfg.samples,
                                          -8.0, -1.5);
    wirtinger::ScalarField diff;
    diff.dim = n + 1;
    diff.eval = [&](const CPoint& p) { return tot.eval(p) - quo.eval(p); };
    diff.in_domain = quo.in_domain;
    diff.step_scale = quo.step_scale;
    diff.log_axes = quo.log_axes;
    wirtinger::StencilConfig scfg;
    scfg.step = 0.02;
    std::vector<double> res(pts.size());
    par::for_each_index(pts.size(), [&](std::size_t k) {
      // Measure in the cusp chart (z, log w): chain factors w_i wbar_j
      // undo the 1/|w|^2 amplification of the fiber entries, which would
      // otherwise swamp a pluriharmonic difference in roundoff.
      CMat m = wirtinger::metric_from_potential(diff, pts[k], scfg).entries;
      m.row(n) *= pts[k][n];
      m.col(n) *= std::conj(pts[k][n]);
      res[k] = m.cwiseAbs().maxCoeff();
    });
    return max_of(res);
  }));

  out.push_back(run_check("coincide-tensor", 1e-6, cfg.samples,
                          [&](CheckResult&) {
    const auto pts = sample_calabi_points(cfg, geom, "coincide", cfg.samples,
                                          -8.0, -1.5);
    wirtinger::StencilConfig scfg;
    std::vector<double> res(pts.size());
    par::for_each_index(pts.size(), [&](std::size_t k) {
      const CPoint& p = pts[k];
      calabi::BundlePoint b{p[n], p.head(n)};
      const CMat asm_g = calabi::calabi_metric(geom, profile, b).entries;
      const CMat fd_g =
          wirtinger::metric_from_potential(quo, p, scfg).entries;
      res[k] = (asm_g - fd_g).cwiseAbs().maxCoeff() /
               asm_g.cwiseAbs().maxCoeff();
    });
    return max_of(res);
  }));
}

// ------------------------------------------------------------------ quasi

void suite_quasi(const ToolkitConfig& cfg, std::vector<CheckResult>& out) {
  const int n = cfg.pd.n;
  auto rng = rng_for(cfg, "quasi");
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uniform_real_distribution<double> ure(-20.0, 20.0);

  struct Case {
    ballq::UpstairsPoint x;
    charts::Normalization nz;
    bool ok = false;
    std::string err;
    double roundtrip = 0.0;
    double margin = 0.0;
  };
  std::vector<Case> cases(cfg.samples);
  for (int k = 0; k < cfg.samples; ++k) {
    const double level =
        std::exp(std::log(3.0) + u01(rng) * (std::log(1e6) - std::log(3.0)));
    Case c;
    c.x.z = random_z(rng, n, 1.0);
    c.x.u = Complex(ure(rng),
                    abelian::log_hermitian_h(cfg.pd, c.x.z) + level);
    cases[k] = c;
  }
  par::for_each_index(cases.size(), [&](std::size_t k) {
    Case& c = cases[k];
    try {
      c.nz = charts::normalize_point(cfg.pd, c.x);
      const ballq::UpstairsPoint back =
          charts::chart_map_upstairs(cfg.pd, c.nz.chart, c.nz.Q);
      double err =
          std::abs(back.u - c.x.u) / std::max(1.0, std::abs(c.x.u));
      err = std::max(err, (back.z - c.x.z).cwiseAbs().maxCoeff());
      c.roundtrip = err;
      c.margin = charts::margin_to_boundary(cfg.pd, c.nz.Q);
      c.ok = true;
    } catch (const std::exception& e) {
      c.err = e.what();
    }
  });

  out.push_back(run_check("quasi-normalize", 1e-9, cfg.samples,
                          [&](CheckResult&) {
    double worst = 0.0;
    for (const Case& c : cases) {
      if (!c.ok) throw NumericError("normalize failed: " + c.err);
      worst = std::max(worst, c.roundtrip);
    }
    return worst;
  }));

  out.push_back(run_check("quasi-margins", 0.0, cfg.samples,
                          [&](CheckResult& r) {
    double min_margin = std::numeric_limits<double>::infinity();
    for (const Case& c : cases) {
      if (!c.ok) throw NumericError("normalize failed: " + c.err);
      min_margin = std::min(min_margin, c.margin);
    }
    r.note = "min margin = " + std::to_string(min_margin);
    return 0.1 - min_margin;  // <= 0 means every margin is at least 0.1
  }));

  out.push_back(run_check("quasi-bounds", 2.0, 50, [&](CheckResult& r) {
    const int n_charts = std::min<int>(50, cases.size());
    std::vector<double> cs(n_charts);
    for (int k = 0; k < n_charts; ++k) {
      if (!cases[k].ok) throw NumericError("normalize failed");
      const charts::ChartBounds b = charts::chart_metric_report(
          cfg.pd, cases[k].nz.chart, 10, cfg.seed + k);
      cs[k] = b.c;
    }
    const double cmax = *std::max_element(cs.begin(), cs.end());
    const double cmin = *std::min_element(cs.begin(), cs.end());
    r.note = "c in [" + std::to_string(cmin) + ", " + std::to_string(cmax) +
             "]";
    return cmax / cmin;
  }));
}

// --------------------------------------------------------------- complete

void suite_complete(const ToolkitConfig& cfg,
                    std::vector<CheckResult>& out) {
  const int n = cfg.pd.n;
  out.push_back(run_check("complete-fiber-length", 1e-4, 4,
                          [&](CheckResult&) {
    const calabi::LineBundleGeom geom = calabi::make_flat_geom(cfg.pd);
    const calabi::AnsatzProfile profile =
        calabi::AnsatzProfile::closed_form(n);
    const double target = 0.5 * std::sqrt(n + 2.0) * std::log(2.0);
    double worst = 0.0;
    for (double k1 : {2.0, 8.0, 32.0, 128.0}) {
      const double len = calabi::fiber_length(geom, profile,
                                              CPoint::Zero(n), k1, 2 * k1);
      worst = std::max(worst, std::abs(len - target));
    }
    return worst;
  }));
}

// ------------------------------------------------------------------ probe

CPoint probe_base(const ToolkitConfig& cfg, double x1) {
  RVec coords = RVec::Zero(2 * cfg.pd.n);
  coords[0] = x1;
  RMat real_omega(2 * cfg.pd.n, 2 * cfg.pd.n);
  real_omega.topRows(cfg.pd.n) = cfg.pd.Omega.real();
  real_omega.bottomRows(cfg.pd.n) = cfg.pd.Omega.imag();
  const RVec zri = real_omega * coords;
  CPoint z(cfg.pd.n);
  for (int a = 0; a < cfg.pd.n; ++a) z[a] = Complex(zri[a], zri[cfg.pd.n + a]);
  return z;
}

void suite_probe(const ToolkitConfig& cfg, std::vector<CheckResult>& out,
                 bool write_csv) {
  const int n = cfg.pd.n;
  const calabi::AnsatzProfile profile = calabi::AnsatzProfile::closed_form(n);

  out.push_back(run_check("probe-flatness", 1e-3, cfg.probe.samples,
                          [&](CheckResult& r) {
    const calabi::LineBundleGeom geom = calabi::make_flat_geom(cfg.pd);
    const calabi::ProbeResult res = calabi::curvature_probe(
        geom, profile, CPoint::Zero(n), cfg.probe.ray_arg_eta, cfg.probe.s_lo,
        cfg.probe.s_hi, cfg.probe.samples);
    r.note = "curvature ~ " + std::to_string(res.rows.front().sect_curv);
    return res.curvature_spread;
  }));

  out.push_back(run_check("probe-blowup", 0.1, cfg.probe.samples,
                          [&](CheckResult& r) {
    const calabi::LineBundleGeom geom =
        calabi::make_perturbed_geom(cfg.pd, cfg.probe.epsilon);
    const calabi::ProbeResult res = calabi::curvature_probe(
        geom, profile, probe_base(cfg, cfg.probe.ray_x1),
        cfg.probe.ray_arg_eta, cfg.probe.s_lo, cfg.probe.s_hi,
        cfg.probe.samples);
    r.note = "slope = " + std::to_string(res.fit_slope) +
             ", R2 = " + std::to_string(res.fit_r2);
    if (write_csv) {
      std::ofstream csv(cfg.csv_dir + "/probe.csv");
      csv << "log_r,sect_curv,einstein_residual\n";
      for (const auto& row : res.rows) {
        csv << row.log_r << ',' << row.sect_curv << ','
            << row.einstein_residual << '\n';
      }
    }
    return 1.0 - res.fit_r2;  // pass iff R^2 >= 0.9
  }));
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "riemann-relations", "bundle",   "deck",        "heisenberg",
      "einstein-ball",     "einstein-calabi", "ode",  "det-identity",
      "coincide",          "quasi",    "complete",    "probe"};
  return names;
}

CheckReport run_suite(const ToolkitConfig& cfg, const std::string& selector) {
  auto selected = [&](const std::string& name) {
    return selector == "all" || selector == name;
  };
  bool known = selector == "all";
  for (const std::string& s : suite_names()) known = known || s == selector;
  if (!known) throw ConfigError("unknown suite selector: " + selector);

  CheckReport rep;
  rep.version = kVersion;
  rep.config_digest = config_digest(cfg);
  if (selected("riemann-relations")) suite_riemann(cfg, rep.checks);
  if (selected("bundle")) suite_bundle(cfg, rep.checks);
  if (selected("deck")) suite_deck(cfg, rep.checks);
  if (selected("heisenberg")) suite_heisenberg(cfg, rep.checks);
  if (selected("einstein-ball")) suite_einstein_ball(cfg, rep.checks);
  if (selected("einstein-calabi")) suite_einstein_calabi(cfg, rep.checks);
  if (selected("ode")) suite_ode(cfg, rep.checks, true);
  if (selected("det-identity")) suite_det_identity(cfg, rep.checks);
  if (selected("coincide")) suite_coincide(cfg, rep.checks);
  if (selected("quasi")) suite_quasi(cfg, rep.checks);
  if (selected("complete")) suite_complete(cfg, rep.checks);
  if (selected("probe")) suite_probe(cfg, rep.checks, true);

  rep.overall_pass = !rep.checks.empty();
  for (const CheckResult& c : rep.checks) {
    rep.overall_pass = rep.overall_pass && c.passed;
  }
  return rep;
}

std::string report_to_json(const CheckReport& rep) {
  nlohmann::ordered_json j;
  j["toolkit"] = rep.toolkit;
  j["version"] = rep.version;
  j["config_digest"] = rep.config_digest;
  j["overall_pass"] = rep.overall_pass;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const CheckResult& c : rep.checks) {
    nlohmann::ordered_json cj;
    cj["name"] = c.name;
    cj["passed"] = c.passed;
    cj["max_residual"] = c.max_residual;
    cj["tolerance"] = c.tolerance;
    cj["samples"] = c.samples;
    cj["wall_time"] = c.wall_time;
    if (!c.note.empty()) cj["note"] = c.note;
    arr.push_back(cj);
  }
  j["checks"] = arr;
  return j.dump(2);
}

void emit_json(const CheckReport& rep, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write report: " + path);
  out << report_to_json(rep) << '\n';
}

void emit_csv(const CheckReport& rep, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write report: " + path);
  out << "name,passed,max_residual,tolerance,samples,wall_time\n";
  for (const CheckResult& c : rep.checks) {
    out << c.name << ',' << (c.passed ? 1 : 0) << ',' << c.max_residual
        << ',' << c.tolerance << ',' << c.samples << ',' << c.wall_time
        << '\n';
  }
}

bool reports_equal_modulo_time(const CheckReport& a, const CheckReport& b) {
  if (a.config_digest != b.config_digest ||
      a.overall_pass != b.overall_pass ||
      a.checks.size() != b.checks.size()) {
    return false;
  }
  for (std::size_t k = 0; k < a.checks.size(); ++k) {
    const CheckResult& x = a.checks[k];
    const CheckResult& y = b.checks[k];
    if (x.name != y.name || x.passed != y.passed ||
        x.max_residual != y.max_residual || x.tolerance != y.tolerance ||
        x.samples != y.samples || x.note != y.note) {
      return false;
    }
  }
  return true;
}

}  // namespace kecone::report
