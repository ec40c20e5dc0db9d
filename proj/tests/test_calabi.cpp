#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "kecone/calabi.hpp"
#include "reference_data.hpp"

using namespace kecone;
using namespace kecone::calabi;

TEST_CASE("closed-form profile values at s = -3, n = 1") {
  const ProfileValue v = rho_closed(1, -3.0);
  CHECK(v.rho == doctest::Approx(-3.0 * std::log(3.0) + 3.0));
  CHECK(v.rho_s == doctest::Approx(0.0));
  CHECK(v.rho_ss == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(rho_closed(1, 0.0), DomainViolation);
}

TEST_CASE("closed form solves the ODE exactly for both normalizations") {
  for (int n : {1, 2}) {
    double c_exact = 1.0;
    for (int i = 0; i < n + 1; ++i) c_exact *= (n + 2);
    for (double s : {-1.2, -3.0, -10.0, -60.0}) {
      const ProfileValue v = rho_closed(n, s);
      CHECK(std::abs(ode_residual(v, s, n, c_exact)) < 1e-12);

      // Against c_norm = 1 the defect is exactly (c - 1)(-s)^{-(n+2)}.
      const double slip = (c_exact - 1.0) * std::pow(-s, -(n + 2.0));
      CHECK(ode_residual(v, s, n, 1.0) == doctest::Approx(slip));

      // Shifting rho by ln c turns it into the c_norm = 1 solution.
      ProfileValue shifted = v;
      shifted.rho += (n + 1) * std::log(n + 2.0);
      CHECK(std::abs(ode_residual(shifted, s, n, 1.0)) < 1e-12);
    }
  }
}

TEST_CASE("first integral vanishes on the closed form") {
  for (int n : {1, 2}) {
    for (double s : {-1.5, -4.0, -25.0}) {
      CHECK(std::abs(first_integral(rho_closed(n, s), n)) < 1e-14);
    }
  }
}

TEST_CASE("numeric integration reproduces the closed form") {
  for (int n : {1, 2}) {
    double c_exact = 1.0;
    for (int i = 0; i < n + 1; ++i) c_exact *= (n + 2);
    const ProfileValue ic = rho_closed(n, -5.0);
    const AnsatzProfile tab =
        ode_solve(n, c_exact, -5.0, ic.rho, ic.rho_s, -40.0, 1e-12);
    CHECK_FALSE(tab.closed());
    CHECK(tab.s_min() == doctest::Approx(-40.0));
    for (int k = 0; k < 100; ++k) {
      const double s = -5.2 - 34.5 * k / 99.0;
      const ProfileValue num = tab.eval(s);
      const ProfileValue ref = rho_closed(n, s);
      CHECK(std::abs(num.rho - ref.rho) < 1e-8);
      CHECK(std::abs(num.rho_s - ref.rho_s) < 1e-8);
      CHECK(std::abs(num.rho_ss - ref.rho_ss) < 1e-7);
    }
    CHECK(std::abs(tab.first_integral()) < 1e-10);
  }
}

TEST_CASE("degenerate initial data is rejected with the last valid s") {
  CHECK_THROWS_AS(ode_solve(1, 9.0, -3.0, 0.0, -1.0, -10.0, 1e-8),
                  DegenerateMetric);
  // A strong source integrated toward the cusp drives f = 1 + rho_s through
  // zero; the error message reports where.
  try {
    ode_solve(1, 10.0, -3.0, 5.0, -0.5, -10.0, 1e-8);
    CHECK(false);
  } catch (const DegenerateMetric& e) {
    CHECK(std::string(e.what()).find("at s = ") != std::string::npos);
  }
}

TEST_CASE("evaluation outside the tabulated range is a domain error") {
  const ProfileValue ic = rho_closed(1, -5.0);
  const AnsatzProfile tab = ode_solve(1, 9.0, -5.0, ic.rho, ic.rho_s, -10.0,
                                      1e-10);
  CHECK_THROWS_AS(tab.eval(-11.0), DomainViolation);
  CHECK_THROWS_AS(tab.eval(-4.0), DomainViolation);
}

TEST_CASE("flat geometry exposes the bundle data") {
  const auto pd = refdata::pd1();
  const LineBundleGeom geom = make_flat_geom(pd);
  CPoint z(1);
  z[0] = Complex(0.3, -0.2);
  CHECK(geom.log_a(z) == doctest::Approx(abelian::log_hermitian_h(pd, z)));
  CHECK(std::abs(geom.hess_log_a(z)(0, 0) - Complex(kPi, 0)) < 1e-14);
  // grad log a = -i pi W v with v = 2 Im z + b.
  const double v = 2.0 * z[0].imag() + 1.0;
  CHECK(std::abs(geom.grad_log_a(z)[0] - Complex(0, -kPi * v)) < 1e-13);
}

TEST_CASE("perturbed geometry matches finite differences of log a") {
  const auto pd = refdata::pd3();
  const LineBundleGeom geom = make_perturbed_geom(pd, 0.1);
  wirtinger::ScalarField f;
  f.dim = 2;
  f.eval = [&](const CPoint& z) { return geom.log_a(z); };
  CPoint z(2);
  z[0] = Complex(0.21, -0.13);
  z[1] = Complex(-0.34, 0.27);
  wirtinger::StencilConfig cfg;
  const CMat fd = wirtinger::metric_from_potential(f, z, cfg).entries;
  CHECK((fd - geom.hess_log_a(z)).cwiseAbs().maxCoeff() < 1e-9);
  for (int i = 0; i < 2; ++i) {
    auto ev = [&](const CPoint& q) { return Complex(geom.log_a(q), 0.0); };
    const Complex d = wirtinger::holomorphic_derivative(ev, f, z, i, cfg);
    CHECK(std::abs(d - geom.grad_log_a(z)[i]) < 1e-9);
  }
}

TEST_CASE("assembled metric agrees with the potential Hessian") {
  for (const auto& pd : {refdata::pd1(), refdata::pd3()}) {
    const LineBundleGeom geom = make_flat_geom(pd);
    const AnsatzProfile profile = AnsatzProfile::closed_form(pd.n);
    const wirtinger::ScalarField phi = total_potential_field(geom, profile);
    wirtinger::StencilConfig cfg;
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> uz(-0.5, 0.5);
    std::uniform_real_distribution<double> us(-12.0, -2.0);
    for (int k = 0; k < 10; ++k) {
      CPoint p(pd.n + 1);
      for (int a = 0; a < pd.n; ++a) p[a] = Complex(uz(rng), uz(rng));
      const double s = us(rng);
      p[pd.n] = std::polar(
          std::exp(0.5 * (s - geom.log_a(p.head(pd.n)))), 0.7);
      BundlePoint b{p[pd.n], p.head(pd.n)};
      const CMat g = calabi_metric(geom, profile, b).entries;
      const CMat fd = wirtinger::metric_from_potential(phi, p, cfg).entries;
      CHECK((g - fd).cwiseAbs().maxCoeff() <
            1e-6 * g.cwiseAbs().maxCoeff());
      CHECK(det_identity_check(geom, profile, b) < 1e-10);
      CHECK(wirtinger::min_eigenvalue(calabi_metric(geom, profile, b)) > 0.0);
    }
  }
}

TEST_CASE("total and quotient potentials differ by -2 log|eta|") {
  const auto pd = refdata::pd1();
  const LineBundleGeom geom = make_flat_geom(pd);
  const AnsatzProfile profile = AnsatzProfile::closed_form(1);
  const wirtinger::ScalarField tot = total_potential_field(geom, profile);
  const wirtinger::ScalarField quo = ballq::quotient_potential_field(pd);
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> uz(-0.5, 0.5);
  std::uniform_real_distribution<double> us(-9.0, -1.6);
  for (int k = 0; k < 25; ++k) {
    CPoint p(2);
    p[0] = Complex(uz(rng), uz(rng));
    const double s = us(rng);
    p[1] = std::polar(std::exp(0.5 * (s - geom.log_a(p.head(1)))), 1.1);
    const double diff = tot.eval(p) - quo.eval(p);
    CHECK(diff == doctest::Approx(-2.0 * std::log(std::abs(p[1]))));
  }
}

TEST_CASE("fiber length per level-doubling is constant") {
  for (const auto& pd : {refdata::pd1(), refdata::pd3()}) {
    const LineBundleGeom geom = make_flat_geom(pd);
    const AnsatzProfile profile = AnsatzProfile::closed_form(pd.n);
    const double target = 0.5 * std::sqrt(pd.n + 2.0) * std::log(2.0);
    const CPoint z = CPoint::Zero(pd.n);
    for (double k1 : {2.0, 8.0, 32.0, 128.0}) {
      CHECK(std::abs(fiber_length(geom, profile, z, k1, 2.0 * k1) - target) <
            1e-6);
    }
    // Additivity over concatenated ranges.
    const double whole = fiber_length(geom, profile, z, 2.0, 32.0);
    const double split = fiber_length(geom, profile, z, 2.0, 8.0) +
                         fiber_length(geom, profile, z, 8.0, 32.0);
    CHECK(whole == doctest::Approx(split));
    CHECK_THROWS_AS(fiber_length(geom, profile, z, 8.0, 2.0),
                    DomainViolation);
  }
}

TEST_CASE("curvature probe is flat on the unperturbed geometry") {
  const auto pd = refdata::pd1();
  const LineBundleGeom geom = make_flat_geom(pd);
  const AnsatzProfile profile = AnsatzProfile::closed_form(1);
  const ProbeResult res =
      curvature_probe(geom, profile, CPoint::Zero(1), 0.3, -12.0, -3.0, 6);
  CHECK(res.rows.size() == 6);
  CHECK(res.curvature_spread < 1e-3);
  CHECK(res.rows.front().sect_curv < 0.0);
  for (const ProbeRow& r : res.rows) {
    CHECK(r.einstein_residual < 1e-3);
  }
}
