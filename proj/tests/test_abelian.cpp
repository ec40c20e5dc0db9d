#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "kecone/abelian.hpp"
#include "reference_data.hpp"

using namespace kecone;
using namespace kecone::abelian;

TEST_CASE("derived data of the square torus") {
  const PeriodData pd = refdata::pd1();
  CHECK(pd.Y(0, 0) == doctest::Approx(1.0));
  CHECK(pd.W(0, 0) == doctest::Approx(1.0));
  CHECK(pd.V_chol(0, 0) == doctest::Approx(1.0));
  CHECK(pd.Omega(0, 0) == Complex(1.0, 0.0));
  CHECK(pd.Omega(0, 1) == Complex(0.0, -1.0));
  CHECK(pd.b_const()[0] == doctest::Approx(1.0));
}

TEST_CASE("make_period_data rejects malformed input") {
  IVec delta(1);
  delta << 1;
  CMat Z(1, 1);
  Z(0, 0) = Complex(0.0, -1.0);

  IVec bad_delta(1);
  bad_delta << 0;
  CHECK_THROWS_AS(make_period_data(1, bad_delta, Z, CVec::Zero(1)),
                  InvalidPeriodData);

  CMat pos(1, 1);
  pos(0, 0) = Complex(0.0, 1.0);  // Y = -Im Z negative
  CHECK_THROWS_AS(make_period_data(1, delta, pos, CVec::Zero(1)),
                  InvalidPeriodData);

  CMat asym(2, 2);
  asym << Complex(0, -1), Complex(0.3, 0), Complex(0.1, 0), Complex(0, -1);
  IVec delta2(2);
  delta2 << 1, 1;
  CHECK_THROWS_AS(make_period_data(2, delta2, asym, CVec::Zero(2)),
                  InvalidPeriodData);
}

TEST_CASE("riemann relations hold on all reference instances") {
  for (const PeriodData& pd :
       {refdata::pd1(), refdata::pd2(), refdata::pd3(), refdata::pd4()}) {
    const ValidationReport rep = validate_period_data(pd);
    CHECK(rep.valid);
    CHECK(rep.riemann_residual <= 1e-12);
    CHECK(rep.im_form_max_eig < 0.0);
  }
}

TEST_CASE("riemann residual grows linearly in a symmetry-breaking slip") {
  // Perturb one off-diagonal entry of Omega after construction; the first
  // Riemann relation must detect it at first order.
  PeriodData pd = refdata::pd2();
  std::vector<double> res;
  for (double eps : {1e-6, 2e-6, 4e-6}) {
    PeriodData mod = pd;
    mod.Omega(0, 3) += Complex(eps, 0.0);
    double r = 0.0;
    try {
      validate_period_data(mod);
    } catch (const InvalidPeriodData&) {
      r = eps;  // thrown as expected
    }
    CMat qinv = CMat::Zero(4, 4);
    for (int a = 0; a < 2; ++a) {
      qinv(a, 2 + a) = Complex(-1.0 / pd.delta[a], 0.0);
      qinv(2 + a, a) = Complex(1.0 / pd.delta[a], 0.0);
    }
    res.push_back(
        (mod.Omega * qinv * mod.Omega.transpose()).cwiseAbs().maxCoeff());
    CHECK(r > 0.0);
  }
  CHECK(res[1] / res[0] == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(res[2] / res[1] == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("lattice embedding uses the period columns") {
  const PeriodData pd = refdata::pd2();
  IVec c(4);
  c << 0, 1, 0, 0;
  const CPoint z = lattice_embed(pd, LatticeVector{c});
  CHECK(z[0] == Complex(0.0, 0.0));
  CHECK(z[1] == Complex(2.0, 0.0));  // delta_2 = 2
  IVec c2(4);
  c2 << 0, 0, 1, 0;
  const CPoint z2 = lattice_embed(pd, LatticeVector{c2});
  CHECK(std::abs(z2[0] - pd.Z(0, 0)) < 1e-15);
  CHECK(std::abs(z2[1] - pd.Z(1, 0)) < 1e-15);
}

TEST_CASE("bundle metric at the origin of the square torus") {
  const PeriodData pd = refdata::pd1();
  CHECK(log_hermitian_h(pd, CPoint::Zero(1)) == doctest::Approx(kPi / 2));
  CHECK(hermitian_h(pd, CPoint::Zero(1)) ==
        doctest::Approx(std::exp(kPi / 2)));
}

TEST_CASE("transition factor of the Z-generator at z = 1/4") {
  const PeriodData pd = refdata::pd1();
  IVec c(2);
  c << 0, 1;
  CPoint z(1);
  z[0] = Complex(0.25, 0.0);
  // e(z) = exp(-2 pi i / 4) = -i.
  const Complex e = transition_factor(pd, LatticeVector{c}, z);
  CHECK(std::abs(e - Complex(0.0, -1.0)) < 1e-13);

  IVec real_gen(2);
  real_gen << 1, 0;
  CHECK(std::abs(transition_factor(pd, LatticeVector{real_gen}, z) -
                 Complex(1.0, 0.0)) < 1e-15);
}

TEST_CASE("cocycle composition law") {
  for (const PeriodData& pd : {refdata::pd1(), refdata::pd3()}) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> ui(-3, 3);
    std::uniform_real_distribution<double> ur(-1.0, 1.0);
    for (int k = 0; k < 50; ++k) {
      IVec a(2 * pd.n), b(2 * pd.n);
      for (int j = 0; j < 2 * pd.n; ++j) {
        a[j] = ui(rng);
        b[j] = ui(rng);
      }
      CPoint z(pd.n);
      for (int j = 0; j < pd.n; ++j) z[j] = Complex(ur(rng), ur(rng));
      const CPoint la = lattice_embed(pd, LatticeVector{a});
      const Complex lhs = transition_factor(pd, LatticeVector{b}, z + la) *
                          transition_factor(pd, LatticeVector{a}, z);
      const Complex rhs =
          transition_factor(pd, LatticeVector{IVec(a + b)}, z);
      CHECK(std::abs(lhs / rhs - 1.0) < 1e-11);
    }
  }
}

TEST_CASE("the bundle norm descends to the quotient") {
  for (const PeriodData& pd :
       {refdata::pd1(), refdata::pd2(), refdata::pd3(), refdata::pd4()}) {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<int> ui(-3, 3);
    std::uniform_real_distribution<double> ur(-1.0, 1.0);
    for (int k = 0; k < 50; ++k) {
      IVec a(2 * pd.n);
      for (int j = 0; j < 2 * pd.n; ++j) a[j] = ui(rng);
      CPoint z(pd.n);
      for (int j = 0; j < pd.n; ++j) z[j] = Complex(ur(rng), ur(rng));
      CHECK(descent_check(pd, LatticeVector{a}, z) < 1e-11);
    }
  }
}

TEST_CASE("curvature of the bundle metric is pi W") {
  for (const PeriodData& pd : {refdata::pd1(), refdata::pd3()}) {
    CPoint z(pd.n);
    for (int j = 0; j < pd.n; ++j) z[j] = Complex(0.3 * j - 0.2, 0.1 + 0.2 * j);
    CHECK(chern_check(pd, z) < 5e-9);
  }
}
