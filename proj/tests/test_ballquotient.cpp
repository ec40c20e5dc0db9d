#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "kecone/ballquotient.hpp"
#include "reference_data.hpp"

using namespace kecone;
using namespace kecone::ballq;

namespace {

UpstairsPoint up(Complex u, std::initializer_list<Complex> z) {
  UpstairsPoint x;
  x.u = u;
  x.z.resize(static_cast<long>(z.size()));
  long k = 0;
  for (Complex c : z) x.z[k++] = c;
  return x;
}

UpstairsPoint random_up(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> ure(-8.0, 8.0);
  std::uniform_real_distribution<double> uim(0.5, 6.0);
  std::uniform_real_distribution<double> uz(-1.0, 1.0);
  UpstairsPoint x;
  x.u = Complex(ure(rng), uim(rng));
  x.z.resize(n);
  for (int a = 0; a < n; ++a) x.z[a] = Complex(uz(rng), uz(rng));
  return x;
}

IVec iv(std::initializer_list<int> v) {
  IVec out(static_cast<long>(v.size()));
  long k = 0;
  for (int c : v) out[k++] = c;
  return out;
}

}  // namespace

TEST_CASE("exp map") {
  const BundlePoint b = exp_map(up(Complex(0.0, 2.0), {Complex(0.3, 0.1)}));
  CHECK(std::abs(b.w - std::exp(-1.0)) < 1e-15);
  CHECK(b.z[0] == Complex(0.3, 0.1));
}

TEST_CASE("cusp height on the square torus") {
  const auto pd = refdata::pd1();
  const double f = cusp_height(pd, up(Complex(1.0, 5.0), {Complex(0, 0)}));
  CHECK(f == doctest::Approx(-5.0 + kPi / 2));
}

TEST_CASE("cusp height equals the bundle log-norm") {
  const auto pd = refdata::pd3();
  std::mt19937_64 rng(5);
  for (int k = 0; k < 30; ++k) {
    const UpstairsPoint x = random_up(rng, 2);
    const BundlePoint b = exp_map(x);
    const double log_r = 2.0 * std::log(std::abs(b.w)) +
                         abelian::log_hermitian_h(pd, b.z);
    CHECK(std::abs(log_r - cusp_height(pd, x)) < 1e-12);
  }
}

TEST_CASE("heisenberg change hits the defining identity") {
  for (const auto& pd : {refdata::pd1(), refdata::pd3()}) {
    std::mt19937_64 rng(7);
    for (int k = 0; k < 100; ++k) {
      const UpstairsPoint x = random_up(rng, pd.n);
      const HeisenbergPoint y = heisenberg_forward(pd, x);
      CHECK(std::abs(heisenberg_level(y) + cusp_height(pd, x)) < 1e-12);
      const UpstairsPoint x2 = heisenberg_inverse(pd, y);
      CHECK(std::abs(x2.u - x.u) < 1e-12);
      CHECK((x2.z - x.z).cwiseAbs().maxCoeff() < 1e-13);
    }
  }
}

TEST_CASE("deck matrix of the m-generator on the square torus") {
  const auto pd = refdata::pd1();
  const CMat mat = deck_matrix(pd, DeckElement{iv({1}), iv({0}), 0});
  CHECK(std::abs(mat(0, 0) - Complex(1, 0)) < 1e-15);
  CHECK(std::abs(mat(0, 1) - Complex(-4.0 * kPi, 0)) < 1e-12);
  CHECK(std::abs(mat(0, 2)) < 1e-12);  // 2 pi Z_11 - 2 pi Z_11
  CHECK(std::abs(mat(1, 2) - Complex(0, -1)) < 1e-15);  // shift by Z
}

TEST_CASE("the p-generator shifts u by 4 pi") {
  const auto pd = refdata::pd4();
  const UpstairsPoint x = up(Complex(0.7, 3.0), {Complex(0.2, -0.4)});
  const UpstairsPoint y =
      deck_apply(pd, DeckElement{iv({0}), iv({0}), 1}, x);
  CHECK(std::abs(y.u - (x.u + 4.0 * kPi)) < 1e-12);
  CHECK(std::abs(y.z[0] - x.z[0]) < 1e-15);
}

TEST_CASE("the l-generator translates z by the polarized lattice") {
  const auto pd = refdata::pd4();
  const UpstairsPoint x = up(Complex(0.7, 3.0), {Complex(0.2, -0.4)});
  const UpstairsPoint y =
      deck_apply(pd, DeckElement{iv({0}), iv({1}), 0}, x);
  CHECK(std::abs(y.z[0] - (x.z[0] + 2.0)) < 1e-14);  // delta = 2
  CHECK(std::abs(y.u - x.u) < 1e-14);
}

TEST_CASE("cusp height is deck invariant") {
  for (const auto& pd : {refdata::pd1(), refdata::pd3(), refdata::pd4()}) {
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<int> ui(-5, 5);
    for (int k = 0; k < 60; ++k) {
      IVec m(pd.n), l(pd.n);
      for (int a = 0; a < pd.n; ++a) {
        m[a] = ui(rng);
        l[a] = ui(rng);
      }
      const DeckElement g{m, l, ui(rng)};
      const UpstairsPoint x = random_up(rng, pd.n);
      CHECK(std::abs(cusp_height(pd, deck_apply(pd, g, x)) -
                     cusp_height(pd, x)) < 1e-10);
    }
  }
}

TEST_CASE("group law: the cross term of the composition") {
  const auto pd = refdata::pd4();
  const DeckElement g1{iv({0}), iv({1}), 0};
  const DeckElement g2{iv({1}), iv({0}), 0};
  const DeckElement g = deck_compose(pd, g1, g2);
  CHECK(g.m[0] == 1);
  CHECK(g.l[0] == 1);
  CHECK(g.p == -2);  // -delta l1 m2

  // Reversed order has no cross term.
  const DeckElement h = deck_compose(pd, g2, g1);
  CHECK(h.p == 0);
}

TEST_CASE("composition matches the matrix product on random pairs") {
  for (const auto& pd : {refdata::pd1(), refdata::pd3()}) {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> ui(-5, 5);
    for (int k = 0; k < 60; ++k) {
      IVec m1(pd.n), l1(pd.n), m2(pd.n), l2(pd.n);
      for (int a = 0; a < pd.n; ++a) {
        m1[a] = ui(rng);
        l1[a] = ui(rng);
        m2[a] = ui(rng);
        l2[a] = ui(rng);
      }
      const DeckElement g1{m1, l1, ui(rng)};
      const DeckElement g2{m2, l2, ui(rng)};
      CHECK_NOTHROW(deck_compose(pd, g1, g2));
    }
  }
}

TEST_CASE("inverse composes to the identity") {
  const auto pd = refdata::pd3();
  std::mt19937_64 rng(19);
  std::uniform_int_distribution<int> ui(-5, 5);
  for (int k = 0; k < 40; ++k) {
    IVec m(2), l(2);
    for (int a = 0; a < 2; ++a) {
      m[a] = ui(rng);
      l[a] = ui(rng);
    }
    const DeckElement g{m, l, ui(rng)};
    const DeckElement e = deck_compose(pd, g, deck_inverse(pd, g));
    CHECK(e.m.isZero());
    CHECK(e.l.isZero());
    CHECK(e.p == 0);
  }
}

TEST_CASE("potentials agree through the coordinate changes") {
  const auto pd = refdata::pd1();
  std::mt19937_64 rng(29);
  for (int k = 0; k < 30; ++k) {
    UpstairsPoint x = random_up(rng, 1);
    x.u += Complex(0.0, 3.0);  // keep F < 0
    if (!(cusp_height(pd, x) < 0.0)) continue;
    const double phi_b = ball_potential(heisenberg_forward(pd, x), 1);
    const double phi_q = quotient_potential(pd, exp_map(x), 1);
    CHECK(std::abs(phi_b - phi_q) < 1e-11);
  }
}

TEST_CASE("domain guards of the potentials") {
  const auto pd = refdata::pd1();
  CHECK_THROWS_AS(
      quotient_potential(pd, BundlePoint{Complex(1.0, 0.0), CVec::Zero(1)}, 1),
      DomainViolation);
  HeisenbergPoint y;
  y.u_t = Complex(0.0, -1.0);
  y.z_t = CVec::Zero(1);
  CHECK_THROWS_AS(ball_potential(y, 1), DomainViolation);
}

TEST_CASE("ball model potential is Kahler-Einstein") {
  wirtinger::StencilConfig cfg;
  const wirtinger::ScalarField phi = ball_potential_field(1);
  CPoint p(2);
  p[0] = Complex(0.2, -0.1);
  p[1] = Complex(0.5, 3.0);
  CHECK(wirtinger::einstein_residual(phi, p, -1.0, cfg) < 1e-5);
}

TEST_CASE("quotient potential is Kahler-Einstein near the puncture") {
  const auto pd = refdata::pd1();
  wirtinger::StencilConfig cfg;
  const wirtinger::ScalarField phi = quotient_potential_field(pd);
  CPoint p(2);
  p[0] = Complex(0.1, 0.2);
  const double f = -4.0;
  p[1] = std::exp(0.5 * (f - abelian::log_hermitian_h(pd, p.head(1))));
  CHECK(wirtinger::einstein_residual(phi, p, -1.0, cfg) < 1e-4);
}

TEST_CASE("the literal sign variant is not plurisubharmonic") {
  const auto pd = refdata::pd1();
  CPoint p(2);
  p[0] = Complex(0.1, 0.2);
  const double f = -4.0;
  p[1] = std::exp(0.5 * (f - abelian::log_hermitian_h(pd, p.head(1))));
  CHECK(literal_sign_min_eig(pd, p) < 0.0);
}
