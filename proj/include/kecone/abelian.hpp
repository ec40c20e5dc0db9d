#pragma once

#include <string>

#include "kecone/types.hpp"
#include "kecone/wirtinger.hpp"

namespace kecone::abelian {

// Lattice vector in coefficients over the basis lambda_1..lambda_{2n}.
struct LatticeVector {
  IVec coeffs;  // size 2n
};

// Abelian variety A = V/Gamma with a negative line bundle given by the
// period matrix Omega = (Delta_delta, Z) and characteristics t.
// Derived data (Y = -Im Z, W = Y^{-1}, Cholesky factor of W) is cached.
struct PeriodData {
  int n = 0;
  IVec delta;  // positive diagonal of Delta_delta
  CMat Z;      // symmetric, Y = -Im Z positive definite
  CVec t;

  // Derived.
  RMat X;       // Re Z
  RMat Y;       // -Im Z, positive definite
  RMat W;       // Y^{-1}
  RMat V_chol;  // lower-triangular, V V^t = W
  CMat Omega;   // n x 2n, columns are the lattice generators
  RMat lattice_solve;  // inverse of [Re Omega; Im Omega], for reduction

  RVec b_const() const;  // b_alpha = Y_aa - 2 Im t_alpha (the iY_aa - t + tbar
                         // diagonal constant, divided by i)
};

// Builds the derived data, throwing InvalidPeriodData if delta, symmetry of
// Z, or positivity of Y fail their tolerances.
PeriodData make_period_data(int n, const IVec& delta, const CMat& Z,
                            const CVec& t);

struct ValidationReport {
  double riemann_residual = 0.0;  // max |Omega Q^{-1} Omega^t|
  double im_form_max_eig = 0.0;   // largest eigenvalue of 2 Im Z
  double symmetry_residual = 0.0;
  bool valid = false;
  std::string message;
};

// Checks Omega Q^{-1} Omega^t = 0 and negative definiteness of
// -i Omega Q^{-1} Omegabar^t = 2 Im Z.
ValidationReport validate_period_data(const PeriodData& pd,
                                      double tol = 1e-12);

// z = sum coeffs_k * (k-th column of Omega).
CPoint lattice_embed(const PeriodData& pd, const LatticeVector& v);

// Transition factor e_v(z), composed generator by generator:
// e_{lambda_alpha} = 1, e_{lambda_{n+alpha}}(z) = exp(-2 pi i (z_a - t_a)),
// extended via e_{lambda+lambda'}(z) = e_{lambda'}(z+lambda) e_lambda(z).
// The lambda_{n+alpha} generators are applied first, ascending alpha.
Complex transition_factor(const PeriodData& pd, const LatticeVector& v,
                          const CPoint& z);

// The explicit bundle metric h(z) > 0.
double hermitian_h(const PeriodData& pd, const CPoint& z);
double log_hermitian_h(const PeriodData& pd, const CPoint& z);

// | h(z+lambda_v) |e_v(z)|^2 / h(z) - 1 |; zero iff the bundle norm descends.
double descent_check(const PeriodData& pd, const LatticeVector& v,
                     const CPoint& z);

// max_ab | (dd-bar log h)_ab - pi W_ab |, the curvature-form identity.
double chern_check(const PeriodData& pd, const CPoint& z,
                   const wirtinger::StencilConfig& cfg = {});

// log h as a scalar field on C^n (entire domain).
wirtinger::ScalarField log_h_field(const PeriodData& pd);

}  // namespace kecone::abelian
