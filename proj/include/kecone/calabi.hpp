#pragma once

#include <vector>

#include "kecone/abelian.hpp"
#include "kecone/ballquotient.hpp"
#include "kecone/types.hpp"
#include "kecone/wirtinger.hpp"

namespace kecone::calabi {

using abelian::PeriodData;
using ballq::BundlePoint;

struct ProfileValue {
  double rho = 0.0;
  double rho_s = 0.0;
  double rho_ss = 0.0;
};

// Radial solution of the ansatz ODE (1+rho_s)^n rho_ss = c_norm e^{rho+s},
// either the closed form rho = -(n+2) ln(-s) - s (exact for
// c_norm = (n+2)^{n+1}) or a tabulated integration, interpolated by cubic
// Hermite between nodes.
class AnsatzProfile {
 public:
  static AnsatzProfile closed_form(int n);
  // Stores one node per accepted integrator step (capped at h_max spacing).
  static AnsatzProfile tabulated(std::vector<double> s,
                                 std::vector<ProfileValue> values, int n,
                                 double c_norm, double C);

  ProfileValue eval(double s) const;
  bool closed() const { return closed_; }
  int n() const { return n_; }
  double c_norm() const { return c_norm_; }
  double first_integral() const { return C_; }
  double s_min() const;
  double s_max() const;
  const std::vector<double>& grid() const { return s_; }
  const std::vector<ProfileValue>& nodes() const { return values_; }

 private:
  bool closed_ = true;
  int n_ = 1;
  double c_norm_ = 0.0;
  double C_ = 0.0;
  std::vector<double> s_;
  std::vector<ProfileValue> values_;
};

// Closed-form profile value at s < 0.
ProfileValue rho_closed(int n, double s);

// (1+rho_s)^n rho_ss - c_norm e^{rho+s}.
double ode_residual(const ProfileValue& v, double s, int n, double c_norm);

// First integral C = (f_s - f^2/(n+2)) f^n with f = 1 + rho_s and
// f_s = rho_ss; conserved along every solution regardless of c_norm.
double first_integral(const ProfileValue& v, int n);

// Adaptive embedded Runge-Kutta integration of the second-order ODE from
// (s0, rho0, rhos0) to s_end. Aborts with a degenerate-profile error if
// 1 + rho_s approaches 0 (metric degeneration), reporting the last valid s.
AnsatzProfile ode_solve(int n, double c_norm, double s0, double rho0,
                        double rhos0, double s_end, double tol,
                        double h_max = 0.1);

// Base geometry of the negative line bundle over the flat torus:
// a(z) = h(z) e^{eps psi(z)} with psi = sin(2 pi x1) in real lattice
// coordinates (eps = 0 is the flat Ricci-flat base).
struct LineBundleGeom {
  PeriodData pd;
  double eps = 0.0;

  double log_a(const CPoint& z) const;
  // Holomorphic gradient d log a / dz_i.
  CVec grad_log_a(const CPoint& z) const;
  // Mixed Hessian d_i d_jbar log a (the base Kahler form; pi W when flat).
  CMat hess_log_a(const CPoint& z) const;
  // Real lattice coordinate x1 of z.
  double x1(const CPoint& z) const;
};

LineBundleGeom make_flat_geom(const PeriodData& pd);
LineBundleGeom make_perturbed_geom(const PeriodData& pd, double eps);

// Assembled (n+1)x(n+1) metric in the coordinate basis (dz_1..dz_n, deta):
// g = (1+rho_s) * [dd-bar log a] + rho_ss * B B^dagger with
// B = (d log a / dz_1, ..., d log a / dz_n, 1/eta).
wirtinger::HermitianForm calabi_metric(const LineBundleGeom& geom,
                                       const AnsatzProfile& profile,
                                       const BundlePoint& b);

// Relative defect of det g = (1+rho_s)^n det(dd-bar log a) a rho_ss / r.
double det_identity_check(const LineBundleGeom& geom,
                          const AnsatzProfile& profile, const BundlePoint& b);

// Total potential phi = log a + rho(log(a |eta|^2)) as a scalar field on
// (z_1..z_n, eta).
wirtinger::ScalarField total_potential_field(const LineBundleGeom& geom,
                                             const AnsatzProfile& profile);

// Radial arc length of the fiber ray from r = e^{-k1} to r = e^{-k2}
// ( = integral of sqrt(rho_ss)/2 ds by Gauss-Legendre quadrature).
double fiber_length(const LineBundleGeom& geom, const AnsatzProfile& profile,
                    const CPoint& z, double k1, double k2);

struct ProbeRow {
  double log_r = 0.0;
  double sect_curv = 0.0;       // holomorphic sectional curvature, z1-direction
  double einstein_residual = 0.0;
};

struct ProbeResult {
  std::vector<ProbeRow> rows;
  double fit_slope = 0.0;  // affine fit of curvature against |log r|
  double fit_r2 = 0.0;
  double curvature_spread = 0.0;  // max - min of the curvature column
};

// Samples curvature and Einstein residual along the fiber ray over z_base,
// log r in [s_lo, s_hi].
ProbeResult curvature_probe(const LineBundleGeom& geom,
                            const AnsatzProfile& profile, const CPoint& z_base,
                            double arg_eta, double s_lo, double s_hi,
                            int samples,
                            const wirtinger::StencilConfig& cfg = {});

}  // namespace kecone::calabi
