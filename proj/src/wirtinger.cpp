#include "kecone/wirtinger.hpp"

#include <cmath>
#include <vector>

namespace kecone::wirtinger {

namespace {

struct Stencil {
  std::vector<int> offsets;
  std::vector<double> weights;  // divide by h (d1) or h^2 (d2)
};

const Stencil& d1_stencil(int order) {
  static const Stencil s2{{-1, 1}, {-0.5, 0.5}};
  static const Stencil s4{{-2, -1, 1, 2},
                          {1.0 / 12, -8.0 / 12, 8.0 / 12, -1.0 / 12}};
  static const Stencil s6{
      {-3, -2, -1, 1, 2, 3},
      {-1.0 / 60, 9.0 / 60, -45.0 / 60, 45.0 / 60, -9.0 / 60, 1.0 / 60}};
  switch (order) {
    case 2: return s2;
    case 4: return s4;
    case 6: return s6;
    default: throw NumericError("unsupported stencil order");
  }
}

const Stencil& d2_stencil(int order) {
  static const Stencil s2{{-1, 0, 1}, {1.0, -2.0, 1.0}};
  static const Stencil s4{
      {-2, -1, 0, 1, 2},
      {-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12}};
  static const Stencil s6{{-3, -2, -1, 0, 1, 2, 3},
                          {2.0 / 180, -27.0 / 180, 270.0 / 180, -490.0 / 180,
                           270.0 / 180, -27.0 / 180, 2.0 / 180}};
  switch (order) {
    case 2: return s2;
    case 4: return s4;
    case 6: return s6;
    default: throw NumericError("unsupported stencil order");
  }
}

double eval_checked(const ScalarField& field, const CPoint& p) {
  if (!field.contains(p)) {
    throw DomainViolation("stencil point left the field domain");
  }
  const double v = field.eval(p);
  if (!std::isfinite(v)) {
    throw NumericError("non-finite field evaluation");
  }
  return v;
}

// Offset p along the real or imaginary axis of coordinate i. Log-chart
// coordinates shift multiplicatively: zeta = log z, z -> z e^{dx + i dy}.
CPoint shifted(const ScalarField& field, const CPoint& p, int i, double dx,
               double dy) {
  CPoint q = p;
  if (field.is_log_axis(i)) {
    q[i] *= std::exp(Complex(dx, dy));
  } else {
    q[i] += Complex(dx, dy);
  }
  return q;
}

// Pure second derivative along one real axis of coordinate i.
double second_along(const ScalarField& field, const CPoint& p, int i,
                    bool imag_axis, double h, int order) {
  const Stencil& st = d2_stencil(order);
  double acc = 0.0;
  for (std::size_t k = 0; k < st.offsets.size(); ++k) {
    const double d = st.offsets[k] * h;
    acc += st.weights[k] *
           eval_checked(field, shifted(field, p, i, imag_axis ? 0.0 : d,
                                       imag_axis ? d : 0.0));
  }
  return acc / (h * h);
}

// Mixed second derivative d/du d/dv with u a real axis of coordinate i and
// v a real axis of coordinate j (tensor product of first-derivative stencils).
double cross_along(const ScalarField& field, const CPoint& p, int i,
                   bool i_imag, int j, bool j_imag, double hi, double hj,
                   int order) {
  const Stencil& st = d1_stencil(order);
  double acc = 0.0;
  for (std::size_t k = 0; k < st.offsets.size(); ++k) {
    const double di = st.offsets[k] * hi;
    for (std::size_t l = 0; l < st.offsets.size(); ++l) {
      const double dj = st.offsets[l] * hj;
      CPoint q = shifted(field, p, i, i_imag ? 0.0 : di, i_imag ? di : 0.0);
      q = shifted(field, q, j, j_imag ? 0.0 : dj, j_imag ? dj : 0.0);
      acc += st.weights[k] * st.weights[l] * eval_checked(field, q);
    }
  }
  return acc / (hi * hj);
}

Complex mixed_at_step(const ScalarField& field, const CPoint& p, int i, int j,
                      double hi, double hj, int order) {
  if (i == j) {
    // (d_x - i d_y)(d_x + i d_y)/4 collapses to (d_xx + d_yy)/4.
    const double dxx = second_along(field, p, i, false, hi, order);
    const double dyy = second_along(field, p, i, true, hi, order);
    return Complex(0.25 * (dxx + dyy), 0.0);
  }
  const double dxx = cross_along(field, p, i, false, j, false, hi, hj, order);
  const double dxy = cross_along(field, p, i, false, j, true, hi, hj, order);
  const double dyx = cross_along(field, p, i, true, j, false, hi, hj, order);
  const double dyy = cross_along(field, p, i, true, j, true, hi, hj, order);
  return 0.25 * Complex(dxx + dyy, dxy - dyx);
}

}  // namespace

Complex mixed_derivative(const ScalarField& field, const CPoint& p, int i,
                         int j, const StencilConfig& cfg) {
  const RVec sc = field.scales(p);
  const double hi = cfg.step * sc[i];
  const double hj = cfg.step * sc[j];
  const Complex coarse = mixed_at_step(field, p, i, j, hi, hj, cfg.order);
  Complex d = coarse;
  if (cfg.richardson) {
    const Complex fine =
        mixed_at_step(field, p, i, j, 0.5 * hi, 0.5 * hj, cfg.order);
    const double f = std::pow(2.0, cfg.order);
    d = (f * fine - coarse) / (f - 1.0);
  }
  // Chain rule from the log chart: d_zeta = z d_z, so
  // d_{zeta_i} d_{zetabar_j} = z_i zbar_j d_{z_i} d_{zbar_j}.
  if (field.is_log_axis(i)) d /= p[i];
  if (field.is_log_axis(j)) d /= std::conj(p[j]);
  return d;
}

HermitianForm metric_from_potential(const ScalarField& field, const CPoint& p,
                                    const StencilConfig& cfg) {
  const int d = field.dim;
  CMat raw(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      raw(i, j) = mixed_derivative(field, p, i, j, cfg);
    }
  }
  const CMat herm = 0.5 * (raw + raw.adjoint());
  const double asym = (raw - raw.adjoint()).cwiseAbs().maxCoeff();
  return HermitianForm{herm, p, asym};
}

double log_det_metric(const ScalarField& field, const CPoint& p,
                      const StencilConfig& cfg) {
  const HermitianForm g = metric_from_potential(field, p, cfg);
  const double det = g.entries.determinant().real();
  if (!(det > 0.0) || !std::isfinite(det)) {
    throw DegenerateMetric("non-positive metric determinant on stencil");
  }
  return std::log(det);
}

HermitianForm ricci_from_potential(const ScalarField& field, const CPoint& p,
                                   const StencilConfig& cfg) {
  StencilConfig outer = cfg;
  outer.step = cfg.step * cfg.outer_step_factor;
  ScalarField logdet;
  logdet.dim = field.dim;
  logdet.in_domain = field.in_domain;
  logdet.step_scale = field.step_scale;
  logdet.log_axes = field.log_axes;
  logdet.eval = [&field, &cfg](const CPoint& q) {
    return log_det_metric(field, q, cfg);
  };
  HermitianForm hess = metric_from_potential(logdet, p, outer);
  hess.entries = -hess.entries;
  return hess;
}

double einstein_residual(const ScalarField& field, const CPoint& p,
                         double lambda, const StencilConfig& cfg) {
  const HermitianForm g = metric_from_potential(field, p, cfg);
  // Fiber entries can dwarf base entries by many orders of magnitude, so
  // balance by the diagonal congruence D g D, D = diag(g_ii^{-1/2}).
  // Congruence preserves the signature and the generalized eigenvalues.
  const int d = field.dim;
  RVec dg(d);
  for (int i = 0; i < d; ++i) {
    const double gii = g.entries(i, i).real();
    if (!(gii > 0.0)) {
      throw DegenerateMetric("metric not positive definite at basepoint");
    }
    dg[i] = 1.0 / std::sqrt(gii);
  }
  const CMat gb = dg.asDiagonal() * g.entries * dg.asDiagonal();
  Eigen::SelfAdjointEigenSolver<CMat> gs(gb);
  if (gs.eigenvalues().minCoeff() <= 0.0) {
    throw DegenerateMetric("metric not positive definite at basepoint");
  }
  const HermitianForm ric = ricci_from_potential(field, p, cfg);
  const CMat defect = ric.entries - lambda * g.entries;
  const CMat db = dg.asDiagonal() * defect * dg.asDiagonal();
  Eigen::GeneralizedSelfAdjointEigenSolver<CMat> es(db, gb);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double min_eigenvalue(const HermitianForm& form) {
  const CMat herm = 0.5 * (form.entries + form.entries.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(herm);
  return es.eigenvalues().minCoeff();
}

Complex holomorphic_derivative(const std::function<Complex(const CPoint&)>& f,
                               const ScalarField& domain, const CPoint& p,
                               int i, const StencilConfig& cfg) {
  const RVec sc = domain.scales(p);
  const Stencil& st = d1_stencil(cfg.order);
  auto d_axis = [&](double h, bool imag_axis) {
    Complex acc(0.0, 0.0);
    for (std::size_t k = 0; k < st.offsets.size(); ++k) {
      const double d = st.offsets[k] * h;
      const CPoint q =
          shifted(domain, p, i, imag_axis ? 0.0 : d, imag_axis ? d : 0.0);
      if (!domain.contains(q)) {
        throw DomainViolation("stencil point left the field domain");
      }
      acc += st.weights[k] * f(q);
    }
    return acc / h;
  };
  auto at_step = [&](double h) {
    const Complex dx = d_axis(h, false);
    const Complex dy = d_axis(h, true);
    return 0.5 * (dx - Complex(0, 1) * dy);
  };
  const double h = cfg.step * sc[i];
  const Complex coarse = at_step(h);
  Complex d = coarse;
  if (cfg.richardson) {
    const Complex fine = at_step(0.5 * h);
    const double fac = std::pow(2.0, cfg.order);
    d = (fac * fine - coarse) / (fac - 1.0);
  }
  if (domain.is_log_axis(i)) d /= p[i];
  return d;
}

}  // namespace kecone::wirtinger
