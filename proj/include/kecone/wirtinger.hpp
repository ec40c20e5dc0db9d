#pragma once

#include <algorithm>
#include <functional>
#include <vector>

#include "kecone/types.hpp"

namespace kecone::wirtinger {

// Real-valued scalar field on complex coordinates. `in_domain` guards
// every stencil evaluation; `step_scale`, when set, returns per-coordinate
// step multipliers so stencils shrink near domain boundaries. Coordinates
// listed in `log_axes` are differenced in the log chart zeta = log z_i
// (multiplicative stencil shifts, chain rule back to z_i); this keeps
// the stencil well conditioned for fiber coordinates spanning many orders
// of magnitude, and any c log|z_i| part of the field is linear in the
// chart and drops out of second differences exactly.
struct ScalarField {
  int dim = 0;
  std::function<double(const CPoint&)> eval;
  std::function<bool(const CPoint&)> in_domain;  // optional, default true
  std::function<RVec(const CPoint&)> step_scale;  // optional, default ones
  std::vector<int> log_axes;

  bool contains(const CPoint& p) const { return !in_domain || in_domain(p); }
  RVec scales(const CPoint& p) const {
    return step_scale ? step_scale(p) : RVec::Ones(dim);
  }
  bool is_log_axis(int i) const {
    return std::find(log_axes.begin(), log_axes.end(), i) != log_axes.end();
  }
};

// Hermitian (1,1)-tensor at a point. `asymmetry` records the maximum
// entrywise deviation from Hermitian symmetry before the conjugate-
// transpose averaging was applied.
struct HermitianForm {
  CMat entries;
  CPoint basepoint;
  double asymmetry = 0.0;
  double tau_herm = 1e-8;

  int dim() const { return static_cast<int>(entries.rows()); }
};

struct StencilConfig {
  double step = 2.4e-3;  // ~ eps^(1/6)
  int order = 4;         // one of {2, 4, 6}
  bool richardson = true;
  // Nested (Ricci) differentiation uses step * outer_step_factor for the
  // outer Hessian of log det g.
  double outer_step_factor = 8.0;
};

// Wirtinger mixed derivative d^2 f / dz_i dzbar_j at p, from real-coordinate
// central differences of the configured order.
Complex mixed_derivative(const ScalarField& field, const CPoint& p, int i,
                         int j, const StencilConfig& cfg);

// g_{i jbar} = d_i d_jbar field, Hermitized by conjugate-transpose averaging.
HermitianForm metric_from_potential(const ScalarField& field, const CPoint& p,
                                    const StencilConfig& cfg);

// Ric_{i jbar} = -d_i d_jbar log det g, with a nested outer stencil on
// log det g. Throws DegenerateMetric if det g <= 0 anywhere on the stencil.
HermitianForm ricci_from_potential(const ScalarField& field, const CPoint& p,
                                   const StencilConfig& cfg);

// Operator norm of g^{-1}(Ric - lambda g): the Einstein defect measured in g.
double einstein_residual(const ScalarField& field, const CPoint& p,
                         double lambda, const StencilConfig& cfg);

// Smallest eigenvalue of the (Hermitized) form; positivity test.
double min_eigenvalue(const HermitianForm& form);

// log det of the metric at p; shared by ricci_from_potential and callers
// that want the determinant field directly.
double log_det_metric(const ScalarField& field, const CPoint& p,
                      const StencilConfig& cfg);

// Holomorphic Wirtinger derivative d/dz_i of a complex-valued map, by the
// same central stencils. Used by curvature probes on matrix entries.
Complex holomorphic_derivative(const std::function<Complex(const CPoint&)>& f,
                               const ScalarField& domain, const CPoint& p,
                               int i, const StencilConfig& cfg);

}  // namespace kecone::wirtinger
