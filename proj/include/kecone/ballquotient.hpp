#pragma once

#include "kecone/abelian.hpp"
#include "kecone/types.hpp"
#include "kecone/wirtinger.hpp"

namespace kecone::ballq {

using abelian::PeriodData;

// Point of the universal cover H_k in coordinates (u, z).
struct UpstairsPoint {
  Complex u;
  CVec z;
};

// Point of the Heisenberg model in coordinates (u~, z~).
struct HeisenbergPoint {
  Complex u_t;
  CVec z_t;
};

// Point of the punctured disc bundle W_k/D_k in coordinates (w, z), w != 0.
struct BundlePoint {
  Complex w;
  CVec z;
};

// Deck transformation parameters (m, l, p).
struct DeckElement {
  IVec m;
  IVec l;
  long p = 0;
};

// (u, z) -> (e^{iu/2}, z).
BundlePoint exp_map(const UpstairsPoint& x);

// F(u, z) = -Im u + log h(z) = log(|w|^2 h(z)). The cusp corresponds to
// F -> -infinity; membership in H_k is F < -k.
double cusp_height(const PeriodData& pd, const UpstairsPoint& x);

// Coordinate change to the Heisenberg model. The linear part is
// z~ = sqrt(pi) V^t z with V the Cholesky factor of W; the sqrt(pi) factor
// is calibrated so that Im u~ - sum |z~|^2 = -F(u, z) holds exactly.
HeisenbergPoint heisenberg_forward(const PeriodData& pd,
                                   const UpstairsPoint& x);
UpstairsPoint heisenberg_inverse(const PeriodData& pd,
                                 const HeisenbergPoint& y);

// Horosphere level Im u~ - sum |z~|^2.
double heisenberg_level(const HeisenbergPoint& y);

// The (n+2)x(n+2) matrix of a deck element, acting on (u, z - t, 1)^t.
CMat deck_matrix(const PeriodData& pd, const DeckElement& g);
UpstairsPoint deck_apply(const PeriodData& pd, const DeckElement& g,
                         const UpstairsPoint& x);

// Group law; asserts agreement with deck_matrix(g2) * deck_matrix(g1)
// (g1 applied first) and throws GroupClosureError past 1e-10.
DeckElement deck_compose(const PeriodData& pd, const DeckElement& g1,
                         const DeckElement& g2);
DeckElement deck_inverse(const PeriodData& pd, const DeckElement& g);

// phi_B = -(n+2) log(Im u~ - sum |z~|^2): the Kahler-Einstein potential of
// the Heisenberg model normalized so that Ric = -omega.
double ball_potential(const HeisenbergPoint& y, int n);

// phi_Q = -(n+2) log(-log(|w|^2 h(z))) on 0 < |w|^2 h < 1. Satisfies
// phi_Q(exp_map(x)) = ball_potential(heisenberg_forward(x)) exactly.
double quotient_potential(const PeriodData& pd, const BundlePoint& b, int n);

// phi_B as a scalar field on coordinates (z~_1..z~_n, u~).
wirtinger::ScalarField ball_potential_field(int n);

// phi_Q as a scalar field on coordinates (z_1..z_n, w); the fiber
// coordinate is differenced in the log chart with depth-adaptive scales.
wirtinger::ScalarField quotient_potential_field(const PeriodData& pd);

// dd-bar residual of the opposite-sign potential variant
// +(n+2) log|log(|w|^2 h)| at a point: returns the smallest eigenvalue of
// its mixed Hessian (negative along the fiber); kept for reporting.
double literal_sign_min_eig(const PeriodData& pd, const CPoint& p,
                            const wirtinger::StencilConfig& cfg = {});

}  // namespace kecone::ballq
