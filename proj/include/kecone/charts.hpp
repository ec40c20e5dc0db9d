#pragma once

#include <cstdint>

#include "kecone/ballquotient.hpp"
#include "kecone/types.hpp"
#include "kecone/wirtinger.hpp"

namespace kecone::charts {

using ballq::BundlePoint;
using ballq::HeisenbergPoint;
using ballq::PeriodData;
using ballq::UpstairsPoint;

// u~ -> u~ + 4 pi k, z~ unchanged (the map iota, also written l^m).
HeisenbergPoint iota_shift(long k, const HeisenbergPoint& y);

// tau_a: u~ -> a^{-2} u~, z~ -> a^{-1} z~; scales the horosphere level
// by a^{-2}.
HeisenbergPoint tau_scale(double a, const HeisenbergPoint& y);

// Nearest-lattice-point reduction: gamma and z0 = z - lambda_gamma with the
// lattice coefficients of z0 in [-1/2, 1/2).
struct LatticeReduction {
  abelian::LatticeVector gamma;
  CPoint z0;
};
LatticeReduction lattice_reduce(const PeriodData& pd, const CPoint& z);

struct ChartBounds {
  double c = 0.0;         // max(lambda_max, 1/lambda_min) over samples
  double a1 = 0.0;        // max first coordinate-derivative of g entries
  double a2 = 0.0;        // max second coordinate-derivative of g entries
  double min_margin = 0.0;  // Euclidean margin of the base point Q to dT'
};

struct QuasiChart {
  long m = 0;                   // iota power
  abelian::LatticeVector gamma;  // lattice part
  double a = 1.0;               // tau scale, >= 1 away from the shallow rim
  ChartBounds bounds;
};

struct Normalization {
  QuasiChart chart;
  HeisenbergPoint Q;  // normalized point in T', level 2.5 when a >= 1
};

// The constructive form of the covering claim: for q with
// F = log(|w|^2 h) < -2, produce (m, gamma, a) and Q in T' with
// chart_map(chart, Q) = q. Order of operations: gamma (lattice reduction),
// then m (Re u~ recentered to 2 pi after scaling), then a = sqrt(level/2.5)
// clamped to >= 1.
Normalization normalize_point(const PeriodData& pd, const BundlePoint& q);
// Same construction from an upstairs representative; avoids underflow of
// w = e^{iu/2} at very deep levels.
Normalization normalize_point(const PeriodData& pd, const UpstairsPoint& x);

// exp o gamma^{-1} o iota^{-m} o tau_a^{-1}, the quasi-coordinate map T' -> D.
BundlePoint chart_map(const PeriodData& pd, const QuasiChart& chart,
                      const HeisenbergPoint& y);
// Upstairs variant (keeps log|w| explicit; safe at deep levels).
UpstairsPoint chart_map_upstairs(const PeriodData& pd, const QuasiChart& chart,
                                 const HeisenbergPoint& y);

// Pullback of the quotient potential through the chart, as a scalar field in
// the T' coordinates (z~_1..z~_n, u~). Computed upstairs via the cusp height,
// so it is exact at any depth.
wirtinger::ScalarField pulled_back_potential(const PeriodData& pd,
                                             const QuasiChart& chart);

// Euclidean distance of Q to the boundary of T' in (u~, z~) coordinates
// (level slots 2..3, Re u~ slot 0..4pi, lattice coefficients of z in 2F).
double margin_to_boundary(const PeriodData& pd, const HeisenbergPoint& Q);

// Measured metric bounds (c, A1, A2 proxies) of the chart over `samples`
// interior points of T', deterministic under `seed`.
ChartBounds chart_metric_report(const PeriodData& pd, const QuasiChart& chart,
                                int samples, std::uint64_t seed,
                                const wirtinger::StencilConfig& cfg = {});

// |det d(chart_map)| estimated by finite differences; nonzero means maximal
// rank at the point.
double chart_jacobian_abs(const PeriodData& pd, const QuasiChart& chart,
                          const HeisenbergPoint& y, double step = 1e-5);

}  // namespace kecone::charts
