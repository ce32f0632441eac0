#pragma once

#include <cmath>

// Acceptance bands for the statistical experiments.  Every tolerance used by
// `report` and by the acceptance suite is pinned here; bands are closed
// intervals (boundary values pass).
namespace lpplab::bands {

struct Interval {
    double lo, hi;
    bool contains(double v) const { return v >= lo && v <= hi; }
};

// Log-log slope windows for the scaling exponents.
inline constexpr Interval kTransversalSlope{0.60, 0.73};  // target 2/3
inline constexpr Interval kWeightFluctSlope{0.27, 0.40};  // target 1/3
inline constexpr Interval kDisjointnessSlope{0.38, 0.65}; // target 1/2
inline constexpr Interval kZeroSetSlope{0.22, 0.45};      // target 1/3
inline constexpr Interval kTemporalNcSlope{0.50, 0.85};   // target 2/3
inline constexpr Interval kPlanarNcSlope{1.45, 1.85};     // target 5/3

// Empty-box complements of the dimension fits (codimension checks).
inline constexpr Interval kTemporalNonemptyRate{0.20, 0.50}; // target 1/3
inline constexpr Interval kZeroNonemptyRate{0.50, 0.85};     // target 2/3

// Crossing-position spread for geodesic and interface (wandering exponent).
inline constexpr Interval kCrossingSdSlope{0.58, 0.75};

// Hypothesis-test levels.
inline constexpr double kKsAlpha = 0.01;
inline constexpr double kDualityAlpha = 0.01 / 3.0; // Bonferroni over three rows

// Boundary-increment law: mean of the step magnitude.
inline constexpr double kIncrementMean = 2.0;
inline constexpr double kIncrementMeanTol = 0.06;
inline constexpr double kIncrementCorrMax = 0.05;

// Mass of the difference profile over [-0.5, 0.5] x (1, 2].
inline const double kZetaMeanTarget = 4.0 * std::log(2.0);
inline constexpr double kZetaMeanRelTol = 0.10;

// Level-decomposition quadrature agreement.
inline constexpr double kDecompRelTol = 0.02;

// Tube-occupation tail fit quality.
inline constexpr double kTubeTailR2Min = 0.90;

// Local-time stability across tube half-widths.
inline constexpr double kLocalTimeRelTol = 0.15;

// Fraction of stabilized prefixes inside the scaled half-width-3 rectangle.
inline constexpr double kContainmentMin = 0.95;

// Share of replicas that may end in an error (censoring excluded) before a
// run is considered failed.
inline constexpr double kErrorShareMax = 0.10;

} // namespace lpplab::bands
