#pragma once

#include "circlefit/double_double.hpp"
#include "circlefit/types.hpp"

namespace circlefit {

struct OracleFit {
  Circle circle;  // rounded to double, normalized frame
  DoubleDouble a, b, r;
  DoubleDouble gradient_norm;
  int iterations = 0;
};

/// Extended-precision reference fit: full Newton on the standard formulas in
/// double-double arithmetic, started from a converged double fit. The points
/// are re-centered in double-double, so the result is the geometric fit of the
/// given doubles and does not rely on them being exactly centered.
/// Stops once |grad F| <= 1e-28 * max(1, |p|); throws NoConvergence after
/// max_iters Newton steps.
OracleFit oracle_fit(const NormalizedPointSet& data, const Circle& seed, int max_iters = 50);

/// Reduced objective |p|^2 - 2 p.m - rbar^2 (m = centroid) evaluated in
/// double-double at a double center. Matches a^2 + b^2 - rbar^2 on exactly
/// centered data.
DoubleDouble reduced_objective_dd(const NormalizedPointSet& data, const Vector2d& p);

struct AccuracyScore {
  double error = 0.0;  // relative parameter error E
  int digits = 16;     // k = floor(-log10 E), clamped to [0, 16]
  bool superaccurate() const { return digits >= 15; }
};

/// k from E; E = 0 maps to 16.
int accuracy_digits(double relative_error);

/// E = |(a,b,R)_est - (a,b,R)_ref| / max(|(a,b,R)_ref|, 1), both normalized frame.
AccuracyScore score(const Circle& estimate, const Circle& reference);

}  // namespace circlefit
