#pragma once

// Umbrella header and the raw-points entry point.

#include "circlefit/baselines.hpp"
#include "circlefit/bench.hpp"
#include "circlefit/double_double.hpp"
#include "circlefit/eig2.hpp"
#include "circlefit/evaluator.hpp"
#include "circlefit/geometry.hpp"
#include "circlefit/oracle.hpp"
#include "circlefit/solver.hpp"
#include "circlefit/types.hpp"
#include "circlefit/valley_guard.hpp"

namespace circlefit {

struct PointFit {
  FitReport report;    // normalized frame
  FitResult result;    // raw frame
  NormalizationTransform transform;
};

/// Normalizes, initializes from the Kasa fit and runs the full-Newton fit.
/// Collinear input, where the algebraic fit is singular, yields a line.
PointFit fit_points(const PointSet& points, const SolverConfig& cfg = {});

}  // namespace circlefit
