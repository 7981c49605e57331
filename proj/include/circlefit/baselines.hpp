#pragma once

#include <cmath>
#include <limits>

#include "circlefit/solver.hpp"
#include "circlefit/types.hpp"

namespace circlefit {

/// Kasa algebraic fit: least squares for x^2 + y^2 = 2ax + 2by + c on the
/// centered data. Exact on circle-consistent data. Throws DegenerateInput for
/// (numerically) collinear points.
Circle kasa_fit(const NormalizedPointSet& data);

enum class StopRule {
  step_below_sqrt_eps,  // classic: stop once the step is below ~sqrt(eps)
  step_below_eps,
};

/// Settings for the three-parameter (a, b, R) competitor fits.
struct BaselineConfig {
  StopRule stop_rule = StopRule::step_below_sqrt_eps;
  double lambda_init = 1e-3;
  double lambda_up = 10.0;
  double lambda_down = 0.04;
  int max_iters = 500;
  int max_inner = 99;
  int max_halvings = 30;
  double divergence_box = 1e6;
  bool record_trace = false;

  double stop_tolerance() const {
    const double eps = std::numeric_limits<double>::epsilon();
    return stop_rule == StopRule::step_below_eps ? eps : std::sqrt(eps);
  }
};

/// Gauss-Newton over (a, b, R) with step halving. Steps below sqrt(eps) are
/// taken unconditionally since objective comparisons are noise at that scale.
FitReport gauss_newton_fit(const NormalizedPointSet& data, const Circle& init,
                           const BaselineConfig& cfg = {});

/// Levenberg-Marquardt over (a, b, R): (J^T J / n + lambda I) step, objective
/// decrease acceptance.
FitReport lm_classic_fit(const NormalizedPointSet& data, const Circle& init,
                         const BaselineConfig& cfg = {});

}  // namespace circlefit
