#pragma once

#include "circlefit/geometry.hpp"
#include "circlefit/summation.hpp"
#include "circlefit/types.hpp"

namespace circlefit {

enum class EvaluatorKind { standard, big_circle };

/// Reduced objective, its gradient and Hessian at one center.
template <typename Scalar>
struct Evaluation {
  Scalar value{};
  Vector2<Scalar> gradient = Vector2<Scalar>::Zero();
  Matrix2<Scalar> hessian = Matrix2<Scalar>::Zero();
  EvaluatorKind evaluator_used = EvaluatorKind::standard;
};

using Evaluationd = Evaluation<double>;

/// Distances at or below this (normalized frame) make u_i, v_i meaningless.
inline constexpr double kDistanceFloor = 1e-12;
/// Same role for w_i = r_i / D in the big-circle formulas.
inline constexpr double kRelativeDistanceFloor = 1e-12;
/// Centers with |p| >= this use the big-circle formulas.
inline constexpr double kBigCircleSwitch = 2.0;

/// Value, gradient and Hessian of a^2 + b^2 - rbar^2 from the classic
/// formulas in terms of u_i = (x_i - a)/r_i and v_i = (y_i - b)/r_i.
/// Accurate while the center stays within a few data radii of the origin.
template <typename Scalar>
Evaluation<Scalar> evaluate_standard(const Points<Scalar>& pts, const Vector2<Scalar>& p,
                                     double distance_floor = kDistanceFloor) {
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
  const auto r = distances(pts, p);
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    if (!(r(i) > Scalar(distance_floor))) throw CenterOnDataPoint();
  }
  const Array u = (pts.col(0).array() - p.x()) / r;
  const Array v = (pts.col(1).array() - p.y()) / r;

  const Scalar rbar = pairwise_mean(r);
  const Scalar ubar = pairwise_mean(u);
  const Scalar vbar = pairwise_mean(v);
  const Scalar uu_r = pairwise_mean(u * u / r);
  const Scalar vv_r = pairwise_mean(v * v / r);
  const Scalar uv_r = pairwise_mean(u * v / r);

  Evaluation<Scalar> e;
  e.value = p.squaredNorm() - rbar * rbar;
  e.gradient << Scalar(2) * (p.x() + ubar * rbar), Scalar(2) * (p.y() + vbar * rbar);
  const Scalar off = Scalar(2) * (rbar * uv_r - ubar * vbar);
  e.hessian << Scalar(2) * (Scalar(1) - ubar * ubar - rbar * vv_r), off,
      off, Scalar(2) * (Scalar(1) - vbar * vbar - rbar * uu_r);
  e.evaluator_used = EvaluatorKind::standard;
  return e;
}

inline Evaluationd evaluate_standard(const NormalizedPointSet& data, const Vector2d& p) {
  return evaluate_standard(data.points, p);
}

/// Per-point and aggregate quantities of the polar (D, theta) form used for
/// far-away centers. Exposed for testing.
struct BigCircleTerms {
  double D = 0.0;
  double theta = 0.0;
  double delta = 0.0;
  double c = 1.0;
  double s = 0.0;
  Eigen::ArrayXd p, w, tau, gamma, g, alpha, beta, eta, kappa;
};

/// Throws CenterOnDataPoint if some w_i falls below the floor.
BigCircleTerms big_circle_terms(const NormalizedPointSet& data, const Vector2d& center);

/// Objective value -2 gbar - delta^2 gbar^2 alone, for any p != 0.
double big_circle_value(const NormalizedPointSet& data, const Vector2d& p);

/// Cancellation-free evaluation for large |p|. Requires |p| >= switch_distance
/// (CenterTooClose otherwise) and centered data.
Evaluationd evaluate_big_circle(const NormalizedPointSet& data, const Vector2d& p,
                                double switch_distance = kBigCircleSwitch);

/// Picks the big-circle formulas when |p| >= switch_distance.
Evaluationd evaluate(const NormalizedPointSet& data, const Vector2d& p,
                     double switch_distance = kBigCircleSwitch);

}  // namespace circlefit
