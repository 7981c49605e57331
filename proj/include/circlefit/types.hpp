#pragma once

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace circlefit {

template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;

template <typename Scalar>
using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;

/// n x 2 point matrix; row i holds (x_i, y_i).
template <typename Scalar>
using Points = Eigen::Matrix<Scalar, Eigen::Dynamic, 2>;

using Vector2d = Vector2<double>;
using Matrix2d = Matrix2<double>;
using PointSet = Points<double>;

// ---------------------------------------------------------------------------
// Errors

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fewer than three points, non-finite coordinates, or all points coincide.
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

/// The evaluation point sits (numerically) on a data point.
class CenterOnDataPoint : public Error {
 public:
  CenterOnDataPoint() : Error("center coincides with a data point") {}
};

/// The big-circle formulas were asked for a center too close to the origin.
class CenterTooClose : public Error {
 public:
  CenterTooClose() : Error("center too close for big-circle formulas") {}
};

/// A damped eigenvalue d_i + lambda is not positive.
class SingularDamping : public Error {
 public:
  SingularDamping() : Error("damped Hessian is not positive definite") {}
};

/// The valley orientation cannot be decided (|mean(x^2 y)| at round-off level).
class AmbiguousValley : public Error {
 public:
  AmbiguousValley() : Error("valley orientation is ambiguous") {}
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Geometry

enum class Frame { normalized, raw };

struct Circle {
  double a = 0.0;
  double b = 0.0;
  double r = 0.0;
  Frame frame = Frame::normalized;

  Vector2d center() const { return {a, b}; }
};

struct Line {
  Vector2d point;
  Vector2d direction;  // unit norm
};

/// Either the best-fitting circle or, when none exists, the best-fitting line.
using FitResult = std::variant<Circle, Line>;

inline bool is_circle(const FitResult& r) { return std::holds_alternative<Circle>(r); }

/// Centering and scaling applied to raw points: x' = (x - x_mean) / scale.
struct NormalizationTransform {
  double x_mean = 0.0;
  double y_mean = 0.0;
  double scale = 1.0;
};

/// Centered, unit-RMS points together with moments reused by the evaluators
/// and the valley guard. Immutable after construction.
struct NormalizedPointSet {
  PointSet points;
  NormalizationTransform transform;
  Eigen::VectorXd z;  // x_i^2 + y_i^2
  double mean_z = 0.0;
  double xx = 0.0;  // mean(x^2)
  double yy = 0.0;
  double xy = 0.0;
  double xxy = 0.0;  // mean(x^2 y)

  Eigen::Index size() const { return points.rows(); }
};

}  // namespace circlefit
