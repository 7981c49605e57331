#pragma once

#include <optional>
#include <variant>

#include "circlefit/eig2.hpp"
#include "circlefit/types.hpp"

namespace circlefit {

struct ValleyGuardConfig {
  double box = 100.0;          // L: guard triggers once max(|a|, |b|) > box
  double xxy_floor = 1e-12;    // |mean(x^2 y)| at or below this means "no circle"
  int max_restarts = 2;
};

/// Data frame rotated so x runs along the major principal axis. The valleys of
/// the objective then run vertically, and the wrong one lies on the side
/// opposite to sign(mean(x^2 y)).
struct ValleyFrame {
  Matrix2d rotation = Matrix2d::Identity();  // columns: major, minor axis
  int z_sign = 1;
  double xxy = 0.0;  // mean(x^2 y) in the rotated frame

  Vector2d to_frame(const Vector2d& p) const { return rotation.transpose() * p; }
  Vector2d from_frame(const Vector2d& q) const { return rotation * q; }
};

Matrix2d scatter_matrix(const NormalizedPointSet& data);

/// Rotation of the principal axes. Isotropic scatter falls back to the
/// coordinate axes.
Matrix2d principal_axes(const NormalizedPointSet& data);

/// Throws AmbiguousValley when |mean(x^2 y)| <= xxy_floor.
ValleyFrame build_valley_frame(const NormalizedPointSet& data, double xxy_floor = 1e-12);

/// Line through the centroid along the major principal axis.
Line line_fit(const NormalizedPointSet& data);

namespace guard_action {
struct Proceed {};
struct RestartAt {
  Vector2d center;
};
struct LineFallback {};
}  // namespace guard_action

using GuardAction =
    std::variant<guard_action::Proceed, guard_action::RestartAt, guard_action::LineFallback>;

/// Per-fit divergence guard. The valley frame is built lazily, on the first
/// iterate that leaves the box, and reused afterwards.
class ValleyGuard {
 public:
  ValleyGuard(const NormalizedPointSet& data, ValleyGuardConfig cfg = {})
      : data_(&data), cfg_(cfg) {}

  GuardAction check(const Vector2d& p);

  int restarts() const { return restarts_; }
  bool frame_built() const { return built_; }
  const std::optional<ValleyFrame>& frame() const { return frame_; }

 private:
  const NormalizedPointSet* data_;
  ValleyGuardConfig cfg_;
  bool built_ = false;
  std::optional<ValleyFrame> frame_;  // empty after build means ambiguous
  int restarts_ = 0;
};

}  // namespace circlefit
