#include "circlefit/valley_guard.hpp"

#include <algorithm>
#include <cmath>

#include "circlefit/summation.hpp"

namespace circlefit {

Matrix2d scatter_matrix(const NormalizedPointSet& data) {
  Matrix2d S;
  S << data.xx, data.xy,
       data.xy, data.yy;
  return S;
}

Matrix2d principal_axes(const NormalizedPointSet& data) {
  return eig_sym_2x2(scatter_matrix(data)).Q;
}

ValleyFrame build_valley_frame(const NormalizedPointSet& data, double xxy_floor) {
  ValleyFrame f;
  f.rotation = principal_axes(data);
  const PointSet rotated = data.points * f.rotation;
  const auto x = rotated.col(0).array();
  const auto y = rotated.col(1).array();
  f.xxy = pairwise_mean(x.square() * y);
  if (!(std::abs(f.xxy) > xxy_floor)) throw AmbiguousValley();
  f.z_sign = f.xxy > 0.0 ? 1 : -1;
  return f;
}

Line line_fit(const NormalizedPointSet& data) {
  const Matrix2d axes = principal_axes(data);
  return {Vector2d::Zero(), axes.col(0).normalized()};
}

GuardAction ValleyGuard::check(const Vector2d& p) {
  if (std::max(std::abs(p.x()), std::abs(p.y())) <= cfg_.box) return guard_action::Proceed{};
  if (!built_) {
    built_ = true;
    try {
      frame_ = build_valley_frame(*data_, cfg_.xxy_floor);
    } catch (const AmbiguousValley&) {
      frame_.reset();
    }
  }
  if (!frame_) return guard_action::LineFallback{};

  const Vector2d q = frame_->to_frame(p);
  if (frame_->z_sign * q.y() < 0.0 && restarts_ < cfg_.max_restarts) {
    ++restarts_;
    return guard_action::RestartAt{frame_->from_frame(Vector2d(0.0, frame_->z_sign * cfg_.box))};
  }
  return guard_action::Proceed{};
}

}  // namespace circlefit
