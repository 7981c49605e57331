#pragma once

#include <iosfwd>
#include <string>

#include "circlefit/summation.hpp"
#include "circlefit/types.hpp"

namespace circlefit {

/// Distances r_i = |(x_i, y_i) - p| for every point.
template <typename Scalar>
Eigen::Array<Scalar, Eigen::Dynamic, 1> distances(const Points<Scalar>& pts,
                                                  const Vector2<Scalar>& p) {
  using std::sqrt;
  Eigen::Array<Scalar, Eigen::Dynamic, 1> r(pts.rows());
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    const Scalar dx = pts(i, 0) - p.x();
    const Scalar dy = pts(i, 1) - p.y();
    r(i) = sqrt(dx * dx + dy * dy);
  }
  return r;
}

/// Optimal radius for a fixed center: the mean distance to the points.
template <typename Scalar>
Scalar radius_for_center(const Points<Scalar>& pts, const Vector2<Scalar>& p) {
  return pairwise_mean(distances(pts, p));
}

inline double radius_for_center(const NormalizedPointSet& data, const Vector2d& p) {
  return radius_for_center(data.points, p);
}

/// Reduced objective a^2 + b^2 - rbar^2 for centered data.
template <typename Scalar>
Scalar reduced_objective(const Points<Scalar>& pts, const Vector2<Scalar>& p) {
  const Scalar rbar = radius_for_center(pts, p);
  return p.squaredNorm() - rbar * rbar;
}

inline double reduced_objective(const NormalizedPointSet& data, const Vector2d& p) {
  return reduced_objective(data.points, p);
}

/// Sum of squared geometric distances with R set to its optimum.
template <typename Scalar>
Scalar full_objective(const Points<Scalar>& pts, const Vector2<Scalar>& p) {
  const auto r = distances(pts, p);
  const Scalar rbar = pairwise_mean(r);
  const Eigen::Array<Scalar, Eigen::Dynamic, 1> dev = r - rbar;
  return pairwise_sum(dev * dev);
}

inline double full_objective(const NormalizedPointSet& data, const Vector2d& p) {
  return full_objective(data.points, p);
}

/// Centers the points on their centroid and scales them to unit RMS distance.
/// Throws DegenerateInput for n < 3, non-finite input, or coincident points.
NormalizedPointSet normalize(const PointSet& points);

/// Maps a normalized-frame circle back to raw coordinates.
Circle denormalize(const Circle& c, const NormalizationTransform& t);
Line denormalize(const Line& l, const NormalizationTransform& t);
FitResult denormalize(const FitResult& r, const NormalizationTransform& t);

/// Reads `x,y` rows; a non-numeric first line is treated as a header.
PointSet read_points_csv(std::istream& in);
PointSet read_points_csv(const std::string& path);

}  // namespace circlefit
