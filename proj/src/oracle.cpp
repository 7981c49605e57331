#include "circlefit/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "circlefit/evaluator.hpp"
#include "circlefit/geometry.hpp"
#include "circlefit/summation.hpp"

namespace circlefit {

namespace {

using Vector2dd = Vector2<DoubleDouble>;
using Matrix2dd = Matrix2<DoubleDouble>;

struct CenteredDD {
  Points<DoubleDouble> points;
  Vector2dd mean;
};

CenteredDD center_in_dd(const NormalizedPointSet& data) {
  const Points<DoubleDouble> raw = data.points.cast<DoubleDouble>();
  CenteredDD c;
  c.mean << pairwise_mean(raw.col(0)), pairwise_mean(raw.col(1));
  c.points = raw;
  c.points.col(0).array() -= c.mean.x();
  c.points.col(1).array() -= c.mean.y();
  return c;
}

DoubleDouble norm(const Vector2dd& v) { return sqrt(v.squaredNorm()); }

}  // namespace

OracleFit oracle_fit(const NormalizedPointSet& data, const Circle& seed, int max_iters) {
  const CenteredDD c = center_in_dd(data);
  Vector2dd p(DoubleDouble(seed.a) - c.mean.x(), DoubleDouble(seed.b) - c.mean.y());

  OracleFit out;
  for (int iter = 0;; ++iter) {
    const auto e = evaluate_standard<DoubleDouble>(c.points, p, 0.0);
    const DoubleDouble gnorm = norm(e.gradient);
    const double tol = 1e-28 * std::max(1.0, norm(p).to_double());
    if (gnorm.to_double() <= tol) {
      out.gradient_norm = gnorm;
      out.iterations = iter;
      break;
    }
    if (iter == max_iters) {
      throw NoConvergence("oracle fit did not converge, |grad| = " +
                          std::to_string(gnorm.to_double()));
    }
    const Matrix2dd& H = e.hessian;
    const DoubleDouble det = H(0, 0) * H(1, 1) - H(0, 1) * H(1, 0);
    if (det.hi() == 0.0) throw NoConvergence("singular Hessian in oracle fit");
    const Vector2dd step(-(H(1, 1) * e.gradient.x() - H(0, 1) * e.gradient.y()) / det,
                         -(H(0, 0) * e.gradient.y() - H(1, 0) * e.gradient.x()) / det);
    p += step;
  }

  out.r = radius_for_center(c.points, p);
  out.a = p.x() + c.mean.x();
  out.b = p.y() + c.mean.y();
  out.circle = {out.a.to_double(), out.b.to_double(), out.r.to_double(), Frame::normalized};
  return out;
}

DoubleDouble reduced_objective_dd(const NormalizedPointSet& data, const Vector2d& p) {
  const CenteredDD c = center_in_dd(data);
  const Vector2dd q = p.cast<DoubleDouble>() - c.mean;
  return reduced_objective(c.points, q) - c.mean.squaredNorm();
}

int accuracy_digits(double relative_error) {
  if (!(relative_error > 0.0)) return relative_error == 0.0 ? 16 : 0;
  const double k = std::floor(-std::log10(relative_error));
  return static_cast<int>(std::clamp(k, 0.0, 16.0));
}

AccuracyScore score(const Circle& estimate, const Circle& reference) {
  const Eigen::Vector3d est(estimate.a, estimate.b, estimate.r);
  const Eigen::Vector3d ref(reference.a, reference.b, reference.r);
  AccuracyScore s;
  s.error = (est - ref).norm() / std::max(ref.norm(), 1.0);
  s.digits = accuracy_digits(s.error);
  return s;
}

}  // namespace circlefit
