#include "circlefit/baselines.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "circlefit/geometry.hpp"
#include "circlefit/summation.hpp"

namespace circlefit {

Circle kasa_fit(const NormalizedPointSet& data) {
  const auto x = data.points.col(0).array();
  const auto y = data.points.col(1).array();
  const auto z = data.z.array();

  Matrix2d S;
  S << data.xx, data.xy,
       data.xy, data.yy;
  const double det = S.determinant();
  const double trace = S.trace();
  if (!(det > 64.0 * std::numeric_limits<double>::epsilon() * trace * trace)) {
    throw DegenerateInput("collinear points: algebraic fit is singular");
  }
  const Vector2d rhs(pairwise_mean(x * z), pairwise_mean(y * z));
  const Vector2d center = 0.5 * (Matrix2d() << S(1, 1), -S(0, 1), -S(1, 0), S(0, 0)).finished() *
                          rhs / det;
  const double c = data.mean_z;
  return {center.x(), center.y(), std::sqrt(c + center.squaredNorm()), Frame::normalized};
}

namespace {

using Vector3d = Eigen::Vector3d;
using Matrix3d = Eigen::Matrix3d;

// Normal equations J^T J / n and J^T f / n for residuals f_i = r_i - R,
// plus the mean squared residual.
struct Linearization {
  Matrix3d normal;
  Vector3d rhs;
  double objective = 0.0;
};

Linearization linearize(const NormalizedPointSet& data, const Vector3d& theta) {
  const Vector2d p = theta.head<2>();
  const double R = theta(2);
  const auto r = distances(data.points, p);
  if ((r <= kDistanceFloor).any()) throw CenterOnDataPoint();
  const Eigen::ArrayXd u = (data.points.col(0).array() - p.x()) / r;
  const Eigen::ArrayXd v = (data.points.col(1).array() - p.y()) / r;
  const Eigen::ArrayXd res = r - R;

  const double mu = pairwise_mean(u);
  const double mv = pairwise_mean(v);
  const double muv = pairwise_mean(u * v);
  Linearization lin;
  lin.normal << pairwise_mean(u * u), muv, mu,
                muv, pairwise_mean(v * v), mv,
                mu, mv, 1.0;
  lin.rhs << -pairwise_mean(u * res), -pairwise_mean(v * res), -pairwise_mean(res);
  lin.objective = pairwise_mean(res * res);
  return lin;
}

double objective(const NormalizedPointSet& data, const Vector3d& theta) {
  const auto r = distances(data.points, Vector2d(theta.head<2>()));
  return pairwise_mean((r - theta(2)).square());
}

double step_measure(const Vector3d& step, const Vector3d& theta) {
  return step.cwiseAbs().sum() / (1.0 + std::abs(theta(2)));
}

bool outside_box(const Vector3d& theta, double box) {
  return !theta.allFinite() || std::abs(theta(0)) > box || std::abs(theta(1)) > box;
}

FitReport finish(FitReport& report, const Vector3d& theta, Termination t) {
  report.termination = t;
  report.center = theta.head<2>();
  report.result = Circle{theta(0), theta(1), theta(2), Frame::normalized};
  return report;
}

void record(FitReport& report, bool on, int iter, const Vector3d& theta, const Linearization& lin,
            double lambda, double step_norm) {
  report.final_value = lin.objective;
  report.final_gradient_norm = lin.rhs.norm();
  if (!on) return;
  TraceRow row;
  row.iter = iter;
  row.center = theta.head<2>();
  row.value = lin.objective;
  row.grad_norm = lin.rhs.norm();
  row.lambda = lambda;
  row.step_norm = step_norm;
  row.event = iter == 0 ? TraceEvent::start : TraceEvent::accept;
  report.trace.push_back(row);
}

}  // namespace

FitReport gauss_newton_fit(const NormalizedPointSet& data, const Circle& init,
                           const BaselineConfig& cfg) {
  const double tol = cfg.stop_tolerance();
  const double noise_floor = std::sqrt(std::numeric_limits<double>::epsilon());
  FitReport report;
  Vector3d theta(init.a, init.b, init.r);

  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    report.iterations = iter;
    Linearization lin;
    try {
      lin = linearize(data, theta);
    } catch (const CenterOnDataPoint&) {
      return finish(report, theta, Termination::diverged);
    }
    record(report, cfg.record_trace && iter == 1, 0, theta, lin, 0.0, 0.0);

    const Eigen::LDLT<Matrix3d> ldlt(lin.normal);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
      return finish(report, theta, Termination::diverged);
    }
    Vector3d step = ldlt.solve(-lin.rhs);
    if (!step.allFinite()) return finish(report, theta, Termination::diverged);
    if (step_measure(step, theta) < tol) return finish(report, theta, Termination::small_step);

    Vector3d next = theta + step;
    if (step_measure(step, theta) > noise_floor) {
      int halvings = 0;
      while (!(objective(data, next) < lin.objective)) {
        if (++halvings > cfg.max_halvings) {
          return finish(report, theta, Termination::small_step);
        }
        step *= 0.5;
        next = theta + step;
      }
    }
    theta = next;
    if (outside_box(theta, cfg.divergence_box)) return finish(report, theta, Termination::diverged);
    if (cfg.record_trace) {
      try {
        record(report, true, iter, theta, linearize(data, theta), 0.0, step.norm());
      } catch (const CenterOnDataPoint&) {
      }
    }
  }
  return finish(report, theta, Termination::max_iters);
}

FitReport lm_classic_fit(const NormalizedPointSet& data, const Circle& init,
                         const BaselineConfig& cfg) {
  const double tol = cfg.stop_tolerance();
  FitReport report;
  Vector3d theta(init.a, init.b, init.r);
  double lambda = cfg.lambda_init;

  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    report.iterations = iter;
    Linearization lin;
    try {
      lin = linearize(data, theta);
    } catch (const CenterOnDataPoint&) {
      return finish(report, theta, Termination::diverged);
    }
    record(report, cfg.record_trace && iter == 1, 0, theta, lin, lambda, 0.0);

    bool accepted = false;
    for (int inner = 0; inner <= cfg.max_inner; ++inner) {
      const Matrix3d damped = lin.normal + lambda * Matrix3d::Identity();
      const Vector3d step = damped.llt().solve(-lin.rhs);
      if (!step.allFinite()) return finish(report, theta, Termination::diverged);
      if (step_measure(step, theta) < tol) return finish(report, theta, Termination::small_step);

      const Vector3d next = theta + step;
      if (outside_box(next, cfg.divergence_box)) {
        return finish(report, next, Termination::diverged);
      }
      if (next(2) > 0.0 && objective(data, next) < lin.objective) {
        theta = next;
        lambda *= cfg.lambda_down;
        accepted = true;
        if (cfg.record_trace) {
          try {
            record(report, true, iter, theta, linearize(data, theta), lambda, step.norm());
          } catch (const CenterOnDataPoint&) {
          }
        }
        break;
      }
      ++report.inner_rejections;
      lambda *= cfg.lambda_up;
    }
    if (!accepted) return finish(report, theta, Termination::max_iters);
  }
  return finish(report, theta, Termination::max_iters);
}

}  // namespace circlefit
