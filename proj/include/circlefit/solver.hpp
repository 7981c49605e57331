#pragma once

#include <iosfwd>
#include <limits>
#include <string_view>
#include <vector>

#include "circlefit/eig2.hpp"
#include "circlefit/evaluator.hpp"
#include "circlefit/types.hpp"
#include "circlefit/valley_guard.hpp"

namespace circlefit {

struct SolverConfig {
  double eps_star = 3e-8;  // AR1 -> AR2 switch threshold on |grad F|
  double alpha0 = 0.1;     // step bound |h| <= alpha1 |p| + alpha0
  double alpha1 = 0.1;
  double lambda_init = 1e-3;
  double lambda_up = 10.0;
  double lambda_down = 0.1;
  int max_outer_iters = 200;
  int max_inner_rejections = 50;
  double machine_eps = std::numeric_limits<double>::epsilon();
  double big_circle_switch = kBigCircleSwitch;
  bool use_valley_guard = true;
  ValleyGuardConfig valley;
  bool record_trace = false;

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

/// Acceptance rule in force: AR1 compares F, AR2 compares |grad F|.
enum class Phase { ar1, ar2 };

enum class Termination { small_step, max_iters, line_fallback, diverged };

std::string_view to_string(Phase p);
std::string_view to_string(Termination t);
std::string_view to_string(EvaluatorKind k);

enum class TraceEvent { start, accept, restart };

struct TraceRow {
  int iter = 0;
  Vector2d center = Vector2d::Zero();
  double value = 0.0;
  double grad_norm = 0.0;
  double lambda = 0.0;  // damping of the step that produced this iterate
  Phase phase = Phase::ar1;  // rule under which the iterate was accepted
  EvaluatorKind evaluator = EvaluatorKind::standard;
  double step_norm = 0.0;
  double h_max = 0.0;
  TraceEvent event = TraceEvent::start;
};

struct FitReport {
  FitResult result = Circle{};
  Vector2d center = Vector2d::Zero();  // last iterate, normalized frame
  int iterations = 0;
  int inner_rejections = 0;
  Termination termination = Termination::max_iters;
  int restarts = 0;
  double final_value = 0.0;
  double final_gradient_norm = 0.0;
  std::vector<TraceRow> trace;

  bool converged() const { return termination == Termination::small_step; }
};

/// Smallest damping that keeps every component of the damped step inside
/// h_max (max norm), with g = Q^T grad.
inline double lambda_min(const Vector2d& g, double d1, double d2, double h_max) {
  return std::max(std::abs(g.x()) / h_max - d1, std::abs(g.y()) / h_max - d2);
}

/// Smallest lambda' >= lambda with |diag(d + lambda')^-1 g| <= h_max in the
/// 2-norm. The max-norm bound above can leave the 2-norm up to sqrt(2) * h_max;
/// this closes the gap. Requires d_i + lambda > 0. Newton on the secular
/// function 1/|h(lambda)| - 1/h_max, which approaches the root from below.
inline double lambda_for_step_norm(const Vector2d& g, double d1, double d2, double h_max,
                                   double lambda) {
  const auto step_norm = [&](double lam) { return std::hypot(g.x() / (d1 + lam), g.y() / (d2 + lam)); };
  const double target = h_max * (1.0 - 1e-12);
  for (int it = 0; it < 100 && step_norm(lambda) > h_max; ++it) {
    const double e1 = d1 + lambda;
    const double e2 = d2 + lambda;
    const double n = step_norm(lambda);
    const double slope = (g.x() * g.x() / (e1 * e1 * e1) + g.y() * g.y() / (e2 * e2 * e2)) / (n * n * n);
    const double next = lambda + (1.0 / target - 1.0 / n) / slope;
    // guard against a stalled update in the last ulp
    lambda = next > lambda ? next : std::nextafter(lambda, INFINITY) + 1e-16 * std::abs(lambda);
  }
  return lambda;
}

/// h = -Q diag(1/(d1+lambda), 1/(d2+lambda)) Q^T grad.
/// Throws SingularDamping unless both damped eigenvalues are positive.
inline Vector2d damped_step(const Eigen2x2& eig, const Vector2d& grad, double lambda) {
  const double e1 = eig.d1 + lambda;
  const double e2 = eig.d2 + lambda;
  if (!(e1 > 0.0) || !(e2 > 0.0)) throw SingularDamping();
  const Vector2d g = eig.Q.transpose() * grad;
  return -(eig.Q * Vector2d(g.x() / e1, g.y() / e2));
}

/// Damped full-Newton minimization of the reduced objective from p0 with the
/// two-phase acceptance rule and the divergence guard.
FitReport fit(const NormalizedPointSet& data, const Vector2d& p0, const SolverConfig& cfg = {});

/// Trace as CSV: iter,a,b,F,grad_norm,lambda,phase,evaluator.
void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace);

}  // namespace circlefit
