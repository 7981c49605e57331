#include "circlefit/solver.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "circlefit/geometry.hpp"

namespace circlefit {

void SolverConfig::validate() const {
  if (!(eps_star > 0.0)) throw std::invalid_argument("eps_star must be positive");
  if (!(alpha0 > 0.0 && alpha0 < 1.0) || !(alpha1 > 0.0 && alpha1 < 1.0)) {
    throw std::invalid_argument("alpha0 and alpha1 must lie in (0, 1)");
  }
  if (!(lambda_up > 1.0 && lambda_down > 0.0 && lambda_down < 1.0)) {
    throw std::invalid_argument("need lambda_up > 1 > lambda_down > 0");
  }
  if (!(lambda_init > 0.0)) throw std::invalid_argument("lambda_init must be positive");
  if (max_outer_iters < 1 || max_inner_rejections < 1) {
    throw std::invalid_argument("iteration budgets must be positive");
  }
}

std::string_view to_string(Phase p) { return p == Phase::ar1 ? "AR1" : "AR2"; }

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::small_step: return "small_step";
    case Termination::max_iters: return "max_iters";
    case Termination::line_fallback: return "line_fallback";
    case Termination::diverged: return "diverged";
  }
  return "?";
}

std::string_view to_string(EvaluatorKind k) {
  return k == EvaluatorKind::standard ? "standard" : "big_circle";
}

namespace {

struct Iterate {
  Vector2d p;
  Evaluationd eval;
};

// Starting exactly on a data point leaves the objective non-differentiable;
// nudge the start off it.
Iterate evaluate_start(const NormalizedPointSet& data, Vector2d p, double d_switch) {
  for (int attempt = 0;; ++attempt) {
    try {
      return {p, evaluate(data, p, d_switch)};
    } catch (const CenterOnDataPoint&) {
      if (attempt == 8) throw;
      p += Vector2d(1e-6, 0.7e-6) * std::max(1.0, p.norm());
    }
  }
}

Circle circle_at(const NormalizedPointSet& data, const Vector2d& p) {
  return {p.x(), p.y(), radius_for_center(data, p), Frame::normalized};
}

}  // namespace

FitReport fit(const NormalizedPointSet& data, const Vector2d& p0, const SolverConfig& cfg) {
  cfg.validate();
  if (!p0.allFinite()) throw std::invalid_argument("initial center must be finite");

  FitReport report;
  ValleyGuard guard(data, cfg.valley);
  Iterate cur = evaluate_start(data, p0, cfg.big_circle_switch);
  Phase phase = Phase::ar1;
  double lambda = cfg.lambda_init;

  auto record = [&](int iter, TraceEvent ev, double lam, double step_norm, double h_max) {
    if (!cfg.record_trace) return;
    report.trace.push_back({iter, cur.p, cur.eval.value, cur.eval.gradient.norm(), lam, phase,
                            cur.eval.evaluator_used, step_norm, h_max, ev});
  };
  auto finish = [&](Termination t) {
    report.termination = t;
    report.center = cur.p;
    report.final_value = cur.eval.value;
    report.final_gradient_norm = cur.eval.gradient.norm();
    report.restarts = guard.restarts();
    if (t == Termination::line_fallback) {
      report.result = line_fit(data);
    } else {
      report.result = circle_at(data, cur.p);
    }
    return report;
  };
  // Returns true when the fit must stop with a line.
  auto apply_guard = [&](int iter) {
    if (!cfg.use_valley_guard) return false;
    const GuardAction action = guard.check(cur.p);
    if (std::holds_alternative<guard_action::LineFallback>(action)) return true;
    if (const auto* restart = std::get_if<guard_action::RestartAt>(&action)) {
      cur = evaluate_start(data, restart->center, cfg.big_circle_switch);
      phase = Phase::ar1;
      lambda = cfg.lambda_init;
      record(iter, TraceEvent::restart, lambda, 0.0, 0.0);
    }
    return false;
  };

  record(0, TraceEvent::start, lambda, 0.0, 0.0);
  if (apply_guard(0)) return finish(Termination::line_fallback);

  for (int iter = 1; iter <= cfg.max_outer_iters; ++iter) {
    report.iterations = iter;
    const double grad_norm = cur.eval.gradient.norm();
    if (phase == Phase::ar1 && grad_norm < cfg.eps_star) phase = Phase::ar2;

    const Eigen2x2 eig = eig_sym_2x2(cur.eval.hessian);
    const Vector2d g = eig.Q.transpose() * cur.eval.gradient;
    const double h_max = cfg.alpha1 * cur.p.norm() + cfg.alpha0;
    const double lam_min = lambda_min(g, eig.d1, eig.d2, h_max);
    if (phase == Phase::ar2) lambda = 0.0;

    bool accepted = false;
    for (int rejections = 0; rejections <= cfg.max_inner_rejections; ++rejections) {
      lambda = std::max(lambda, lam_min);
      // lambda_min only guarantees d_i + lambda >= |g_i| / h_max, which is
      // zero when g_i vanishes.
      const double d_low = std::min(eig.d1, eig.d2);
      if (!(d_low + lambda > 0.0)) {
        lambda = -d_low + cfg.lambda_init * std::max(1.0, std::abs(d_low));
      }
      lambda = lambda_for_step_norm(g, eig.d1, eig.d2, h_max, lambda);
      const Vector2d h = damped_step(eig, cur.eval.gradient, lambda);
      const double step_norm = h.norm();
      if (step_norm < cfg.machine_eps * std::max(cur.p.norm(), 1.0)) {
        return finish(Termination::small_step);
      }

      Iterate cand{cur.p + h, {}};
      bool ok = false;
      try {
        cand.eval = evaluate(data, cand.p, cfg.big_circle_switch);
        ok = phase == Phase::ar1 ? cand.eval.value < cur.eval.value
                                 : cand.eval.gradient.norm() < grad_norm;
      } catch (const CenterOnDataPoint&) {
        ok = false;
      }

      if (ok) {
        const double used = lambda;
        lambda *= cfg.lambda_down;
        cur = std::move(cand);
        record(iter, TraceEvent::accept, used, step_norm, h_max);
        accepted = true;
        break;
      }
      ++report.inner_rejections;
      lambda = phase == Phase::ar2 ? cfg.lambda_up * std::max(lambda, cfg.lambda_init)
                                   : cfg.lambda_up * lambda;
    }
    if (!accepted) return finish(Termination::max_iters);
    if (apply_guard(iter)) return finish(Termination::line_fallback);
  }
  return finish(Termination::max_iters);
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace) {
  out << "iter,a,b,F,grad_norm,lambda,phase,evaluator\n";
  const auto old_precision = out.precision(17);
  for (const auto& row : trace) {
    out << row.iter << ',' << row.center.x() << ',' << row.center.y() << ',' << row.value << ','
        << row.grad_norm << ',' << row.lambda << ',' << to_string(row.phase) << ','
        << to_string(row.evaluator) << '\n';
  }
  out.precision(old_precision);
}

}  // namespace circlefit
