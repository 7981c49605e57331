#include "circlefit/evaluator.hpp"

#include <cmath>
#include <numbers>

namespace circlefit {

BigCircleTerms big_circle_terms(const NormalizedPointSet& data, const Vector2d& center) {
  BigCircleTerms t;
  t.D = std::hypot(center.x(), center.y());
  t.theta = std::atan2(center.y(), center.x());
  if (t.theta < 0.0) t.theta += 2.0 * std::numbers::pi;
  t.delta = 1.0 / t.D;
  t.c = std::cos(t.theta);
  t.s = std::sin(t.theta);

  const auto x = data.points.col(0).array();
  const auto y = data.points.col(1).array();
  const auto z = data.z.array();
  const double d = t.delta;

  t.p = x * t.c + y * t.s;
  t.w = (1.0 - 2.0 * d * t.p + d * d * z).sqrt();
  if ((t.w <= kRelativeDistanceFloor).any() || !t.w.allFinite()) throw CenterOnDataPoint();
  t.tau = 2.0 * t.p - d * z;
  t.gamma = -t.tau / (1.0 + t.w);
  t.g = (z + t.p * t.gamma) / (2.0 + d * t.gamma);
  t.alpha = (x + t.gamma * t.c) / t.w;
  t.beta = (y + t.gamma * t.s) / t.w;
  t.eta = 1.0 / (1.0 + d * t.gamma);
  t.kappa = t.gamma / (2.0 + d * t.gamma);
  return t;
}

double big_circle_value(const NormalizedPointSet& data, const Vector2d& p) {
  const BigCircleTerms t = big_circle_terms(data, p);
  const double gbar = pairwise_mean(t.g);
  return -2.0 * gbar - t.delta * t.delta * gbar * gbar;
}

Evaluationd evaluate_big_circle(const NormalizedPointSet& data, const Vector2d& p,
                                double switch_distance) {
  if (!(p.norm() >= switch_distance)) throw CenterTooClose();
  const BigCircleTerms t = big_circle_terms(data, p);
  const double d = t.delta;
  const double d2 = d * d;
  const double c = t.c;
  const double s = t.s;
  const auto x = data.points.col(0).array();
  const auto y = data.points.col(1).array();
  const Eigen::ArrayXd gamma_eta = t.gamma * t.eta;
  const Eigen::ArrayXd tau_gamma_eta = t.tau * gamma_eta;

  const double gbar = pairwise_mean(t.g);
  const double P = 0.5 * (pairwise_mean(tau_gamma_eta) - d * pairwise_mean(tau_gamma_eta * t.kappa));
  const double Q = 0.5 * (pairwise_mean(t.tau * t.kappa) + data.mean_z);
  const double X = pairwise_mean(x * gamma_eta);
  const double Y = pairwise_mean(y * gamma_eta);
  const double A = P + d2 * (P + Q) * Q;
  const double B = 1.0 + d2 * Q;
  const double U = (P + Q) * c - X;
  const double V = (P + Q) * s - Y;

  const double gge = pairwise_mean(t.gamma * gamma_eta);
  const double age = pairwise_mean(t.alpha * gamma_eta);
  const double bge = pairwise_mean(t.beta * gamma_eta);
  const double aae = pairwise_mean(t.alpha * t.alpha * t.eta);
  const double bbe = pairwise_mean(t.beta * t.beta * t.eta);
  const double abe = pairwise_mean(t.alpha * t.beta * t.eta);

  const double M = (gge - Q) * c * c + 2.0 * (age - U) * c + aae;
  const double N = (gge - Q) * s * s + 2.0 * (bge - V) * s + bbe;
  const double L = (gge - Q) * c * s + (age - U) * s + (bge - V) * c + abe;

  Evaluationd e;
  e.value = -2.0 * gbar - d2 * gbar * gbar;
  e.gradient << 2.0 * d * (A * c - B * X), 2.0 * d * (A * s - B * Y);
  const double off = 2.0 * d2 * (U * s + V * c - d2 * U * V + Q * s * c + B * L);
  e.hessian << 2.0 * d2 * (U * (2.0 * c - d2 * U) - Q * s * s - B * N), off,
      off, 2.0 * d2 * (V * (2.0 * s - d2 * V) - Q * c * c - B * M);
  e.evaluator_used = EvaluatorKind::big_circle;
  return e;
}

Evaluationd evaluate(const NormalizedPointSet& data, const Vector2d& p, double switch_distance) {
  if (p.norm() >= switch_distance) return evaluate_big_circle(data, p, switch_distance);
  return evaluate_standard(data, p);
}

}  // namespace circlefit
