#include <doctest.h>

#include "test_support.hpp"

using namespace circlefit;
using namespace circlefit::testing;

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Finite differences lose their meaning right next to a data point, where the
// objective has a kink; the checks below keep centers at least this far away.
constexpr double kFdClearance = 0.05;

NormalizedPointSet cross_data() { return normalize(make_points({{1, 0}, {-1, 0}, {0, 1}, {0, -1}})); }

}  // namespace

TEST_CASE("standard evaluator on the unit cross") {
  const auto e = evaluate_standard(cross_data(), Vector2d(0, 0));
  CHECK(e.value == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(e.gradient.norm() < 1e-15);
  CHECK(e.hessian(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(e.hessian(1, 1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(e.hessian(0, 1)) < 1e-15);
  CHECK(e.evaluator_used == EvaluatorKind::standard);
}

TEST_CASE("standard gradient and Hessian match finite differences") {
  std::mt19937_64 rng(42);
  int checked = 0;
  while (checked < 1000) {
    const auto data = normalize(random_points(rng, 8));
    const Vector2d p = random_center(rng, 0.0, 2.0);
    if (min_distance(data, p) < kFdClearance) continue;
    ++checked;
    const auto e = evaluate_standard(data, p);
    const auto f = [&](const Vector2d& q) { return evaluate_standard(data, q).value; };
    const auto grad = [&](const Vector2d& q) { return evaluate_standard(data, q).gradient; };
    const Vector2d g_fd = fd_gradient(f, p, 1e-6);
    const Matrix2d h_fd = fd_jacobian(grad, p, 1e-6);
    CHECK(rel_diff_norm(e.gradient, g_fd) <= 1e-6);
    CHECK(rel_diff_norm(e.hessian, h_fd) <= 1e-5);
    CHECK(e.hessian(0, 1) == e.hessian(1, 0));
  }
}

TEST_CASE("standard evaluator is rotation equivariant") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto data = normalize(random_points(rng, 8));
    const Vector2d p = random_center(rng, 0.0, 2.0);
    if (min_distance(data, p) < 1e-3) continue;
    const Matrix2d R = rotation(uniform(rng, 0.0, 2.0 * M_PI));
    NormalizedPointSet rotated = data;
    rotated.points = data.points * R.transpose();
    const auto e = evaluate_standard(data, p);
    const auto er = evaluate_standard(rotated, Vector2d(R * p));
    CHECK(std::abs(er.value - e.value) <= 1e-12);
    CHECK((er.gradient - R * e.gradient).norm() <= 1e-12);
    CHECK((er.hessian - R * e.hessian * R.transpose()).norm() <= 1e-12);
  }
}

TEST_CASE("center on a data point is reported") {
  const auto data = cross_data();
  const Vector2d on_point = data.points.row(0).transpose();
  CHECK_THROWS_AS(evaluate_standard(data, on_point), CenterOnDataPoint);
  CHECK_THROWS_AS(evaluate(data, on_point), CenterOnDataPoint);
}

TEST_CASE("big-circle evaluator agrees with the standard one at moderate distance") {
  const auto data = normalize(make_points({{0, 0}, {1, 0.05}, {2, 0}}));
  for (double t : {1.5, 3.0, 7.0}) {
    const Vector2d p(0.0, t);
    const auto s = evaluate_standard(data, p);
    const auto b = evaluate_big_circle(data, p, 1.0);
    CHECK(rel_diff(s.value, b.value) <= 1e-9);
    CHECK(rel_diff_norm(s.gradient, b.gradient) <= 1e-9);
    CHECK(rel_diff_norm(s.hessian, b.hessian) <= 1e-9);
    CHECK(b.evaluator_used == EvaluatorKind::big_circle);
  }
}

TEST_CASE("big-circle evaluator stays accurate for a huge circle") {
  // Five points on the circle with center (0, 1e6) and radius 1e6 near the
  // origin; y = 2 R sin^2(t/2) avoids cancellation when generating them.
  const double R = 1e6;
  PointSet pts(5, 2);
  const double ts[] = {-2e-6, -1e-6, 0.0, 1.5e-6, 2.5e-6};
  for (int i = 0; i < 5; ++i) {
    pts(i, 0) = R * std::sin(ts[i]);
    pts(i, 1) = 2.0 * R * std::pow(std::sin(ts[i] / 2.0), 2);
  }
  const auto data = normalize(pts);
  const auto& t = data.transform;
  const Vector2d center((0.0 - t.x_mean) / t.scale, (R - t.y_mean) / t.scale);
  CHECK(evaluate_big_circle(data, center).gradient.norm() <= 1e-9);

  // Nudging the center by amounts far too small to change the true gradient
  // exposes the rounding noise of the standard formulas, which grows with |p|.
  double noise_std = 0.0;
  double noise_big = 0.0;
  for (int k = 1; k <= 20; ++k) {
    const Vector2d p = center + Vector2d(k * 1e-9, k * 1e-9);
    noise_std = std::max(noise_std, evaluate_standard(data, p).gradient.norm());
    noise_big = std::max(noise_big, evaluate_big_circle(data, p).gradient.norm());
  }
  MESSAGE("max gradient norm near the center: big-circle " << noise_big << ", standard " << noise_std);
  CHECK(noise_big <= 1e-9);
  CHECK(noise_std > 10.0 * noise_big);
}

TEST_CASE("circumcenter of a large-radius triangle is stationary for the big-circle formulas") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    // three points on an arc of a circle with radius in [10, 1e4] in units of the data spread
    const double radius = std::pow(10.0, uniform(rng, 1.0, 4.0));
    const double span = 1.0 / radius;
    const Vector2d c(uniform(rng, -1, 1), radius);
    const double base = -M_PI / 2.0;
    const auto pts = points_on_circle(c, radius, {base - span, base + 0.3 * span, base + span});
    const auto data = normalize(pts);
    // exact circumcenter of the rounded points in normalized coordinates,
    // from the equidistance equations solved in double-double
    using circlefit::DoubleDouble;
    const auto P = data.points.cast<DoubleDouble>();
    const DoubleDouble a11 = DoubleDouble(2.0) * (P(1, 0) - P(0, 0));
    const DoubleDouble a12 = DoubleDouble(2.0) * (P(1, 1) - P(0, 1));
    const DoubleDouble a21 = DoubleDouble(2.0) * (P(2, 0) - P(0, 0));
    const DoubleDouble a22 = DoubleDouble(2.0) * (P(2, 1) - P(0, 1));
    const auto sq = [&](int i) { return P(i, 0) * P(i, 0) + P(i, 1) * P(i, 1); };
    const DoubleDouble b1 = sq(1) - sq(0);
    const DoubleDouble b2 = sq(2) - sq(0);
    const DoubleDouble det = a11 * a22 - a12 * a21;
    const Vector2d center(((b1 * a22 - a12 * b2) / det).to_double(),
                          ((a11 * b2 - a21 * b1) / det).to_double());
    REQUIRE(center.norm() >= 10.0);
    const auto e = evaluate_big_circle(data, center);
    CHECK(e.gradient.norm() <= 1e-9);
  }
}

TEST_CASE("big-circle terms satisfy their defining identities") {
  std::mt19937_64 rng(9);
  const auto data = normalize(random_points(rng, 8));
  const Vector2d p(50, 50);
  const auto t = big_circle_terms(data, p);
  const auto r = distances(data.points, p);
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    CHECK(t.w(i) > 0.0);
    CHECK(std::abs(t.D * t.w(i) - r(i)) <= 4 * kEps * r(i));
    CHECK(std::abs(t.D + t.gamma(i) - r(i)) <= 4 * kEps * r(i));
    CHECK(std::abs(t.gamma(i) * (1.0 + t.w(i)) + t.tau(i)) <= 4 * kEps * std::abs(t.tau(i)));
  }
  CHECK(t.theta >= 0.0);
  CHECK(t.theta < 2.0 * M_PI);
}

TEST_CASE("big-circle evaluator preconditions") {
  const auto data = cross_data();
  CHECK_THROWS_AS(evaluate_big_circle(data, Vector2d(0.5, 0.5)), CenterTooClose);
}

TEST_CASE("evaluator dispatch") {
  const auto data = cross_data();
  CHECK(evaluate(data, Vector2d(0.1, 0.1)).evaluator_used == EvaluatorKind::standard);
  CHECK(evaluate(data, Vector2d(80, 60)).evaluator_used == EvaluatorKind::big_circle);
  CHECK(evaluate(data, Vector2d(kBigCircleSwitch, 0.0)).evaluator_used == EvaluatorKind::big_circle);
  CHECK(evaluate(data, Vector2d(std::nextafter(kBigCircleSwitch, 0.0), 0.0)).evaluator_used ==
        EvaluatorKind::standard);
}

TEST_CASE("dual evaluators agree on 1000 random pairs with |p| in [2, 8]") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto data = normalize(random_points(rng, 8));
    const Vector2d p = random_center(rng, 2.0, 8.0);
    const auto s = evaluate_standard(data, p);
    const auto b = evaluate_big_circle(data, p);
    CHECK(rel_diff(s.value, b.value) <= 1e-9);
    CHECK(rel_diff_norm(s.gradient, b.gradient) <= 1e-9);
    CHECK(rel_diff_norm(s.hessian, b.hessian) <= 1e-9);
  }
}

TEST_CASE("big-circle derivatives match finite differences of the big-circle objective") {
  std::mt19937_64 rng(123);
  for (double D : {5.0, 50.0}) {
    for (int trial = 0; trial < 200; ++trial) {
      const auto data = normalize(random_points(rng, 8));
      const Vector2d p = random_center(rng, D, D);
      const double h = 1e-5 * D;
      const auto e = evaluate_big_circle(data, p);
      const auto f = [&](const Vector2d& q) { return evaluate_big_circle(data, q).value; };
      const auto grad = [&](const Vector2d& q) { return evaluate_big_circle(data, q).gradient; };
      CHECK(rel_diff_norm(e.gradient, fd_gradient(f, p, h)) <= 1e-5);
      CHECK(rel_diff_norm(e.hessian, fd_jacobian(grad, p, h)) <= 1e-5);
    }
  }
}

TEST_CASE("big-circle evaluator is rotation equivariant") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const auto data = normalize(random_points(rng, 8));
    const Vector2d p = random_center(rng, 2.0, 50.0);
    const Matrix2d R = rotation(uniform(rng, 0.0, 2.0 * M_PI));
    const auto rotated = normalize(PointSet(data.points * R.transpose()));
    // re-normalizing a rotated normalized set is the identity up to rounding
    const auto e = evaluate_big_circle(data, p);
    const auto er = evaluate_big_circle(rotated, Vector2d(R * p));
    CHECK(std::abs(er.value - e.value) <= 1e-12);
    CHECK((er.gradient - R * e.gradient).norm() <= 1e-12);
    CHECK((er.hessian - R * e.hessian * R.transpose()).norm() <= 1e-12);
  }
}
