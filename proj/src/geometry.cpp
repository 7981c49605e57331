#include "circlefit/geometry.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <vector>

namespace circlefit {

namespace {

bool parse_double(std::string_view s, double& out) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

NormalizedPointSet normalize(const PointSet& points) {
  const Eigen::Index n = points.rows();
  if (n < 3) throw DegenerateInput("at least 3 points are required");
  if (!points.allFinite()) throw DegenerateInput("non-finite coordinate");

  NormalizedPointSet out;
  auto& t = out.transform;
  t.x_mean = pairwise_mean(points.col(0));
  t.y_mean = pairwise_mean(points.col(1));

  PointSet centered(n, 2);
  centered.col(0) = points.col(0).array() - t.x_mean;
  centered.col(1) = points.col(1).array() - t.y_mean;
  // The rounded mean can be off by eps * |mean|, which is large next to a
  // small spread far from the origin. A second pass removes what is left.
  const double dx = pairwise_mean(centered.col(0));
  const double dy = pairwise_mean(centered.col(1));
  centered.col(0).array() -= dx;
  centered.col(1).array() -= dy;
  t.x_mean += dx;
  t.y_mean += dy;

  const double second_moment =
      pairwise_mean(centered.col(0).array().square() + centered.col(1).array().square());
  t.scale = std::sqrt(second_moment);
  if (!(t.scale > 0.0) || !std::isfinite(t.scale)) {
    throw DegenerateInput("all points coincide");
  }

  out.points = centered / t.scale;
  const auto x = out.points.col(0).array();
  const auto y = out.points.col(1).array();
  out.z = (x.square() + y.square()).matrix();
  out.mean_z = pairwise_mean(out.z);
  out.xx = pairwise_mean(x.square());
  out.yy = pairwise_mean(y.square());
  out.xy = pairwise_mean(x * y);
  out.xxy = pairwise_mean(x.square() * y);
  return out;
}

Circle denormalize(const Circle& c, const NormalizationTransform& t) {
  return {t.scale * c.a + t.x_mean, t.scale * c.b + t.y_mean, t.scale * c.r, Frame::raw};
}

Line denormalize(const Line& l, const NormalizationTransform& t) {
  return {Vector2d(t.scale * l.point.x() + t.x_mean, t.scale * l.point.y() + t.y_mean),
          l.direction};
}

FitResult denormalize(const FitResult& r, const NormalizationTransform& t) {
  return std::visit([&](const auto& v) -> FitResult { return denormalize(v, t); }, r);
}

PointSet read_points_csv(std::istream& in) {
  std::vector<double> xs;
  std::vector<double> ys;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto comma = line.find(',');
    double x = 0.0;
    double y = 0.0;
    const bool ok = comma != std::string::npos &&
                    parse_double(std::string_view(line).substr(0, comma), x) &&
                    parse_double(std::string_view(line).substr(comma + 1), y);
    if (!ok) {
      if (xs.empty() && line_no == 1) continue;  // header
      throw Error("malformed CSV row " + std::to_string(line_no) + ": " + line);
    }
    xs.push_back(x);
    ys.push_back(y);
  }
  PointSet pts(static_cast<Eigen::Index>(xs.size()), 2);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    pts(static_cast<Eigen::Index>(i), 0) = xs[i];
    pts(static_cast<Eigen::Index>(i), 1) = ys[i];
  }
  return pts;
}

PointSet read_points_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return read_points_csv(in);
}

}  // namespace circlefit
