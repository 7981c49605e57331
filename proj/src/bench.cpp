#include "circlefit/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "circlefit/evaluator.hpp"
#include "circlefit/geometry.hpp"
#include "circlefit/oracle.hpp"
#include "circlefit/valley_guard.hpp"

namespace circlefit {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::new_fit: return "new";
    case Method::gn: return "gn";
    case Method::gnm: return "gnm";
    case Method::lm: return "lm";
  }
  return "?";
}

std::string_view to_string(InitMode m) { return m == InitMode::kasa ? "kasa" : "random"; }

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::converged: return "converged";
    case Outcome::diverged: return "diverged";
    case Outcome::line_fallback: return "line";
    case Outcome::max_iters: return "max_iters";
  }
  return "?";
}

Method parse_method(std::string_view s) {
  for (Method m : {Method::new_fit, Method::gn, Method::gnm, Method::lm}) {
    if (s == to_string(m)) return m;
  }
  throw std::invalid_argument("unknown method: " + std::string(s));
}

InitMode parse_init_mode(std::string_view s) {
  if (s == "kasa") return InitMode::kasa;
  if (s == "random" || s == "random_center") return InitMode::random_center;
  throw std::invalid_argument("unknown init mode: " + std::string(s));
}

std::mt19937_64 run_rng(std::uint64_t seed, std::uint64_t run) {
  // splitmix64 finalizer over (seed, run)
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (run + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return std::mt19937_64(z);
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1p-53; }

PointSet generate_sample(std::mt19937_64& rng, int n, double half_width) {
  PointSet pts(std::max(n, 0), 2);
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    pts(i, 0) = half_width * (2.0 * uniform01(rng) - 1.0);
    pts(i, 1) = half_width * (2.0 * uniform01(rng) - 1.0);
  }
  return pts;
}

double MethodStats::divergence_pct() const {
  return runs == 0 ? 0.0 : 100.0 * (diverged + max_iters) / runs;
}

double MethodStats::mean_iterations() const {
  return converged == 0 ? 0.0 : static_cast<double>(iteration_sum) / converged;
}

std::optional<int> MethodStats::worst_digits() const {
  for (int k = 0; k < static_cast<int>(k_histogram.size()); ++k) {
    if (k_histogram[k] > 0) return k;
  }
  return std::nullopt;
}

const MethodStats& CampaignReport::stats_for(Method m) const {
  for (const auto& s : stats) {
    if (s.method == m) return s;
  }
  throw std::out_of_range("method not in campaign: " + std::string(to_string(m)));
}

namespace {

Outcome outcome_of(Termination t) {
  switch (t) {
    case Termination::small_step: return Outcome::converged;
    case Termination::diverged: return Outcome::diverged;
    case Termination::line_fallback: return Outcome::line_fallback;
    case Termination::max_iters: return Outcome::max_iters;
  }
  return Outcome::diverged;
}

MethodRun run_method(Method m, const NormalizedPointSet& data, const Circle& init,
                     const Campaign& c) {
  FitReport rep;
  switch (m) {
    case Method::new_fit:
      rep = fit(data, init.center(), c.solver);
      break;
    case Method::gn: {
      BaselineConfig cfg = c.baseline;
      cfg.stop_rule = StopRule::step_below_sqrt_eps;
      rep = gauss_newton_fit(data, init, cfg);
      break;
    }
    case Method::gnm: {
      BaselineConfig cfg = c.baseline;
      cfg.stop_rule = StopRule::step_below_eps;
      rep = gauss_newton_fit(data, init, cfg);
      break;
    }
    case Method::lm: {
      BaselineConfig cfg = c.baseline;
      cfg.stop_rule = StopRule::step_below_sqrt_eps;
      rep = lm_classic_fit(data, init, cfg);
      break;
    }
  }
  MethodRun out;
  out.outcome = outcome_of(rep.termination);
  out.iterations = rep.iterations;
  out.restarts = rep.restarts;
  if (const auto* circle = std::get_if<Circle>(&rep.result)) out.circle = *circle;
  return out;
}

struct RunResult {
  RunRecord record;
  std::vector<double> seconds;
  bool oracle_failed = false;
};

RunResult execute_run(const Campaign& c, int run) {
  auto rng = run_rng(c.seed, static_cast<std::uint64_t>(run));
  const PointSet raw = generate_sample(rng, c.n_points, c.point_box);
  const NormalizedPointSet data = normalize(raw);

  RunResult res;
  res.record.run = run;
  res.seconds.assign(c.methods.size(), 0.0);

  std::optional<Circle> init;
  if (c.init_mode == InitMode::kasa) {
    try {
      init = kasa_fit(data);
    } catch (const DegenerateInput&) {
      init.reset();
    }
  } else {
    const Vector2d center(c.random_center_box * (2.0 * uniform01(rng) - 1.0),
                          c.random_center_box * (2.0 * uniform01(rng) - 1.0));
    init = Circle{center.x(), center.y(), radius_for_center(data, center), Frame::normalized};
  }

  for (std::size_t i = 0; i < c.methods.size(); ++i) {
    if (!init) {
      MethodRun line;
      line.outcome = Outcome::line_fallback;
      res.record.methods.push_back(line);
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    res.record.methods.push_back(run_method(c.methods[i], data, *init, c));
    res.seconds[i] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }

  if (!c.score_accuracy) return res;
  const auto& ms = res.record.methods;
  const bool all_converged = std::all_of(ms.begin(), ms.end(), [](const MethodRun& m) {
    return m.outcome == Outcome::converged;
  });
  if (!all_converged || ms.empty()) return res;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    for (std::size_t j = i + 1; j < ms.size(); ++j) {
      const Eigen::Vector3d a(ms[i].circle.a, ms[i].circle.b, ms[i].circle.r);
      const Eigen::Vector3d b(ms[j].circle.a, ms[j].circle.b, ms[j].circle.r);
      if (!((a - b).norm() < c.same_minimum_tolerance)) return res;
    }
  }
  OracleFit oracle;
  try {
    oracle = oracle_fit(data, ms.front().circle);
  } catch (const NoConvergence&) {
    res.oracle_failed = true;
    return res;
  }
  for (auto& m : res.record.methods) {
    const AccuracyScore s = score(m.circle, oracle.circle);
    m.digits = s.digits;
    m.error = s.error;
  }
  res.record.scored = true;
  return res;
}

}  // namespace

CampaignReport run_campaign(const Campaign& c) {
  if (c.runs < 1) throw std::invalid_argument("runs must be >= 1");
  if (c.n_points < 3) throw std::invalid_argument("n must be >= 3");
  if (c.methods.empty()) throw std::invalid_argument("no methods selected");

  std::vector<RunResult> results(static_cast<std::size_t>(c.runs));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int run = next++; run < c.runs; run = next++) results[run] = execute_run(c, run);
  };
  const int threads = std::clamp(
      c.threads > 0 ? c.threads : static_cast<int>(std::thread::hardware_concurrency()), 1,
      c.runs);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  CampaignReport report;
  report.campaign = c;
  for (Method m : c.methods) {
    MethodStats s;
    s.method = m;
    report.stats.push_back(s);
  }
  for (auto& r : results) {
    for (std::size_t i = 0; i < c.methods.size(); ++i) {
      MethodStats& s = report.stats[i];
      const MethodRun& m = r.record.methods[i];
      ++s.runs;
      s.seconds += r.seconds[i];
      s.restarts += m.restarts;
      switch (m.outcome) {
        case Outcome::converged:
          ++s.converged;
          s.iteration_sum += m.iterations;
          break;
        case Outcome::diverged: ++s.diverged; break;
        case Outcome::line_fallback: ++s.line_fallback; break;
        case Outcome::max_iters: ++s.max_iters; break;
      }
      if (m.digits) {
        ++s.k_histogram[static_cast<std::size_t>(*m.digits)];
        ++s.scored;
      }
    }
    if (r.record.scored) ++report.scored_runs;
    if (r.oracle_failed) ++report.oracle_failures;
    if (c.keep_records) report.records.push_back(std::move(r.record));
  }
  return report;
}

nlohmann::json to_json(const CampaignReport& r) {
  using nlohmann::json;
  const Campaign& c = r.campaign;
  json methods = json::array();
  for (Method m : c.methods) methods.push_back(to_string(m));
  json out;
  out["campaign"] = {{"runs", c.runs},
                     {"n_points", c.n_points},
                     {"point_box", c.point_box},
                     {"init", to_string(c.init_mode)},
                     {"random_center_box", c.random_center_box},
                     {"seed", c.seed},
                     {"methods", methods},
                     {"score_accuracy", c.score_accuracy}};
  json stats = json::array();
  for (const auto& s : r.stats) {
    json j = {{"method", to_string(s.method)},
              {"runs", s.runs},
              {"converged", s.converged},
              {"diverged", s.diverged},
              {"line_fallback", s.line_fallback},
              {"max_iters", s.max_iters},
              {"divergence_pct", s.divergence_pct()},
              {"mean_iterations", s.mean_iterations()},
              {"restarts", s.restarts},
              {"scored", s.scored},
              {"k_histogram", s.k_histogram},
              {"seconds", s.seconds}};
    j["worst_k"] = s.worst_digits() ? json(*s.worst_digits()) : json(nullptr);
    stats.push_back(std::move(j));
  }
  out["methods"] = std::move(stats);
  out["scored_runs"] = r.scored_runs;
  out["oracle_failures"] = r.oracle_failures;
  if (!r.records.empty()) {
    json records = json::array();
    for (const auto& rec : r.records) {
      json runs = json::array();
      for (std::size_t i = 0; i < rec.methods.size(); ++i) {
        const auto& m = rec.methods[i];
        json j = {{"method", to_string(c.methods[i])},
                  {"outcome", to_string(m.outcome)},
                  {"iterations", m.iterations},
                  {"a", m.circle.a},
                  {"b", m.circle.b},
                  {"r", m.circle.r}};
        if (m.digits) {
          j["k"] = *m.digits;
          j["error"] = m.error;
        }
        runs.push_back(std::move(j));
      }
      records.push_back({{"run", rec.run}, {"scored", rec.scored}, {"fits", runs}});
    }
    out["records"] = std::move(records);
  }
  return out;
}

void write_histogram_csv(std::ostream& out, const CampaignReport& r) {
  out << "method";
  for (int k = 0; k <= 16; ++k) out << ",k" << k;
  out << '\n';
  for (const auto& s : r.stats) {
    out << to_string(s.method);
    for (int count : s.k_histogram) out << ',' << count;
    out << '\n';
  }
}

std::vector<double> log_space(double d_min, double d_max, int steps) {
  if (!(d_min > 0.0) || !(d_max >= d_min) || steps < 1) {
    throw std::invalid_argument("log_space needs 0 < d_min <= d_max and steps >= 1");
  }
  std::vector<double> out;
  const double lo = std::log10(d_min);
  const double hi = std::log10(d_max);
  for (int i = 0; i < steps; ++i) {
    out.push_back(steps == 1 ? d_min : std::pow(10.0, lo + (hi - lo) * i / (steps - 1)));
  }
  return out;
}

std::vector<SweepRow> evaluator_sweep(const NormalizedPointSet& data,
                                      const std::vector<double>& distances,
                                      std::optional<Vector2d> direction) {
  const Vector2d dir =
      direction ? direction->normalized() : Vector2d(principal_axes(data).col(1));
  std::vector<SweepRow> rows;
  for (double D : distances) {
    const Vector2d p = D * dir;
    SweepRow row;
    row.distance = D;
    row.value_standard = reduced_objective(data, p);
    row.value_big_circle = big_circle_value(data, p);
    const DoubleDouble ref = reduced_objective_dd(data, p);
    row.value_reference = ref.to_double();
    const auto digits = [&](double v) {
      const DoubleDouble err = abs(DoubleDouble(v) - ref);
      return accuracy_digits(err.to_double() / std::abs(ref.to_double()));
    };
    row.digits_standard = digits(row.value_standard);
    row.digits_big_circle = digits(row.value_big_circle);
    rows.push_back(row);
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "D,F_standard,F_big_circle,F_reference,digits_standard,digits_big_circle\n";
  const auto old_precision = out.precision(17);
  for (const auto& r : rows) {
    out << r.distance << ',' << r.value_standard << ',' << r.value_big_circle << ','
        << r.value_reference << ',' << r.digits_standard << ',' << r.digits_big_circle << '\n';
  }
  out.precision(old_precision);
}

}  // namespace circlefit
