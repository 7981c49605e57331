// circlefit command-line driver: single fits, Monte-Carlo campaigns and
// evaluator accuracy sweeps.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "circlefit/circlefit.hpp"

namespace cf = circlefit;
using nlohmann::json;

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

json result_json(const cf::FitResult& r) {
  if (const auto* c = std::get_if<cf::Circle>(&r)) {
    return {{"type", "circle"}, {"a", c->a}, {"b", c->b}, {"r", c->r}};
  }
  const auto& l = std::get<cf::Line>(r);
  return {{"type", "line"},
          {"point", {l.point.x(), l.point.y()}},
          {"direction", {l.direction.x(), l.direction.y()}}};
}

struct FitOptions {
  std::string input;
  std::string method = "new";
  std::string init = "kasa";
  std::uint64_t seed = 1;
  double random_box = 5.0;
  std::string trace;
};

int run_fit(const FitOptions& o) {
  const cf::PointSet pts = cf::read_points_csv(o.input);
  const cf::NormalizedPointSet data = cf::normalize(pts);
  const cf::Method method = cf::parse_method(o.method);
  const cf::InitMode init_mode = cf::parse_init_mode(o.init);

  cf::FitReport report;
  bool have_init = true;
  cf::Circle init;
  if (init_mode == cf::InitMode::kasa) {
    try {
      init = cf::kasa_fit(data);
    } catch (const cf::DegenerateInput&) {
      have_init = false;
    }
  } else {
    auto rng = cf::run_rng(o.seed, 0);
    const cf::Vector2d c(o.random_box * (2.0 * cf::uniform01(rng) - 1.0),
                         o.random_box * (2.0 * cf::uniform01(rng) - 1.0));
    init = {c.x(), c.y(), cf::radius_for_center(data, c), cf::Frame::normalized};
  }

  if (!have_init) {
    report.result = cf::line_fit(data);
    report.termination = cf::Termination::line_fallback;
  } else if (method == cf::Method::new_fit) {
    cf::SolverConfig cfg;
    cfg.record_trace = !o.trace.empty();
    report = cf::fit(data, init.center(), cfg);
  } else {
    cf::BaselineConfig cfg;
    cfg.record_trace = !o.trace.empty();
    cfg.stop_rule = method == cf::Method::gnm ? cf::StopRule::step_below_eps
                                              : cf::StopRule::step_below_sqrt_eps;
    report = method == cf::Method::lm ? cf::lm_classic_fit(data, init, cfg)
                                      : cf::gauss_newton_fit(data, init, cfg);
  }

  if (!o.trace.empty()) {
    std::ofstream out(o.trace);
    if (!out) throw cf::Error("cannot write " + o.trace);
    cf::write_trace_csv(out, report.trace);
  }

  json j = {{"method", o.method},
            {"init", o.init},
            {"termination", cf::to_string(report.termination)},
            {"iterations", report.iterations},
            {"inner_rejections", report.inner_rejections},
            {"restarts", report.restarts},
            {"final_gradient_norm", report.final_gradient_norm},
            {"result", result_json(cf::denormalize(report.result, data.transform))},
            {"normalized", result_json(report.result)}};
  std::cout << std::setprecision(17) << j.dump(2) << '\n';
  return 0;
}

struct BenchOptions {
  cf::Campaign campaign;
  std::string init = "kasa";
  std::string methods = "new";
  std::string out;
  std::string histogram;
};

int run_bench(BenchOptions o) {
  o.campaign.init_mode = cf::parse_init_mode(o.init);
  o.campaign.methods.clear();
  for (const auto& m : split_list(o.methods)) o.campaign.methods.push_back(cf::parse_method(m));

  const cf::CampaignReport report = cf::run_campaign(o.campaign);
  const json j = cf::to_json(report);
  if (o.out.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    std::ofstream out(o.out);
    if (!out) throw cf::Error("cannot write " + o.out);
    out << j.dump(2) << '\n';
  }
  if (!o.histogram.empty()) {
    std::ofstream out(o.histogram);
    if (!out) throw cf::Error("cannot write " + o.histogram);
    cf::write_histogram_csv(out, report);
  }
  for (const auto& s : report.stats) {
    std::cerr << cf::to_string(s.method) << ": divergence " << s.divergence_pct()
              << "%, mean iterations " << s.mean_iterations() << ", scored " << s.scored << '\n';
  }
  return 0;
}

struct SweepOptions {
  std::string input;
  double d_min = 0.1;
  double d_max = 1e8;
  int steps = 19;
  double angle_deg = std::nan("");
  std::string out;
};

int run_sweep(const SweepOptions& o) {
  const cf::NormalizedPointSet data = cf::normalize(cf::read_points_csv(o.input));
  std::optional<cf::Vector2d> direction;
  if (!std::isnan(o.angle_deg)) {
    const double t = o.angle_deg * std::numbers::pi / 180.0;
    direction = cf::Vector2d(std::cos(t), std::sin(t));
  }
  const auto rows = cf::evaluator_sweep(data, cf::log_space(o.d_min, o.d_max, o.steps), direction);
  if (o.out.empty()) {
    cf::write_sweep_csv(std::cout, rows);
  } else {
    std::ofstream out(o.out);
    if (!out) throw cf::Error("cannot write " + o.out);
    cf::write_sweep_csv(out, rows);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometric circle fitting and benchmarks"};
  app.require_subcommand(1);

  FitOptions fit_opts;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a circle to points from a CSV file");
  fit_cmd->add_option("--input,-i", fit_opts.input, "CSV file with x,y rows")->required();
  fit_cmd->add_option("--method,-m", fit_opts.method, "new | gn | gnm | lm")
      ->check(CLI::IsMember({"new", "gn", "gnm", "lm"}));
  fit_cmd->add_option("--init", fit_opts.init, "kasa | random")
      ->check(CLI::IsMember({"kasa", "random"}));
  fit_cmd->add_option("--seed", fit_opts.seed, "Seed for --init random");
  fit_cmd->add_option("--random-box", fit_opts.random_box,
                      "Half-width of the random initial-center square (normalized frame)");
  fit_cmd->add_option("--trace", fit_opts.trace, "Write the iterate trace as CSV");

  BenchOptions bench_opts;
  auto& c = bench_opts.campaign;
  auto* bench_cmd = app.add_subcommand("bench", "Monte-Carlo campaign on random samples");
  bench_cmd->add_option("--runs", c.runs, "Number of samples")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--n", c.n_points, "Points per sample")->check(CLI::Range(3, 1 << 20));
  bench_cmd->add_option("--seed", c.seed, "Campaign seed");
  bench_cmd->add_option("--init", bench_opts.init, "kasa | random")
      ->check(CLI::IsMember({"kasa", "random"}));
  bench_cmd->add_option("--methods", bench_opts.methods, "Comma list of new,gn,gnm,lm");
  bench_cmd->add_option("--box", c.point_box, "Half-width of the sampling square");
  bench_cmd->add_option("--random-box", c.random_center_box,
                        "Half-width of the random initial-center square");
  bench_cmd->add_flag("--score", c.score_accuracy,
                      "Score runs where all methods agree against the double-double oracle");
  bench_cmd->add_flag("--records", c.keep_records, "Include per-run records in the JSON");
  bench_cmd->add_option("--threads", c.threads, "Worker threads (0: all cores)");
  bench_cmd->add_option("--out,-o", bench_opts.out, "JSON report path (default stdout)");
  bench_cmd->add_option("--histogram", bench_opts.histogram, "Accuracy histogram CSV path");

  SweepOptions sweep_opts;
  auto* sweep_cmd = app.add_subcommand("sweep", "Objective accuracy vs. center distance");
  sweep_cmd->add_option("--input,-i", sweep_opts.input, "CSV file with x,y rows")->required();
  sweep_cmd->add_option("--d-min", sweep_opts.d_min)->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--d-max", sweep_opts.d_max)->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--steps", sweep_opts.steps)->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--angle", sweep_opts.angle_deg,
                        "Center direction in degrees (default: minor principal axis)");
  sweep_cmd->add_option("--out,-o", sweep_opts.out, "CSV path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (fit_cmd->parsed()) return run_fit(fit_opts);
    if (bench_cmd->parsed()) return run_bench(bench_opts);
    if (sweep_cmd->parsed()) return run_sweep(sweep_opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
