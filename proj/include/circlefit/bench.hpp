#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "circlefit/baselines.hpp"
#include "circlefit/solver.hpp"
#include "circlefit/types.hpp"

namespace circlefit {

enum class Method { new_fit, gn, gnm, lm };
enum class InitMode { kasa, random_center };

std::string_view to_string(Method m);
std::string_view to_string(InitMode m);
Method parse_method(std::string_view s);
InitMode parse_init_mode(std::string_view s);

/// Per-run generator: std::mt19937_64 seeded with splitmix64(seed, run). Both
/// are fully specified, so samples are identical on every platform.
std::mt19937_64 run_rng(std::uint64_t seed, std::uint64_t run);

/// Uniform double in [0, 1) from the top 53 bits of one draw.
double uniform01(std::mt19937_64& rng);

/// n i.i.d. points uniform in [-half_width, half_width]^2.
PointSet generate_sample(std::mt19937_64& rng, int n, double half_width);

struct Campaign {
  int runs = 10000;
  int n_points = 8;
  double point_box = 1.0;  // half-width of the sampling square
  InitMode init_mode = InitMode::kasa;
  double random_center_box = 5.0;
  std::uint64_t seed = 1;
  std::vector<Method> methods = {Method::new_fit};
  bool score_accuracy = false;       // oracle-score runs where all methods agree
  double same_minimum_tolerance = 1e-2;
  bool keep_records = false;
  int threads = 0;  // 0: hardware concurrency
  SolverConfig solver;
  BaselineConfig baseline;
};

enum class Outcome { converged, diverged, line_fallback, max_iters };
std::string_view to_string(Outcome o);

struct MethodRun {
  Outcome outcome = Outcome::diverged;
  int iterations = 0;
  int restarts = 0;
  Circle circle;  // normalized frame; meaningful when converged
  std::optional<int> digits;
  double error = 0.0;
};

struct RunRecord {
  int run = 0;
  std::vector<MethodRun> methods;  // parallel to Campaign::methods
  bool scored = false;
};

struct MethodStats {
  Method method = Method::new_fit;
  int runs = 0;
  int converged = 0;
  int diverged = 0;
  int line_fallback = 0;
  int max_iters = 0;
  long long iteration_sum = 0;  // over converged runs
  int restarts = 0;
  std::array<int, 17> k_histogram{};
  int scored = 0;
  double seconds = 0.0;

  double divergence_pct() const;
  double mean_iterations() const;
  std::optional<int> worst_digits() const;
};

struct CampaignReport {
  Campaign campaign;
  std::vector<MethodStats> stats;
  int scored_runs = 0;
  int oracle_failures = 0;
  std::vector<RunRecord> records;

  const MethodStats& stats_for(Method m) const;
};

CampaignReport run_campaign(const Campaign& c);

nlohmann::json to_json(const CampaignReport& r);
/// One row per method: method,k0..k16.
void write_histogram_csv(std::ostream& out, const CampaignReport& r);

struct SweepRow {
  double distance = 0.0;
  double value_standard = 0.0;
  double value_big_circle = 0.0;
  double value_reference = 0.0;  // double-double
  int digits_standard = 0;
  int digits_big_circle = 0;
};

/// Accuracy of both objective formulas at centers p = D * direction.
/// Without a direction the minor principal axis of the data is used.
std::vector<SweepRow> evaluator_sweep(const NormalizedPointSet& data,
                                      const std::vector<double>& distances,
                                      std::optional<Vector2d> direction = std::nullopt);

/// Log-spaced distances from d_min to d_max inclusive.
std::vector<double> log_space(double d_min, double d_max, int steps);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace circlefit
