#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "noisyq/stats.hpp"
#include "noisyq/ust.hpp"

namespace noisyq {

enum class ExperimentKind {
  threshold,
  counting,
  counting2,
  connectivity,
  st_connectivity,
  ust_stats,
  influence,
  walk_laws,
};

std::string_view to_string(ExperimentKind kind) noexcept;
/// Accepts the CLI spellings ("st-connectivity", "walk-laws", ...).
ExperimentKind parse_experiment_kind(std::string_view name);

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::threshold;
  std::int64_t n = 1000;
  std::int64_t k = 1;
  double p = 0.25;
  double delta = 0.05;
  Ratio beta = beta_presets::third;
  double q = 0.5;
  std::uint64_t trials = 100;
  std::uint64_t seed = 1;
  /// Hamming weight of the hidden input; threshold trials default to the
  /// hard pair {k-1, k} chosen by a fair coin per trial.
  std::optional<std::int64_t> ones;
  /// walk-laws target level x.
  std::int64_t x = 1;
  bool paper_faithful = false;
  int jobs = 1;
};

/// Throws InvalidArgument describing the first out-of-range parameter.
void validate(const ExperimentSpec& spec);

struct ExperimentReport {
  ExperimentSpec spec;
  std::uint64_t errors = 0;
  double error_rate = 0.0;
  Interval ci;
  double mean_queries = 0.0;
  double stddev_queries = 0.0;
  double theory_queries = 0.0;
  double ratio = 0.0;
  double wall_time_s = 0.0;
  /// Kind-specific statistics; JSON only.
  std::vector<std::pair<std::string, double>> extras;
};

enum class BoundKind {
  threshold,           // n log(min{k, n-k+1}/delta) / D_KL
  counting,            // n log((min{k, n-k}+1)/delta) / D_KL, k = |a|
  counting_one_sided,  // n log((k+1)/delta) / D_KL, k = |a|
  connectivity,        // C(n,2) log(C(n,2)/delta) / D_KL
  check_bit,           // log(1/delta) / D_KL
};

double theory_bound(BoundKind kind, std::int64_t n, std::int64_t k, double delta, double p);

/// Runs spec.trials independent trials, trial i seeded from (seed, i), and
/// aggregates them in trial order; the result does not depend on spec.jobs.
ExperimentReport run_experiment(const ExperimentSpec& spec);

/// Builds a report from raw tallies (for suites that drive the library
/// directly rather than through run_experiment).
ExperimentReport make_report(const ExperimentSpec& spec, std::uint64_t errors, std::uint64_t trials,
                             double mean_queries, double stddev_queries, double theory_queries);

std::string csv_header();
std::string to_csv_row(const ExperimentReport& report);
/// JSON object with the CSV keys plus extras and wall_time_s.
std::string to_json(const std::vector<ExperimentReport>& reports);

/// Acceptance gates for --assert; returns one message per violated gate.
std::vector<std::string> check_gates(const ExperimentReport& report);

}  // namespace noisyq
