#include "noisyq/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <thread>

#include "json.hpp"

#include "noisyq/boolfn.hpp"
#include "noisyq/counting.hpp"
#include "noisyq/noise.hpp"
#include "noisyq/oracle.hpp"
#include "noisyq/walk.hpp"

namespace noisyq {
namespace {

constexpr std::pair<ExperimentKind, std::string_view> kKindNames[] = {
    {ExperimentKind::threshold, "threshold"},
    {ExperimentKind::counting, "counting"},
    {ExperimentKind::counting2, "counting2"},
    {ExperimentKind::connectivity, "connectivity"},
    {ExperimentKind::st_connectivity, "st-connectivity"},
    {ExperimentKind::ust_stats, "ust-stats"},
    {ExperimentKind::influence, "influence"},
    {ExperimentKind::walk_laws, "walk-laws"},
};

constexpr double kResidualTolerance = 1e-10;
constexpr double kWalkMeanTolerance = 0.02;

struct TrialRecord {
  bool error = false;
  std::uint64_t queries = 0;
  double value = 0.0;
  double value2 = 0.0;
};

std::vector<bool> planted_input(std::int64_t n, std::int64_t ones, Rng& rng) {
  std::vector<std::size_t> positions(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < positions.size(); ++i) positions[i] = i;
  std::vector<bool> hidden(static_cast<std::size_t>(n), false);
  // partial Fisher-Yates: the first `ones` slots become a uniform subset
  for (std::int64_t i = 0; i < ones; ++i) {
    const auto j = static_cast<std::size_t>(i) + static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(positions[static_cast<std::size_t>(i)], positions[j]);
    hidden[positions[static_cast<std::size_t>(i)]] = true;
  }
  return hidden;
}

bool uses_noise(ExperimentKind kind) {
  return kind != ExperimentKind::ust_stats && kind != ExperimentKind::influence;
}

TrialRecord run_trial(const ExperimentSpec& spec, std::uint64_t trial) {
  Rng instance_rng(spec.seed, {trial, 0});
  const Rng oracle_rng(spec.seed, {trial, 1});
  switch (spec.kind) {
    case ExperimentKind::threshold: {
      const std::int64_t ones = spec.ones ? *spec.ones : spec.k - static_cast<std::int64_t>(instance_rng.below(2));
      BitOracle oracle(planted_input(spec.n, ones, instance_rng), NoiseModel(spec.p), oracle_rng);
      const CountResult r = threshold_count(oracle, static_cast<std::size_t>(spec.k), spec.delta);
      const auto truth = static_cast<std::size_t>(std::min(ones, spec.k));
      return {r.value != truth, r.queries, static_cast<double>(r.value), 0.0};
    }
    case ExperimentKind::counting:
    case ExperimentKind::counting2: {
      const std::int64_t ones = spec.ones.value_or(0);
      BitOracle oracle(planted_input(spec.n, ones, instance_rng), NoiseModel(spec.p), oracle_rng);
      CountResult r;
      if (spec.kind == ExperimentKind::counting) {
        r = counting_one_sided(oracle, spec.delta);
      } else {
        Rng presample_rng(spec.seed, {trial, 2});
        const auto n = static_cast<std::size_t>(spec.n);
        const auto options = spec.paper_faithful ? CountingWrapperOptions::paper_faithful(n)
                                                 : CountingWrapperOptions::desk_scale(n);
        r = counting_two_sided(oracle, spec.delta, options, presample_rng);
      }
      return {r.value != static_cast<std::size_t>(ones), r.queries, static_cast<double>(r.value), 0.0};
    }
    case ExperimentKind::connectivity: {
      const HardInstance instance = sample_hard_instance(static_cast<int>(spec.n), instance_rng);
      EdgeOracle oracle(instance.n, instance.graph, NoiseModel(spec.p), oracle_rng);
      const ConnectivityResult r = naive_connectivity(oracle, spec.delta);
      return {r.connected != instance.connected, r.queries, r.connected ? 1.0 : 0.0, 0.0};
    }
    case ExperimentKind::st_connectivity: {
      const StInstance st = sample_st_instance(static_cast<int>(spec.n), instance_rng);
      EdgeOracle oracle(st.instance.n, st.instance.graph, NoiseModel(spec.p), oracle_rng);
      const ConnectivityResult r = naive_st_connectivity(oracle, st.s, st.t, spec.delta);
      return {r.connected != st.st_connected, r.queries, r.connected ? 1.0 : 0.0, 0.0};
    }
    case ExperimentKind::ust_stats: {
      // same stream layout as structure_stats so rows agree with the library report
      Rng rng(spec.seed, {static_cast<std::uint64_t>(spec.n), trial});
      const LabeledTree tree = sample_ust(static_cast<int>(spec.n), rng);
      const BalancedEdgeReport report = balanced_edges(tree, spec.beta);
      const bool check_chain = spec.beta.num * 3 >= spec.beta.den;
      return {check_chain && !forms_chain(report.balanced_edges), 0,
              static_cast<double>(report.balanced_edges.size()), static_cast<double>(report.s_sum)};
    }
    case ExperimentKind::influence: {
      Rng rng(spec.seed, {trial});
      const TruthTable f = TruthTable::random(static_cast<int>(spec.n), rng);
      const int label = static_cast<int>(trial % static_cast<std::uint64_t>(spec.n));
      const double residual = restriction_identity_residual(f, label, spec.q);
      return {residual > kResidualTolerance, 0, q_biased_total_influence(f, spec.q), residual};
    }
    case ExperimentKind::walk_laws:
      break;
  }
  throw InvalidArgument("run_trial: unsupported experiment kind");
}

ExperimentReport run_walk_laws(const ExperimentSpec& spec) {
  const HittingTally hits = simulate_hitting(spec.p, spec.x, spec.trials, derive_seed(spec.seed, {0}));
  const PassageTally passage = simulate_first_passage(spec.p, spec.x, spec.trials, derive_seed(spec.seed, {1}));
  ExperimentReport report = make_report(spec, hits.hits, spec.trials, passage.mean(), passage.stddev(),
                                        expected_hitting_time(spec.p, spec.x));
  report.extras.emplace_back("theory_hit_probability", hitting_probability(spec.p, spec.x));
  report.extras.emplace_back("floor_level", static_cast<double>(hits.floor_level));
  return report;
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

std::string_view to_string(ExperimentKind kind) noexcept {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(std::string_view name) {
  for (const auto& [k, known] : kKindNames) {
    if (known == name) return k;
  }
  throw InvalidArgument("unknown experiment kind '" + std::string(name) + "'");
}

void validate(const ExperimentSpec& spec) {
  auto fail = [](const std::string& msg) { throw InvalidArgument(msg); };
  if (spec.trials == 0) fail("trials must be positive");
  if (spec.jobs < 1) fail("jobs must be positive");
  if (uses_noise(spec.kind)) NoiseModel{spec.p};
  const bool needs_delta = spec.kind != ExperimentKind::ust_stats && spec.kind != ExperimentKind::influence &&
                           spec.kind != ExperimentKind::walk_laws;
  if (needs_delta && !(spec.delta > 0.0 && spec.delta < 1.0)) fail("delta must lie strictly inside (0, 1)");
  switch (spec.kind) {
    case ExperimentKind::threshold:
      if (spec.n < 1) fail("n must be positive");
      if (spec.k < 1 || spec.k > spec.n) fail("k must lie in [1, n]");
      if (spec.ones && (*spec.ones < 0 || *spec.ones > spec.n)) fail("ones must lie in [0, n]");
      break;
    case ExperimentKind::counting:
    case ExperimentKind::counting2:
      if (spec.n < 1) fail("n must be positive");
      if (spec.ones && (*spec.ones < 0 || *spec.ones > spec.n)) fail("ones must lie in [0, n]");
      break;
    case ExperimentKind::connectivity:
    case ExperimentKind::st_connectivity:
      if (spec.n < 3 || spec.n > 5000) fail("connectivity experiments need 3 <= n <= 5000");
      break;
    case ExperimentKind::ust_stats:
      if (spec.n < 2) fail("ust-stats needs n >= 2");
      if (spec.beta.num <= 0 || spec.beta.den <= 0 || 2 * spec.beta.num >= spec.beta.den) {
        fail("beta must lie in (0, 1/2)");
      }
      break;
    case ExperimentKind::influence:
      if (spec.n < 1 || spec.n > TruthTable::kMaxArity) fail("influence arity must lie in [1, 20]");
      if (!(spec.q >= 0.0 && spec.q <= 1.0)) fail("q must lie in [0, 1]");
      break;
    case ExperimentKind::walk_laws:
      if (spec.x < 1) fail("walk-laws target x must be >= 1");
      break;
  }
}

double theory_bound(BoundKind kind, std::int64_t n, std::int64_t k, double delta, double p) {
  const NoiseModel noise(p);
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("theory_bound: delta must lie in (0, 1)");
  if (n < 1) throw InvalidArgument("theory_bound: n must be positive");
  const auto dn = static_cast<double>(n);
  switch (kind) {
    case BoundKind::threshold: {
      if (k < 1 || k > n) throw InvalidArgument("theory_bound: k must lie in [1, n]");
      const auto m = static_cast<double>(std::min(k, n - k + 1));
      return dn * std::log(m / delta) / noise.dkl();
    }
    case BoundKind::counting:
    case BoundKind::counting_one_sided: {
      if (k < 0 || k > n) throw InvalidArgument("theory_bound: |a| must lie in [0, n]");
      const std::int64_t weight = kind == BoundKind::counting ? std::min(k, n - k) : k;
      return dn * std::log(static_cast<double>(weight + 1) / delta) / noise.dkl();
    }
    case BoundKind::connectivity: {
      const double pairs = dn * (dn - 1.0) / 2.0;
      return pairs < 1.0 ? 0.0 : pairs * std::log(pairs / delta) / noise.dkl();
    }
    case BoundKind::check_bit:
      return std::log(1.0 / delta) / noise.dkl();
  }
  throw InvalidArgument("theory_bound: unknown kind");
}

ExperimentReport make_report(const ExperimentSpec& spec, std::uint64_t errors, std::uint64_t trials,
                             double mean_queries, double stddev_queries, double theory_queries) {
  ExperimentReport report;
  report.spec = spec;
  report.spec.trials = trials;
  report.errors = errors;
  report.error_rate = static_cast<double>(errors) / static_cast<double>(trials);
  report.ci = wilson_interval(errors, trials);
  report.mean_queries = mean_queries;
  report.stddev_queries = stddev_queries;
  report.theory_queries = theory_queries;
  report.ratio = theory_queries > 0.0 ? mean_queries / theory_queries : 0.0;
  return report;
}

ExperimentReport run_experiment(const ExperimentSpec& spec) {
  validate(spec);
  const auto started = std::chrono::steady_clock::now();
  ExperimentReport report;
  if (spec.kind == ExperimentKind::walk_laws) {
    report = run_walk_laws(spec);
  } else {
    std::vector<TrialRecord> records(static_cast<std::size_t>(spec.trials));
    std::vector<std::exception_ptr> failures(static_cast<std::size_t>(spec.trials));
    auto worker = [&](std::uint64_t first, std::uint64_t stride) {
      for (std::uint64_t t = first; t < spec.trials; t += stride) {
        try {
          records[static_cast<std::size_t>(t)] = run_trial(spec, t);
        } catch (...) {
          failures[static_cast<std::size_t>(t)] = std::current_exception();
          return;
        }
      }
    };
    const auto jobs = static_cast<std::uint64_t>(std::min<std::uint64_t>(static_cast<std::uint64_t>(spec.jobs), spec.trials));
    if (jobs <= 1) {
      worker(0, 1);
    } else {
      std::vector<std::jthread> threads;
      for (std::uint64_t w = 0; w < jobs; ++w) threads.emplace_back(worker, w, jobs);
    }
    for (std::size_t t = 0; t < failures.size(); ++t) {
      if (!failures[t]) continue;
      try {
        std::rethrow_exception(failures[t]);
      } catch (const std::exception& e) {
        throw std::runtime_error("trial " + std::to_string(t) + ": " + e.what());
      }
    }

    std::uint64_t errors = 0;
    std::uint64_t query_sum = 0;
    unsigned __int128 query_sq = 0;
    CompensatedSum value_sum, value_sq, value2_sum;
    std::vector<double> values, values2;
    for (const auto& r : records) {
      errors += r.error ? 1 : 0;
      query_sum += r.queries;
      query_sq += static_cast<unsigned __int128>(r.queries) * r.queries;
      value_sum.add(r.value);
      value_sq.add(r.value * r.value);
      value2_sum.add(r.value2);
      values.push_back(r.value);
      values2.push_back(r.value2);
    }
    const auto count = static_cast<double>(spec.trials);
    double mean = 0.0, stddev = 0.0;
    const bool real_valued = spec.kind == ExperimentKind::ust_stats || spec.kind == ExperimentKind::influence;
    if (real_valued) {
      mean = value_sum.value() / count;
      if (spec.trials > 1) {
        const double var = (value_sq.value() - count * mean * mean) / (count - 1.0);
        stddev = var > 0.0 ? std::sqrt(var) : 0.0;
      }
    } else {
      const auto n = static_cast<long double>(spec.trials);
      mean = static_cast<double>(static_cast<long double>(query_sum) / n);
      if (spec.trials > 1) {
        const auto s = static_cast<long double>(query_sum);
        const long double var = (static_cast<long double>(query_sq) - s * s / n) / (n - 1);
        stddev = var > 0 ? static_cast<double>(std::sqrt(var)) : 0.0;
      }
    }

    double theory = 0.0;
    switch (spec.kind) {
      case ExperimentKind::threshold:
        theory = theory_bound(BoundKind::threshold, spec.n, spec.k, spec.delta, spec.p);
        break;
      case ExperimentKind::counting:
        theory = theory_bound(BoundKind::counting_one_sided, spec.n, spec.ones.value_or(0), spec.delta, spec.p);
        break;
      case ExperimentKind::counting2:
        theory = theory_bound(BoundKind::counting, spec.n, spec.ones.value_or(0), spec.delta, spec.p);
        break;
      case ExperimentKind::connectivity:
      case ExperimentKind::st_connectivity:
        theory = theory_bound(BoundKind::connectivity, spec.n, 0, spec.delta, spec.p);
        break;
      case ExperimentKind::ust_stats:
        theory = std::sqrt(static_cast<double>(spec.n));
        break;
      case ExperimentKind::influence:
        // a uniformly random function has E[Inf_{q,i}] = 1/2 at every q
        theory = static_cast<double>(spec.n) / 2.0;
        break;
      case ExperimentKind::walk_laws:
        break;
    }
    report = make_report(spec, errors, spec.trials, mean, stddev, theory);
    if (spec.kind == ExperimentKind::ust_stats) {
      report.extras.emplace_back("median_balanced", median(values));
      report.extras.emplace_back("mean_s_sum", value2_sum.value() / count);
      report.extras.emplace_back("median_s_sum", median(values2));
    } else if (spec.kind == ExperimentKind::influence) {
      report.extras.emplace_back("max_residual", *std::max_element(values2.begin(), values2.end()));
    }
  }
  report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

std::string csv_header() {
  return "experiment,n,k,p,delta,beta,q,trials,errors,error_rate,ci_low,ci_high,mean_queries,"
         "stddev_queries,theory_queries,ratio,seed";
}

std::string to_csv_row(const ExperimentReport& r) {
  const ExperimentSpec& s = r.spec;
  std::string row;
  row += to_string(s.kind);
  row += ',' + std::to_string(s.n);
  row += ',' + std::to_string(s.kind == ExperimentKind::walk_laws ? s.x : s.k);
  row += ',' + format_real(s.p);
  row += ',' + format_real(s.delta);
  row += ',' + format_real(s.beta.value());
  row += ',' + format_real(s.q);
  row += ',' + std::to_string(s.trials);
  row += ',' + std::to_string(r.errors);
  row += ',' + format_real(r.error_rate);
  row += ',' + format_real(r.ci.low);
  row += ',' + format_real(r.ci.high);
  row += ',' + format_real(r.mean_queries);
  row += ',' + format_real(r.stddev_queries);
  row += ',' + format_real(r.theory_queries);
  row += ',' + format_real(r.ratio);
  row += ',' + std::to_string(s.seed);
  return row;
}

std::string to_json(const std::vector<ExperimentReport>& reports) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    const ExperimentSpec& s = r.spec;
    nlohmann::ordered_json row;
    row["experiment"] = to_string(s.kind);
    row["n"] = s.n;
    row["k"] = s.kind == ExperimentKind::walk_laws ? s.x : s.k;
    row["p"] = s.p;
    row["delta"] = s.delta;
    row["beta"] = s.beta.value();
    row["q"] = s.q;
    row["trials"] = s.trials;
    row["errors"] = r.errors;
    row["error_rate"] = r.error_rate;
    row["ci_low"] = r.ci.low;
    row["ci_high"] = r.ci.high;
    row["mean_queries"] = r.mean_queries;
    row["stddev_queries"] = r.stddev_queries;
    row["theory_queries"] = r.theory_queries;
    row["ratio"] = r.ratio;
    row["seed"] = s.seed;
    if (s.ones) row["ones"] = *s.ones;
    for (const auto& [key, value] : r.extras) row[key] = value;
    row["wall_time_s"] = r.wall_time_s;
    out.push_back(std::move(row));
  }
  return out.dump(2);
}

std::vector<std::string> check_gates(const ExperimentReport& r) {
  std::vector<std::string> violations;
  const ExperimentSpec& s = r.spec;
  switch (s.kind) {
    case ExperimentKind::threshold:
    case ExperimentKind::counting:
    case ExperimentKind::counting2:
    case ExperimentKind::connectivity:
    case ExperimentKind::st_connectivity: {
      const double gate = s.delta + 3.0 * binomial_sigma(s.delta, s.trials);
      if (r.error_rate > gate) {
        violations.push_back("error rate " + format_real(r.error_rate) + " exceeds delta + 3 sigma = " + format_real(gate));
      }
      break;
    }
    case ExperimentKind::walk_laws: {
      const double target = hitting_probability(s.p, s.x);
      const double band = 3.0 * binomial_sigma(target, s.trials);
      if (std::abs(r.error_rate - target) > band) {
        violations.push_back("hit frequency " + format_real(r.error_rate) + " outside " + format_real(target) +
                             " +- " + format_real(band));
      }
      if (std::abs(r.mean_queries - r.theory_queries) > kWalkMeanTolerance * r.theory_queries) {
        violations.push_back("mean first passage " + format_real(r.mean_queries) + " not within 2% of " +
                             format_real(r.theory_queries));
      }
      break;
    }
    case ExperimentKind::ust_stats:
      if (r.errors != 0) violations.push_back(std::to_string(r.errors) + " trees violate the chain property");
      break;
    case ExperimentKind::influence:
      if (r.errors != 0) violations.push_back(std::to_string(r.errors) + " functions exceed the residual tolerance");
      break;
  }
  return violations;
}

}  // namespace noisyq
