// noisyq: run noisy-query experiments and write CSV or JSON reports.
//
// Exit codes: 0 success, 2 invalid parameters, 3 a gate failed under --assert.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "noisyq/boolfn.hpp"
#include "noisyq/harness.hpp"
#include "noisyq/noise.hpp"
#include "noisyq/ust.hpp"

using namespace noisyq;

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitAssert = 3;

/// "a/b" or a decimal; decimals become a reduced fraction over 10^9.
Ratio parse_ratio(const std::string& text) {
  try {
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
      std::size_t used_num = 0, used_den = 0;
      const std::string num = text.substr(0, slash), den = text.substr(slash + 1);
      const Ratio r{std::stoll(num, &used_num), std::stoll(den, &used_den)};
      if (used_num != num.size() || used_den != den.size() || r.den <= 0) throw InvalidArgument("");
      return r;
    }
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size() || !std::isfinite(value)) throw InvalidArgument("");
    constexpr std::int64_t kScale = 1000000000;
    const auto num = static_cast<std::int64_t>(std::llround(value * static_cast<double>(kScale)));
    const std::int64_t g = std::gcd(num, kScale);
    return Ratio{num / (g == 0 ? 1 : g), kScale / (g == 0 ? 1 : g)};
  } catch (const std::logic_error&) {
    throw InvalidArgument("--beta expects a fraction like 1/3 or a decimal, got '" + text + "'");
  }
}

std::vector<std::int64_t> parse_grid(const std::string& text) {
  std::vector<std::int64_t> sizes;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      std::size_t used = 0;
      sizes.push_back(std::stoll(item, &used));
      if (used != item.size()) throw InvalidArgument("");
    } catch (const std::logic_error&) {
      throw InvalidArgument("--grid expects comma-separated sizes, got '" + text + "'");
    }
  }
  if (sizes.empty()) throw InvalidArgument("--grid is empty");
  return sizes;
}

void print_summary(const ExperimentReport& r) {
  const ExperimentSpec& s = r.spec;
  const bool walk = s.kind == ExperimentKind::walk_laws;
  std::printf("%s %s=%lld trials=%llu seed=%llu\n", std::string(to_string(s.kind)).c_str(), walk ? "x" : "n",
              static_cast<long long>(walk ? s.x : s.n), static_cast<unsigned long long>(s.trials),
              static_cast<unsigned long long>(s.seed));
  switch (s.kind) {
    case ExperimentKind::ust_stats:
      std::printf("  chain violations %llu, mean |B| %.4g (sqrt n = %.4g)\n",
                  static_cast<unsigned long long>(r.errors), r.mean_queries, r.theory_queries);
      break;
    case ExperimentKind::influence:
      std::printf("  residuals above tolerance %llu, mean I_q %.6g (n/2 = %.4g)\n",
                  static_cast<unsigned long long>(r.errors), r.mean_queries, r.theory_queries);
      break;
    case ExperimentKind::walk_laws:
      std::printf("  hit frequency %.6f [%.6f, %.6f], mean first passage %.6g (theory %.6g)\n", r.error_rate,
                  r.ci.low, r.ci.high, r.mean_queries, r.theory_queries);
      break;
    default:
      std::printf("  errors %llu (rate %.5f, 95%% CI [%.5f, %.5f])\n", static_cast<unsigned long long>(r.errors),
                  r.error_rate, r.ci.low, r.ci.high);
      std::printf("  queries mean %.6g sd %.6g, theory %.6g, ratio %.4f\n", r.mean_queries, r.stddev_queries,
                  r.theory_queries, r.ratio);
      break;
  }
  for (const auto& [key, value] : r.extras) std::printf("  %s %.6g\n", key.c_str(), value);
  std::printf("  wall time %.3f s\n", r.wall_time_s);
}

void write_reports(const std::vector<ExperimentReport>& reports, const std::string& path, const std::string& format) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot open '" + path + "' for writing");
  if (format == "json") {
    out << to_json(reports) << "\n";
  } else {
    out << csv_header() << "\n";
    for (const auto& r : reports) out << to_csv_row(r) << "\n";
  }
}

int describe_table(const std::string& path, double q) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read truth table '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const TruthTable f = parse_hex(buffer.str());
  const DyadicRational total = total_influence(f);
  std::printf("arity %d, I(f) = %llu/2^%d = %.12g, I_q(f) = %.12g at q = %g\n", f.arity(),
              static_cast<unsigned long long>(total.numerator), total.exponent, total.value(),
              q_biased_total_influence(f, q), q);
  for (int label : f.labels()) {
    std::printf("  x%d: Inf = %.12g, Inf_q = %.12g, residual %.3g\n", label, influence(f, label).value(),
                q_biased_influence(f, label, q), restriction_identity_residual(f, label, q));
  }
  return 0;
}

int emit_instance(const ExperimentSpec& spec, const std::string& path) {
  if (spec.n < 3) throw InvalidArgument("--emit-instance needs n >= 3");
  Rng rng(spec.seed, {0, 0});
  const HardInstance instance = sample_hard_instance(static_cast<int>(spec.n), rng);
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot open '" + path + "' for writing");
  write_hard_instance(out, instance);
  std::printf("wrote %s instance on %d vertices to %s\n", instance.connected ? "connected" : "disconnected",
              instance.n, path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulate noisy-query algorithms and report error rates and query costs"};
  app.require_subcommand(1);

  ExperimentSpec spec;
  std::int64_t ones = 0;
  std::string beta_text = "1/3";
  std::string grid_text;
  std::string out_path;
  std::string format = "csv";
  std::string table_path;
  std::string instance_path;
  bool assert_gates = false;

  const std::vector<std::pair<ExperimentKind, std::string>> commands = {
      {ExperimentKind::threshold, "Threshold-Count: is |a| >= k?"},
      {ExperimentKind::counting, "Exact counting, one-sided"},
      {ExperimentKind::counting2, "Exact counting with the orientation presample"},
      {ExperimentKind::connectivity, "Naive connectivity on hard instances"},
      {ExperimentKind::st_connectivity, "Naive s-t connectivity on hard instances"},
      {ExperimentKind::ust_stats, "Balanced-edge statistics of uniform spanning trees"},
      {ExperimentKind::influence, "Influence identities on random Boolean functions"},
      {ExperimentKind::walk_laws, "Gambler's-ruin hitting and first-passage laws"},
  };
  std::vector<CLI::App*> subs;
  CLI::Option* ones_opt = nullptr;
  std::vector<CLI::Option*> ones_opts;
  for (const auto& [kind, help] : commands) {
    CLI::App* sub = app.add_subcommand(std::string(to_string(kind)), help);
    sub->add_option("--n", spec.n, "Input size (bits, vertices or arity)")->capture_default_str();
    sub->add_option("--k", spec.k, "Threshold k")->capture_default_str();
    sub->add_option("--p", spec.p, "Flip probability in (0, 1/2)")->capture_default_str();
    sub->add_option("--delta", spec.delta, "Target error probability")->capture_default_str();
    sub->add_option("--trials", spec.trials, "Independent trials (walks for walk-laws)")->capture_default_str();
    sub->add_option("--seed", spec.seed, "Master seed")->capture_default_str();
    ones_opts.push_back(sub->add_option("--ones", ones, "Hamming weight |a| of the hidden input"));
    sub->add_option("--beta", beta_text, "Balance threshold, e.g. 1/3")->capture_default_str();
    sub->add_option("--q", spec.q, "Bias of the product measure")->capture_default_str();
    sub->add_option("--x", spec.x, "walk-laws target level")->capture_default_str();
    sub->add_option("--out", out_path, "Write the report to this path");
    sub->add_option("--format", format, "Report format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    sub->add_flag("--paper-faithful", spec.paper_faithful, "Use the n^0.99 presample at error n^-100");
    sub->add_option("--jobs", spec.jobs, "Worker threads")->capture_default_str();
    sub->add_flag("--assert", assert_gates, "Exit 3 when an acceptance gate fails");
    if (kind == ExperimentKind::ust_stats) {
      sub->add_option("--grid", grid_text, "Comma-separated sizes; reports log-log slopes");
    }
    if (kind == ExperimentKind::influence) {
      sub->add_option("--table", table_path, "Describe one hex truth table instead of sampling");
    }
    if (kind == ExperimentKind::connectivity || kind == ExperimentKind::st_connectivity) {
      sub->add_option("--emit-instance", instance_path, "Write one sampled hard instance and exit");
    }
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (subs[i]->parsed()) {
        spec.kind = commands[i].first;
        ones_opt = ones_opts[i];
      }
    }
    if (ones_opt != nullptr && ones_opt->count() > 0) spec.ones = ones;
    spec.beta = parse_ratio(beta_text);

    if (!table_path.empty()) return describe_table(table_path, spec.q);
    if (!instance_path.empty()) return emit_instance(spec, instance_path);

    std::vector<ExperimentReport> reports;
    if (!grid_text.empty()) {
      std::vector<double> ns, medians, s_medians;
      for (std::int64_t n : parse_grid(grid_text)) {
        ExperimentSpec row = spec;
        row.n = n;
        reports.push_back(run_experiment(row));
        ns.push_back(static_cast<double>(n));
        for (const auto& [key, value] : reports.back().extras) {
          if (key == "median_balanced") medians.push_back(value);
          if (key == "median_s_sum") s_medians.push_back(value);
        }
      }
      for (const auto& r : reports) print_summary(r);
      if (ns.size() >= 2) {
        std::printf("log-log slope of median |B|: %.4f, of median sum s: %.4f\n", loglog_slope(ns, medians),
                    loglog_slope(ns, s_medians));
      }
    } else {
      reports.push_back(run_experiment(spec));
      print_summary(reports.back());
    }
    if (!out_path.empty()) write_reports(reports, out_path, format);

    if (assert_gates) {
      bool failed = false;
      for (const auto& r : reports) {
        for (const auto& msg : check_gates(r)) {
          std::fprintf(stderr, "gate failed: %s\n", msg.c_str());
          failed = true;
        }
      }
      if (failed) return kExitAssert;
    }
    return 0;
  } catch (const InvalidArgument& e) {
    std::fprintf(stderr, "invalid parameters: %s\n", e.what());
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
