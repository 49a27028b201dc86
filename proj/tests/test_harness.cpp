#include <cmath>
#include <string>
#include <vector>

#include "json.hpp"

#include "doctest.h"
#include "noisyq/harness.hpp"
#include "noisyq/noise.hpp"

using namespace noisyq;

TEST_CASE("theory bound examples") {
  CHECK(theory_bound(BoundKind::threshold, 10000, 100, 0.01, 0.25) ==
        doctest::Approx(167672.26194315).epsilon(1e-10));
  const double dkl = NoiseModel(0.2).dkl();
  CHECK(theory_bound(BoundKind::counting, 300, 0, std::exp(-1.0), 0.2) == doctest::Approx(300 / dkl));
  for (std::int64_t k = 1; k <= 20; ++k) {
    CHECK(theory_bound(BoundKind::threshold, 20, k, 0.05, 0.3) ==
          theory_bound(BoundKind::threshold, 20, 21 - k, 0.05, 0.3));
  }
  CHECK(theory_bound(BoundKind::check_bit, 1, 0, 0.01, 0.25) == doctest::Approx(std::log(100.0) / NoiseModel(0.25).dkl()));
  CHECK_THROWS_AS(theory_bound(BoundKind::threshold, 10, 11, 0.1, 0.2), InvalidArgument);
}

TEST_CASE("theory bound monotonicity") {
  for (BoundKind kind : {BoundKind::threshold, BoundKind::counting, BoundKind::connectivity}) {
    double previous = 0.0;
    for (std::int64_t n = 10; n <= 1000; n *= 2) {
      const double b = theory_bound(kind, n, 5, 0.05, 0.2);
      CHECK(b >= previous);
      previous = b;
    }
    previous = INFINITY;
    for (double delta : {0.001, 0.01, 0.1, 0.5}) {
      const double b = theory_bound(kind, 100, 5, delta, 0.2);
      CHECK(b <= previous);
      previous = b;
    }
  }
  double previous = 0.0;
  for (std::int64_t k = 1; k <= 51; ++k) {
    const double b = theory_bound(BoundKind::threshold, 101, k, 0.05, 0.2);
    CHECK(b >= previous);
    previous = b;
  }
}

TEST_CASE("validation rejects degenerate specs") {
  ExperimentSpec spec;
  spec.trials = 0;
  CHECK_THROWS_AS(validate(spec), InvalidArgument);
  spec.trials = 1;
  spec.k = 0;
  CHECK_THROWS_AS(validate(spec), InvalidArgument);
  spec.k = 1;
  spec.p = 0.5;
  CHECK_THROWS_AS(validate(spec), InvalidArgument);
  spec.p = 0.2;
  spec.jobs = 0;
  CHECK_THROWS_AS(run_experiment(spec), InvalidArgument);
  CHECK(parse_experiment_kind("st-connectivity") == ExperimentKind::st_connectivity);
  CHECK_THROWS_AS(parse_experiment_kind("sorting"), InvalidArgument);
}

TEST_CASE("reports are internally consistent and schedule independent") {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::threshold;
  spec.n = 200;
  spec.k = 20;
  spec.p = 0.25;
  spec.delta = 0.1;
  spec.trials = 60;
  spec.seed = 5;
  const auto serial = run_experiment(spec);
  spec.jobs = 4;
  const auto parallel = run_experiment(spec);
  CHECK(to_csv_row(serial) == to_csv_row(parallel));
  CHECK(serial.error_rate == static_cast<double>(serial.errors) / 60.0);
  CHECK(serial.ci.low <= serial.error_rate);
  CHECK(serial.ci.high >= serial.error_rate);
  CHECK(serial.ratio == doctest::Approx(serial.mean_queries / serial.theory_queries));
  CHECK(serial.ratio > 0.0);
}

TEST_CASE("every experiment kind runs and echoes its parameters") {
  for (auto kind : {ExperimentKind::threshold, ExperimentKind::counting, ExperimentKind::counting2,
                    ExperimentKind::connectivity, ExperimentKind::st_connectivity, ExperimentKind::ust_stats,
                    ExperimentKind::influence, ExperimentKind::walk_laws}) {
    ExperimentSpec spec;
    spec.kind = kind;
    spec.n = kind == ExperimentKind::influence ? 6 : 20;
    spec.k = 3;
    spec.ones = kind == ExperimentKind::threshold ? std::nullopt : std::optional<std::int64_t>{2};
    spec.trials = kind == ExperimentKind::walk_laws ? 20000 : 8;
    spec.x = 2;
    spec.seed = 77;
    const auto report = run_experiment(spec);
    const auto row = to_csv_row(report);
    CHECK(row.rfind(std::string(to_string(kind)) + ",", 0) == 0);
    CHECK(row.substr(row.rfind(',') + 1) == "77");
    CHECK(check_gates(report).empty());
    const auto json = nlohmann::json::parse(to_json({report}));
    CHECK(json[0]["experiment"] == std::string(to_string(kind)));
    CHECK(json[0]["seed"] == 77);
  }
}

TEST_CASE("csv header has the fixed column order") {
  CHECK(csv_header() ==
        "experiment,n,k,p,delta,beta,q,trials,errors,error_rate,ci_low,ci_high,mean_queries,stddev_queries,"
        "theory_queries,ratio,seed");
  ExperimentSpec spec;
  const auto report = make_report(spec, 0, 10, 5.0, 1.0, 0.0);
  int commas = 0;
  for (char c : to_csv_row(report)) commas += c == ',';
  CHECK(commas == 16);
  CHECK(report.ratio == 0.0);
}

TEST_CASE("gates flag an excessive error rate") {
  ExperimentSpec spec;
  spec.delta = 0.01;
  const auto bad = make_report(spec, 10, 100, 1.0, 0.0, 1.0);
  CHECK_FALSE(check_gates(bad).empty());
  const auto good = make_report(spec, 0, 100, 1.0, 0.0, 1.0);
  CHECK(check_gates(good).empty());
}
