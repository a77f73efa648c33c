// Copyright 2026 The emtk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "emtk/bench.hpp"

#include <atomic>
#include <random>
#include <set>

#include "doctest.h"
#include "emtk/error.hpp"
#include "emtk/io.hpp"

using namespace emtk;

TEST_CASE("speedups of the published timings") {
  CHECK(format_ratio(speedup(parse_duration("56m 46s"), parse_duration("1m 20s"))) == "42.58");
  CHECK(format_ratio(speedup(parse_duration("1h 4m 41s"), parse_duration("33m 3s"))) == "1.96");
  CHECK(format_ratio(speedup(parse_duration("1h 4m 41s"), parse_duration("18m 53s"))) == "3.43");
  // Jira row: the formula value, not the printed one.
  CHECK(format_ratio(speedup(parse_duration("1h 49m 59s"), parse_duration("2m 24s"))) == "45.83");
}

TEST_CASE("ratio formatting") {
  CHECK(format_ratio(1.0) == "1.00");
  CHECK(format_ratio(0.005) == "0.01");
  CHECK(format_ratio(2.344999) == "2.34");
  CHECK(format_ratio(42.575) == "42.58");
  CHECK(format_ratio(100) == "100.00");
}

TEST_CASE("speedup is reciprocal") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> t(0.001, 5000);
  for (int i = 0; i < 200; ++i) {
    const double a = t(rng), b = t(rng);
    CHECK(speedup(a, b) * speedup(b, a) == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(speedup(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(speedup(1, -1), std::invalid_argument);
}

TEST_CASE("durations") {
  CHECK(parse_duration("1h 4m 41s") == 3881);
  CHECK(parse_duration("29m") == 1740);
  CHECK(parse_duration("21s") == 21);
  CHECK(parse_duration("2h") == 7200);
  CHECK(parse_duration("1h 5s") == 3605);
  for (const char* bad : {"", "4m 1h", "1x", "12", "m", "1m1s", "1s 2s"}) {
    CHECK_THROWS_AS(parse_duration(bad), FormatError);
  }
  for (double s : {0.0, 1.0, 59.0, 60.0, 61.0, 3600.0, 3881.0, 86399.0}) {
    CHECK(parse_duration(format_duration(s)) == s);
  }
  CHECK(format_duration(3406) == "56m 46s");
  CHECK(format_duration(0) == "0s");
}

TEST_CASE("synthetic corpus is seeded") {
  const auto a = synthetic_corpus(50, 9);
  const auto b = synthetic_corpus(50, 9);
  REQUIRE(a.size() == 50);
  std::set<std::string> ids;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].text == b[i].text);
    ids.insert(a[i].id);
  }
  CHECK(ids.size() == 50);
  CHECK(a[0].id == "syn-000001");
  CHECK(a[0].gold == "positive");
  CHECK(a[2].gold == "neutral");
  CHECK(synthetic_corpus(50, 10)[0].text != a[0].text);
}

TEST_CASE("benchmark at one worker") {
  const auto docs = synthetic_corpus(120, 1);
  BenchTask task{"len", [](const Document& d) { return std::to_string(d.text.size()); }};
  BenchOptions options;
  options.worker_counts = {1, 2};
  options.repetitions = 1;
  const auto results = run_benchmark(docs, task, options);
  REQUIRE(results.size() == 2);
  CHECK(results[0].workers == 1);
  CHECK(format_ratio(results[0].speedup) == "1.00");
  CHECK(results[0].outputs_equal);
  CHECK(results[1].outputs_equal);
  CHECK(results[1].speedup > 0);

  const std::string csv = render_bench_csv(results);
  CHECK(csv.rfind("task,workers,seconds,speedup,outputs_equal\n", 0) == 0);
  CHECK(split(csv, '\n').size() >= 3);
  CHECK(render_bench_table(results).find("speedup") != std::string::npos);
}

TEST_CASE("benchmark rejects divergent output") {
  const auto docs = synthetic_corpus(60, 1);
  auto counter = std::make_shared<std::atomic<int>>(0);
  BenchTask task{"drift", [counter](const Document&) { return std::to_string((*counter)++); }};
  BenchOptions options;
  options.repetitions = 1;
  CHECK_THROWS_AS(run_benchmark(docs, task, options), EquivalenceError);
}

TEST_CASE("benchmark argument errors") {
  BenchTask task{"id", [](const Document& d) { return d.id; }};
  CHECK_THROWS_AS(run_benchmark({}, task, BenchOptions{}), DataError);
  const auto docs = synthetic_corpus(3, 1);
  BenchOptions zero;
  zero.worker_counts = {0};
  CHECK_THROWS_AS(run_benchmark(docs, task, zero), std::invalid_argument);
}
