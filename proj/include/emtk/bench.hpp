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

#ifndef EMTK_BENCH_HPP
#define EMTK_BENCH_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "emtk/corpus.hpp"

namespace emtk {

/// t1 / tp; throws std::invalid_argument unless both are positive.
double speedup(double t1, double tp);

/// Ratio rounded half-up to two decimals, e.g. "42.58".
std::string format_ratio(double ratio);

/// "1h 4m 41s" -> 3881. Components are optional but ordered h, m, s;
/// throws FormatError on anything else.
double parse_duration(std::string_view text);

/// Canonical form: largest nonzero unit down to seconds ("0s" for zero).
/// Fractional seconds are rounded to the nearest whole second.
std::string format_duration(double seconds);

struct BenchmarkResult {
  std::string task;
  double t1 = 0;
  double tp = 0;
  std::size_t workers = 1;
  double speedup = 1;
  bool outputs_equal = false;
};

/// Thrown when a parallel transcript differs from the sequential one.
class EquivalenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BenchTask {
  std::string name;
  /// Pure per-document function; its output forms the transcript.
  std::function<std::string(const Document&)> classify;
};

struct BenchOptions {
  std::vector<std::size_t> worker_counts = {1};
  std::size_t repetitions = 3;
  std::size_t batch_size = 64;
};

/// Median wall time over `repetitions` runs (after one discarded warm-up)
/// of the sequential baseline (T1) and of the pipeline per worker count.
/// P = 1 reuses T1. Every timed run's transcript is compared with the
/// sequential one.
std::vector<BenchmarkResult> run_benchmark(std::span<const Document> corpus, const BenchTask& task,
                                           const BenchOptions& options);

/// Table with task, workers, time, seconds and speedup columns.
std::string render_bench_table(std::span<const BenchmarkResult> results);
/// `task,workers,seconds,speedup,outputs_equal` with a header row.
std::string render_bench_csv(std::span<const BenchmarkResult> results);

/// Seeded corpus of short developer-style sentences with polarity gold
/// labels (positive, negative, neutral in rotation).
std::vector<Document> synthetic_corpus(std::size_t size, std::uint64_t seed);

}  // namespace emtk

#endif  // EMTK_BENCH_HPP
