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

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <random>

#include "emtk/error.hpp"
#include "emtk/io.hpp"
#include "emtk/pipeline.hpp"

namespace emtk {

double speedup(double t1, double tp) {
  if (!(t1 > 0) || !(tp > 0)) {
    throw std::invalid_argument(fmt::format("speedup needs positive times, got {} and {}", t1, tp));
  }
  return t1 / tp;
}

std::string format_ratio(double ratio) {
  // The small nudge keeps exact decimal halves such as 42.575 (stored as
  // 42.57499999...) rounding up.
  const double scaled = std::abs(ratio) * 100.0;
  const auto hundredths = static_cast<long long>(std::floor(scaled + 0.5 + scaled * 1e-12));
  return fmt::format("{}{}.{:02}", ratio < 0 ? "-" : "", hundredths / 100, hundredths % 100);
}

double parse_duration(std::string_view text) {
  const auto fail = [&] { return FormatError(fmt::format("malformed duration '{}'", text), 0); };
  std::string_view rest = trim(text);
  if (rest.empty()) throw fail();
  constexpr std::array<std::pair<char, double>, 3> kUnits = {{{'h', 3600}, {'m', 60}, {'s', 1}}};
  std::size_t next_unit = 0;
  double total = 0;
  while (!rest.empty()) {
    std::size_t digits = 0;
    while (digits < rest.size() && rest[digits] >= '0' && rest[digits] <= '9') ++digits;
    if (digits == 0 || digits == rest.size()) throw fail();
    const std::uint64_t value = parse_uint(rest.substr(0, digits));
    const char unit = rest[digits];
    std::size_t u = next_unit;
    while (u < kUnits.size() && kUnits[u].first != unit) ++u;
    if (u == kUnits.size()) throw fail();
    total += static_cast<double>(value) * kUnits[u].second;
    next_unit = u + 1;
    rest = rest.substr(digits + 1);
    if (!rest.empty()) {
      if (rest.front() != ' ') throw fail();
      rest = trim(rest);
    }
  }
  return total;
}

std::string format_duration(double seconds) {
  if (seconds < 0) throw std::invalid_argument("negative duration");
  auto s = static_cast<std::uint64_t>(std::llround(seconds));
  const std::uint64_t h = s / 3600;
  const std::uint64_t m = s % 3600 / 60;
  s %= 60;
  if (h > 0) return fmt::format("{}h {}m {}s", h, m, s);
  if (m > 0) return fmt::format("{}m {}s", m, s);
  return fmt::format("{}s", s);
}

namespace {

struct Transcript {
  std::string text;
  double seconds = 0;
};

std::string transcript_line(std::string_view id, const SequencedResult<std::string>& r) {
  return fmt::format("{}\t{}\n", id, r.ok() ? *r.value : "ERROR " + r.error);
}

Transcript sequential_run(std::span<const Document> corpus, const BenchTask& task) {
  Transcript t;
  std::size_t i = 0;
  std::vector<Document> items(corpus.begin(), corpus.end());
  RunStats stats = sequential_baseline(
      source_from(items), task.classify,
      [&](SequencedResult<std::string>&& r) { t.text += transcript_line(corpus[i++].id, r); });
  t.seconds = stats.seconds.total;
  return t;
}

Transcript parallel_run(const std::vector<Document>& corpus, const BenchTask& task,
                        std::size_t workers, std::size_t batch_size) {
  Transcript t;
  PipelineConfig config;
  config.workers = workers;
  config.batch_size = batch_size;
  RunStats stats = run_pipeline(
      source_from(corpus), task.classify,
      [&](SequencedResult<std::string>&& r) { t.text += transcript_line(corpus[r.seq].id, r); },
      config);
  t.seconds = stats.seconds.total;
  return t;
}

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

void require_equal(const std::string& expected, const std::string& actual, std::size_t workers) {
  if (expected == actual) return;
  auto e = split(expected, '\n');
  auto a = split(actual, '\n');
  std::size_t line = 0;
  while (line < e.size() && line < a.size() && e[line] == a[line]) ++line;
  throw EquivalenceError(fmt::format(
      "transcript with {} workers differs from the sequential one at line {}:\n  sequential: {}\n  "
      "parallel:   {}",
      workers, line + 1, line < e.size() ? e[line] : "<end>", line < a.size() ? a[line] : "<end>"));
}

}  // namespace

std::vector<BenchmarkResult> run_benchmark(std::span<const Document> corpus, const BenchTask& task,
                                           const BenchOptions& options) {
  if (corpus.empty()) throw DataError("benchmark corpus is empty");
  if (options.repetitions == 0) throw std::invalid_argument("repetitions must be at least 1");
  for (std::size_t p : options.worker_counts) {
    if (p == 0) throw std::invalid_argument("worker counts must be at least 1");
  }
  const std::vector<Document> items(corpus.begin(), corpus.end());

  sequential_run(corpus, task);  // warm-up
  std::vector<double> times;
  std::string reference;
  for (std::size_t r = 0; r < options.repetitions; ++r) {
    Transcript t = sequential_run(corpus, task);
    if (r == 0) {
      reference = std::move(t.text);
    } else {
      require_equal(reference, t.text, 1);
    }
    times.push_back(t.seconds);
  }
  const double t1 = std::max(median(times), 1e-9);

  std::vector<BenchmarkResult> results;
  for (std::size_t p : options.worker_counts) {
    BenchmarkResult result{task.name, t1, t1, p, 1.0, false};
    if (p == 1) {
      // The pipeline at one worker must still agree with the baseline.
      require_equal(reference, parallel_run(items, task, 1, options.batch_size).text, 1);
    } else {
      parallel_run(items, task, p, options.batch_size);  // warm-up
      times.clear();
      for (std::size_t r = 0; r < options.repetitions; ++r) {
        Transcript t = parallel_run(items, task, p, options.batch_size);
        require_equal(reference, t.text, p);
        times.push_back(t.seconds);
      }
      result.tp = std::max(median(times), 1e-9);
      result.speedup = speedup(t1, result.tp);
    }
    result.outputs_equal = true;
    results.push_back(result);
  }
  return results;
}

std::string render_bench_table(std::span<const BenchmarkResult> results) {
  std::string out = fmt::format("{:<12} {:>8} {:>12} {:>12} {:>8}\n", "task", "workers", "time",
                                "seconds", "speedup");
  for (const auto& r : results) {
    out += fmt::format("{:<12} {:>8} {:>12} {:>12.6f} {:>8}\n", r.task, r.workers,
                       format_duration(r.tp), r.tp, format_ratio(r.speedup));
  }
  return out;
}

std::string render_bench_csv(std::span<const BenchmarkResult> results) {
  std::string out = "task,workers,seconds,speedup,outputs_equal\n";
  for (const auto& r : results) {
    out += fmt::format("{},{},{},{},{}\n", r.task, r.workers, format_double(r.tp),
                       format_ratio(r.speedup), r.outputs_equal ? "true" : "false");
  }
  return out;
}

std::vector<Document> synthetic_corpus(std::size_t size, std::uint64_t seed) {
  static constexpr std::array<std::string_view, 12> kPositive = {
      "great", "thanks", "works", "awesome", "perfect", "helpful",
      "clean", "nice",   "glad",  "solved",  "elegant", "fast"};
  static constexpr std::array<std::string_view, 12> kNegative = {
      "broken", "crash", "error",   "slow",     "ugly",  "terrible",
      "bug",    "fails", "useless", "annoying", "wrong", "horrible"};
  static constexpr std::array<std::string_view, 24> kFiller = {
      "the",    "build",  "module",  "function", "returns", "value",   "when",   "config",
      "server", "test",   "branch",  "commit",   "merge",   "library", "update", "version",
      "call",   "thread", "request", "query",    "cache",   "file",    "parser", "index"};
  static constexpr std::array<std::string_view, 3> kLabels = {"positive", "negative", "neutral"};

  std::mt19937_64 rng(seed);
  const auto pick = [&](auto& words) { return words[rng() % words.size()]; };
  std::vector<Document> docs;
  docs.reserve(size);
  for (std::size_t i = 0; i < size; ++i) {
    const std::size_t cls = i % 3;
    const std::size_t length = 8 + rng() % 17;
    const std::size_t polar = cls == 2 ? 0 : 2 + rng() % 3;
    std::vector<std::string_view> words;
    for (std::size_t w = 0; w < length; ++w) words.push_back(pick(kFiller));
    for (std::size_t k = 0; k < polar; ++k) {
      words[rng() % words.size()] = cls == 0 ? pick(kPositive) : pick(kNegative);
    }
    std::string text;
    for (std::size_t w = 0; w < words.size(); ++w) {
      if (w > 0) text += (w % 9 == 0) ? ". " : " ";
      text += words[w];
    }
    text += '.';
    docs.push_back(Document{fmt::format("syn-{:06}", i + 1), std::move(text), std::string(kLabels[cls])});
  }
  return docs;
}

}  // namespace emtk
