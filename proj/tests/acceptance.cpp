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

// Acceptance checks. Prints one PASS, FAIL or SKIP line per criterion and
// exits nonzero if any criterion fails.

#include <fmt/format.h>

#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "emtk/bench.hpp"
#include "emtk/cli.hpp"
#include "emtk/corpus.hpp"
#include "emtk/error.hpp"
#include "emtk/io.hpp"
#include "emtk/learner.hpp"
#include "emtk/pipeline.hpp"
#include "emtk/solver.hpp"
#include "emtk/textproc.hpp"
#include "emtk/training.hpp"
#include "oracles.hpp"

using namespace emtk;
namespace fs = std::filesystem;

namespace {

constexpr double kTfidfRelTol = 1e-9;
constexpr double kGradientTol = 1e-6;
constexpr double kMetricTol = 1e-12;
constexpr double kMinMacroF = 0.99;
constexpr double kMinSpeedup4 = 1.5;
constexpr double kMinSpeedup8 = 2.5;

enum class Verdict { pass, fail, skip };

struct Outcome {
  Verdict verdict;
  std::string detail;
};

Outcome pass(std::string detail) { return {Verdict::pass, std::move(detail)}; }
Outcome fail(std::string detail) { return {Verdict::fail, std::move(detail)}; }
Outcome skip(std::string detail) { return {Verdict::skip, std::move(detail)}; }

fs::path scratch(std::string_view name) {
  fs::path dir = fs::temp_directory_path() / "emtk_acceptance" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

const PolarityClassifier& bundled_classifier() {
  static const PolarityClassifier clf = [] {
    auto gold = parse_corpus(read_file(default_data_dir() / "polarity" / "gold.csv"), Delimiter::semicolon, true);
    PolarityOptions options;
    options.features.mode = FeatureMode::lexicon;
    return train_polarity(gold, bundled_sentiment_lexicon(default_data_dir()), std::nullopt, options).classifier;
  }();
  return clf;
}

std::string classify_label(const Document& d) { return bundled_classifier().classify(d).label; }

// 1. Speedup arithmetic.
Outcome speedup_arithmetic() {
  struct Case {
    double t1, tp;
    const char* expected;
  };
  const Case cases[] = {{3406, 80, "42.58"}, {3881, 1983, "1.96"}, {3881, 1133, "3.43"}};
  std::string got;
  bool ok = true;
  for (const auto& c : cases) {
    std::string r = format_ratio(speedup(c.t1, c.tp));
    got += (got.empty() ? "" : " ") + r;
    ok = ok && r == c.expected;
  }
  return ok ? pass(got) : fail("got " + got + ", expected 42.58 1.96 3.43");
}

// 2. Parallel speedup on a compute-bound task.
Outcome parallel_speedup() {
  const unsigned cores = std::thread::hardware_concurrency();
  if (cores < 4) return skip(fmt::format("needs at least 4 cores, this machine reports {}", cores));
  const auto corpus = synthetic_corpus(5000, 42);
  BenchTask task{"polarity", classify_label};
  BenchOptions options;
  options.worker_counts = {4};
  if (cores >= 8) options.worker_counts.push_back(8);
  options.repetitions = 3;
  std::vector<BenchmarkResult> results;
  try {
    results = run_benchmark(corpus, task, options);
  } catch (const EquivalenceError& e) {
    return fail(e.what());
  }
  std::string detail;
  bool ok = true;
  for (const auto& r : results) {
    const double floor = r.workers == 4 ? kMinSpeedup4 : kMinSpeedup8;
    detail += fmt::format("S({})={} ", r.workers, format_ratio(r.speedup));
    ok = ok && r.outputs_equal && r.speedup >= floor;
  }
  if (cores < 8) detail += fmt::format("(8-worker check skipped: {} cores)", cores);
  return ok ? pass(detail) : fail(detail);
}

// 3. Determinism across worker counts and batch sizes.
Outcome determinism() {
  const auto corpus = synthetic_corpus(1000, 7);
  auto run = [&](std::size_t workers, std::size_t batch) {
    std::string out;
    PipelineConfig config;
    config.workers = workers;
    config.batch_size = batch;
    std::uint64_t expected_seq = 0;
    bool ordered = true;
    run_pipeline(
        source_from(corpus), classify_label,
        [&](SequencedResult<std::string>&& r) {
          ordered = ordered && r.seq == expected_seq++;
          out += corpus[r.seq].id + "\t" + (r.ok() ? *r.value : "ERROR") + "\n";
        },
        config);
    return ordered ? out : std::string("<out of order>");
  };
  const std::string reference = run(1, 64);
  for (std::size_t w : {2, 4, 8}) {
    if (run(w, 64) != reference) return fail(fmt::format("transcript differs at {} workers", w));
  }
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 100; ++i) {
    const std::size_t workers = 1 + rng() % 8;
    const std::size_t batch = 1 + rng() % 256;
    if (run(workers, batch) != reference) {
      return fail(fmt::format("property run {} differs (workers {}, batch {})", i, workers, batch));
    }
  }
  return pass("workers {1,2,4,8} and 100 randomized runs identical");
}

// 4. tf-idf against the brute-force oracle.
Outcome tfidf_oracle() {
  std::mt19937_64 rng(4);
  double worst = 0;
  std::size_t values = 0;
  for (int round = 0; round < 25; ++round) {
    auto plain = oracle::random_plain_corpus(rng, 30, 12);
    std::vector<Document> corpus;
    for (std::size_t i = 0; i < plain.size(); ++i) corpus.push_back({std::to_string(i), plain[i].text(), {}});
    const std::size_t min_df = 1 + rng() % 2;
    NgramModel model = build_ngram_model(corpus, min_df);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      auto expected = oracle::tfidf(plain, i, min_df);
      auto actual = tfidf_vector(corpus[i], model);
      if (actual.size() != expected.size()) {
        return fail(fmt::format("corpus {} doc {}: {} features, oracle has {}", round, i, actual.size(),
                                expected.size()));
      }
      for (const auto& [name, value] : expected) {
        const double rel = std::abs(actual.get(name) - value) / std::abs(value);
        worst = std::max(worst, rel);
        ++values;
        if (!(rel <= kTfidfRelTol)) return fail(fmt::format("corpus {} doc {} feature {}", round, i, name));
      }
    }
  }
  return pass(fmt::format("{} values, max relative error {:.1e}", values, worst));
}

// 5. Emotion to polarity over every subset.
Outcome polarity_mapping() {
  for (unsigned mask = 0; mask < 64; ++mask) {
    const EmotionSet set = EmotionSet::from_mask(static_cast<std::uint8_t>(mask));
    const bool pos = set.contains(Emotion::love) || set.contains(Emotion::joy);
    const bool neg = set.contains(Emotion::anger) || set.contains(Emotion::fear) || set.contains(Emotion::sadness);
    PolarityOutcome expected = PolarityOutcome::neutral;
    if (set.contains(Emotion::surprise) || (pos && neg)) {
      expected = PolarityOutcome::discarded;
    } else if (pos) {
      expected = PolarityOutcome::positive;
    } else if (neg) {
      expected = PolarityOutcome::negative;
    }
    if (emotions_to_polarity(set) != expected) return fail(fmt::format("subset mask {:#04x}", mask));
  }
  return pass("64 subsets");
}

// 6. Stack Overflow percentages.
Outcome dataset_percentages() {
  const auto pct = reference_percentages(stack_overflow_reference());
  const int expected[] = {25, 10, 1, 18, 5, 2};
  std::string got;
  bool ok = true;
  for (std::size_t i = 0; i < kEmotionCount; ++i) {
    got += (i ? "/" : "") + (pct[i] ? std::to_string(*pct[i]) : "NA");
    ok = ok && pct[i] == expected[i];
  }
  return ok ? pass(got) : fail("got " + got);
}

// 7. Learner sanity.
Outcome learner_sanity() {
  std::vector<Document> corpus;
  for (const auto& t : oracle::separable_polarity_corpus(300, 1)) corpus.push_back({t.id, t.text, t.label});
  PolarityOptions options;
  options.features.mode = FeatureMode::keyword;
  PolarityTraining trained =
      train_polarity(corpus, bundled_sentiment_lexicon(default_data_dir()), std::nullopt, options);
  const double f = trained.report.macro.f1;

  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal(0.0, 1.0);
  Problem p;
  p.dim = 5;
  for (int r = 0; r < 20; ++r) {
    SparseRow row;
    for (std::uint32_t j = 0; j < 5; ++j) {
      row.index.push_back(j);
      row.value.push_back(normal(rng));
    }
    p.rows.push_back(std::move(row));
    p.labels.push_back(rng() % 2 ? 1.0 : -1.0);
  }
  std::vector<double> w(5);
  for (double& x : w) x = 0.5 * normal(rng);
  const double cost = 1.0;
  const double h = 1e-5;
  auto g = l2_primal_gradient(p, Loss::logistic, cost, w);
  double worst = 0;
  for (std::size_t j = 0; j < 5; ++j) {
    auto up = w;
    auto down = w;
    up[j] += h;
    down[j] -= h;
    const double fd = (primal_objective(p, Loss::logistic, Regularizer::l2, cost, up) -
                       primal_objective(p, Loss::logistic, Regularizer::l2, cost, down)) /
                      (2 * h);
    worst = std::max(worst, std::abs(fd - g[j]));
  }
  const std::string detail = fmt::format("macro-F {:.4f}, gradient max error {:.1e}", f, worst);
  return f >= kMinMacroF && worst <= kGradientTol ? pass(detail) : fail(detail);
}

// 8. Training tree through the command line, twice.
Outcome training_tree() {
  const std::string input = (default_data_dir() / "emotions" / "sample.csv").string();
  std::map<std::string, std::string> runs[2];
  for (int i = 0; i < 2; ++i) {
    const fs::path out = scratch(fmt::format("tree{}", i));
    std::ostringstream sout;
    std::ostringstream serr;
    const std::vector<std::string> args = {"emotions", "train", "-i", input, "-d", "sc", "-e", "love",
                                           "--seed", "42", "--out", out.string()};
    if (run_cli(args, sout, serr) != kExitOk) return fail("emotions train failed: " + serr.str());
    const fs::path root = out / "training_sample.csv_love";
    for (const auto& e : fs::recursive_directory_iterator(root)) {
      const std::string rel = fs::relative(e.path(), root).generic_string();
      runs[i][rel + (e.is_directory() ? "/" : "")] = e.is_regular_file() ? read_file(e.path()) : "";
    }
  }
  std::map<std::string, std::string> expected = {
      {"n-grams/", ""}, {"n-grams/UnigramsList.txt", ""}, {"n-grams/BigramsList.txt", ""},
      {"idfs/", ""}, {"idfs/UnigramsIdf.txt", ""}, {"idfs/BigramsIdf.txt", ""},
      {"idfs/EmotionLexicon.txt", ""}, {"idfs/EmotionWordsIdf.txt", ""}, {"feature-love.csv", ""},
      {"liblinear/", ""}};
  for (std::string regime : {"DownSampling", "NoDownSampling"}) {
    const std::string dir = "liblinear/" + regime + "/";
    expected[dir] = "";
    expected[dir + "trainingSet.csv"] = "";
    expected[dir + "testSet.csv"] = "";
    for (int id = 0; id < 8; ++id) {
      expected[fmt::format("{}model_love_{}.model", dir, id)] = "";
      expected[fmt::format("{}performance_love_{}.txt", dir, id)] = "";
      expected[fmt::format("{}predictions_love_{}.csv", dir, id)] = "";
    }
  }
  for (const auto& [path, bytes] : runs[0]) {
    if (!expected.contains(path)) return fail("unexpected entry " + path);
  }
  for (const auto& [path, bytes] : expected) {
    if (!runs[0].contains(path)) return fail("missing entry " + path);
  }
  if (runs[0] != runs[1]) return fail("rerun differs");
  return pass(fmt::format("{} entries, rerun byte-identical", runs[0].size()));
}

// 9. Metric identities.
Outcome metric_identities() {
  std::mt19937_64 rng(9);
  for (int round = 0; round < 50; ++round) {
    const std::size_t k = 2 + rng() % 4;
    std::vector<std::string> classes;
    for (std::size_t c = 0; c < k; ++c) classes.push_back("c" + std::to_string(c));
    std::vector<std::vector<std::size_t>> m(k, std::vector<std::size_t>(k));
    std::vector<LabeledId> gold;
    std::vector<LabeledId> predicted;
    std::size_t n = 0;
    for (std::size_t g = 0; g < k; ++g) {
      for (std::size_t p = 0; p < k; ++p) {
        m[g][p] = rng() % 8;
        for (std::size_t i = 0; i < m[g][p]; ++i) {
          const std::string id = "d" + std::to_string(n++);
          gold.emplace_back(id, classes[g]);
          predicted.emplace_back(id, classes[p]);
        }
      }
    }
    std::shuffle(predicted.begin(), predicted.end(), rng);
    const PerformanceReport r = evaluate(predicted, gold, classes);
    const auto expected = oracle::prf(m);
    if (r.confusion != m) return fail(fmt::format("round {}: confusion matrix differs", round));
    if (r.total != n) return fail(fmt::format("round {}: total {} != {}", round, r.total, n));
    for (std::size_t c = 0; c < k; ++c) {
      const auto& got = r.per_class[c];
      std::size_t row = 0;
      for (std::size_t x : m[c]) row += x;
      const double f = got.precision + got.recall == 0
                           ? 0.0
                           : 2 * got.precision * got.recall / (got.precision + got.recall);
      if (got.support != row || std::abs(got.f1 - f) > kMetricTol ||
          std::abs(got.precision - expected[c].precision) > kMetricTol ||
          std::abs(got.recall - expected[c].recall) > kMetricTol) {
        return fail(fmt::format("round {} class {}", round, c));
      }
    }
  }
  return pass("50 matrices");
}

// 10. CSV round trip and BOM rejection.
Outcome csv_round_trip() {
  std::mt19937_64 rng(10);
  const std::vector<std::string> pieces = {"a", "Z", " ", ";", ",", "\"", "\n", "é", "x y", "\"\"", "\r\n"};
  auto field = [&] {
    std::string out;
    for (std::size_t i = 0, n = rng() % 7; i < n; ++i) out += pieces[rng() % pieces.size()];
    return out;
  };
  for (Delimiter d : {Delimiter::semicolon, Delimiter::comma}) {
    for (int round = 0; round < 200; ++round) {
      std::vector<Document> docs;
      for (std::size_t i = 0, n = 1 + rng() % 6; i < n; ++i) {
        docs.push_back({"id" + std::to_string(i) + field(), field(), field()});
      }
      docs.push_back({"delim", std::string("left") + static_cast<char>(d) + "right", "x"});
      const auto once = parse_corpus(serialize_corpus(docs, d, true), d, true);
      const auto twice = parse_corpus(serialize_corpus(once, d, true), d, true);
      if (once != docs || twice != docs) {
        return fail(fmt::format("round trip failed with delimiter '{}'", static_cast<char>(d)));
      }
    }
  }
  try {
    parse_corpus("\xEF\xBB\xBFid;label;text\n1;positive;ok\n", Delimiter::semicolon, true);
    return fail("BOM-prefixed input was accepted");
  } catch (const FormatError&) {
  }
  return pass("both delimiters, BOM rejected");
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"speedup arithmetic", speedup_arithmetic},
      {"parallel speedup", parallel_speedup},
      {"parallel determinism", determinism},
      {"tf-idf oracle", tfidf_oracle},
      {"emotion to polarity mapping", polarity_mapping},
      {"dataset percentages", dataset_percentages},
      {"learner sanity", learner_sanity},
      {"training tree", training_tree},
      {"metric identities", metric_identities},
      {"csv round trip", csv_round_trip}};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = fail(std::string("exception: ") + e.what());
    }
    const char* tag = o.verdict == Verdict::pass ? "PASS" : o.verdict == Verdict::fail ? "FAIL" : "SKIP";
    failures += o.verdict == Verdict::fail;
    fmt::print("{} {:>2} {}: {}\n", tag, i + 1, criteria[i].first, o.detail);
  }
  return failures == 0 ? 0 : 1;
}
