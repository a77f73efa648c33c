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

#include "emtk/cli.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>
#include <thread>

#include "emtk/bench.hpp"
#include "emtk/corpus.hpp"
#include "emtk/error.hpp"
#include "emtk/features.hpp"
#include "emtk/io.hpp"
#include "emtk/learner.hpp"
#include "emtk/pipeline.hpp"
#include "emtk/training.hpp"

namespace emtk {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kVersion = "1.0.0";

constexpr std::string_view kUsage = R"(usage:
  emtk polarity -F {A,S,L,K} -i input.csv -oc output.csv -vd N [-W dsm.txt] [-L]
                [-ul unigramList] [-bl bigramList] [-d {c,sc}] [-M modeldir] [--workers N]
  emtk polarity-train -i gold.csv -F {A,S,L,K} -vd N --out modeldir [-W dsm.txt]
                [-ul unigramList] [-bl bigramList] [-p] [-d {c,sc}] [--seed N]
  emtk emotions train -i file.csv [-p] -d {c,sc} [-g] -e emotion [--out dir] [--seed N]
                [--workers N]
  emtk emotions classify -i file.csv [-p] -d {c,sc} -e emotion [-m model -f idfs -o ngrams]
                [-l] [--out dir] [--workers N]
  emtk bench --task {polarity,emotions} (-i corpus.csv | --synthetic N) [--workers 1,2,4]
                [--reps N] [--csv file] [-d {c,sc}] [-e emotion]
  emtk --version | --help

emotions: love, joy, surprise, anger, fear, sadness
relative paths resolve against $EMTK_WORKSPACE when set
)";

struct FlagSpec {
  std::string_view name;
  bool takes_value;
};

class Flags {
 public:
  Flags(std::span<const std::string> args, std::initializer_list<FlagSpec> specs) {
    for (std::size_t i = 0; i < args.size(); ++i) {
      const std::string& arg = args[i];
      auto spec = std::find_if(specs.begin(), specs.end(), [&](const FlagSpec& s) { return s.name == arg; });
      if (spec == specs.end()) {
        throw UsageError(arg.starts_with('-') ? fmt::format("unknown flag '{}'", arg)
                                              : fmt::format("unexpected argument '{}'", arg));
      }
      if (values_.contains(arg)) throw UsageError(fmt::format("flag '{}' given twice", arg));
      if (!spec->takes_value) {
        values_[arg] = "";
        continue;
      }
      if (i + 1 >= args.size()) throw UsageError(fmt::format("flag '{}' needs a value", arg));
      values_[arg] = args[++i];
    }
  }

  bool has(std::string_view name) const { return values_.contains(std::string(name)); }
  std::optional<std::string> get(std::string_view name) const {
    auto it = values_.find(std::string(name));
    if (it == values_.end()) return std::nullopt;
    return it->second;
  }
  std::string require(std::string_view name) const {
    auto v = get(name);
    if (!v) throw UsageError(fmt::format("missing required flag '{}'", name));
    return *v;
  }

 private:
  std::map<std::string, std::string> values_;
};

std::uint64_t uint_flag(const Flags& flags, std::string_view name, std::uint64_t fallback) {
  auto v = flags.get(name);
  if (!v) return fallback;
  try {
    return parse_uint(*v);
  } catch (const FormatError&) {
    throw UsageError(fmt::format("flag '{}' needs a non-negative integer, got '{}'", name, *v));
  }
}

std::size_t workers_flag(const Flags& flags) {
  std::size_t n = uint_flag(flags, "--workers", PipelineConfig::default_workers());
  if (n == 0) throw UsageError("--workers must be at least 1");
  return n;
}

Delimiter delimiter_flag(const Flags& flags, bool required, Delimiter fallback) {
  auto v = required ? std::optional(flags.require("-d")) : flags.get("-d");
  if (!v) return fallback;
  auto d = parse_delimiter(*v);
  if (!d) throw UsageError(fmt::format("delimiter must be 'c' or 'sc', got '{}'", *v));
  return *d;
}

Emotion emotion_flag(const Flags& flags, std::optional<Emotion> fallback = std::nullopt) {
  auto v = fallback ? flags.get("-e") : std::optional(flags.require("-e"));
  if (!v) return *fallback;
  auto e = parse_emotion(*v);
  if (!e) {
    throw UsageError(fmt::format(
        "unknown emotion '{}'; valid emotions: love, joy, surprise, anger, fear, sadness", *v));
  }
  return *e;
}

FeatureMode mode_flag(const Flags& flags, std::optional<FeatureMode> fallback = std::nullopt) {
  auto v = fallback ? flags.get("-F") : std::optional(flags.require("-F"));
  if (!v) return *fallback;
  auto m = parse_feature_mode(*v);
  if (!m) throw UsageError(fmt::format("feature mode must be one of A, S, L, K, got '{}'", *v));
  return *m;
}

fs::path path_flag(const Flags& flags, std::string_view name) {
  return resolve_shared_path(flags.require(name), workspace_root());
}

std::optional<fs::path> optional_path_flag(const Flags& flags, std::string_view name) {
  auto v = flags.get(name);
  if (!v) return std::nullopt;
  return resolve_shared_path(*v, workspace_root());
}

fs::path output_parent(const Flags& flags) {
  auto out = optional_path_flag(flags, "--out");
  return out ? *out : resolve_shared_path(".", workspace_root()).lexically_normal();
}

/// Reads a classification input; without an explicit label flag, a third
/// column is detected and treated as a (then unused) label.
std::vector<Document> read_input(const fs::path& path, Delimiter delim, bool labeled) {
  std::string bytes = read_file(path);
  if (!labeled) labeled = detect_columns(bytes, delim) == 3;
  return parse_corpus(bytes, delim, labeled);
}

std::set<std::string, std::less<>> allow_list(const fs::path& path) {
  auto items = parse_ngram_list(read_file(path));
  std::set<std::string, std::less<>> out;
  for (auto& item : items) {
    // Entries are n-grams in token form so they match extracted features.
    std::string joined;
    for (const Token& t : tokenize(item)) joined += (joined.empty() ? "" : " ") + t.surface;
    if (!joined.empty()) out.insert(std::move(joined));
  }
  return out;
}

FeatureConfig feature_config(const Flags& flags) {
  FeatureConfig config;
  config.mode = mode_flag(flags);
  config.vector_size = uint_flag(flags, "-vd", 0);
  if (config.vector_size == 0) throw UsageError("-vd must be a positive integer");
  config.politeness_mood = flags.has("-p");
  if (auto p = optional_path_flag(flags, "-ul")) config.unigram_allow = allow_list(*p);
  if (auto p = optional_path_flag(flags, "-bl")) config.bigram_allow = allow_list(*p);
  return config;
}

std::vector<Document> bundled_polarity_gold() {
  return parse_corpus(read_file(default_data_dir() / "polarity" / "gold.csv"), Delimiter::semicolon, true);
}

std::vector<Document> bundled_emotion_corpus(Emotion emotion) {
  auto gold = parse_emotion_gold(read_file(default_data_dir() / "emotions" / "gold.csv"),
                                 Delimiter::semicolon, EmotionSchema::full);
  return project_emotion(gold, emotion);
}

PolarityClassifier default_polarity_classifier(const FeatureConfig& config,
                                               std::optional<WordSpace> space, std::uint64_t seed) {
  PolarityOptions options;
  options.features = config;
  options.seed = seed;
  return train_polarity(bundled_polarity_gold(), bundled_sentiment_lexicon(default_data_dir()),
                        std::move(space), options)
      .classifier;
}

std::optional<WordSpace> space_flag(const Flags& flags) {
  auto p = optional_path_flag(flags, "-W");
  if (!p) return std::nullopt;
  return load_wordspace(read_file(*p));
}

/// Classifies every document through the pipeline; results stay in input order.
template <typename Classifier>
std::vector<SequencedResult<Prediction>> classify_all(const std::vector<Document>& docs,
                                                      const Classifier& clf, std::size_t workers) {
  std::vector<SequencedResult<Prediction>> results;
  results.reserve(docs.size());
  PipelineConfig config;
  config.workers = workers;
  RunStats stats = run_pipeline(
      source_from(docs), [&](const Document& d) { return clf.classify(d); },
      [&](SequencedResult<Prediction>&& r) { results.push_back(std::move(r)); }, config);
  if (stats.source_error) throw DataError(*stats.source_error);
  return results;
}

std::size_t report_failures(const std::vector<Document>& docs,
                            const std::vector<SequencedResult<Prediction>>& results, std::ostream& err) {
  std::size_t failed = 0;
  for (const auto& r : results) {
    if (r.ok()) continue;
    ++failed;
    fmt::print(err, "error: document '{}': {}\n", docs[r.seq].id, r.error);
  }
  return failed;
}

template <typename Model>
void warn_unseen(const Model& model, const std::vector<FeatureVector>& vectors, std::ostream& err) {
  std::size_t docs = 0;
  std::size_t total = 0;
  for (const auto& x : vectors) {
    std::size_t n = model.unseen_features(x);
    total += n;
    docs += n > 0;
  }
  if (total > 0) {
    fmt::print(err, "warning: {} feature(s) in {} document(s) are unknown to the model and were ignored\n",
               total, docs);
  }
}

// --- polarity ----------------------------------------------------------------

int cmd_polarity(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  Flags flags(args, {{"-F", true}, {"-i", true}, {"-oc", true}, {"-vd", true}, {"-W", true},
                     {"-L", false}, {"-ul", true}, {"-bl", true}, {"-d", true}, {"-M", true},
                     {"--workers", true}, {"--seed", true}});
  FeatureConfig config = feature_config(flags);
  const fs::path input = path_flag(flags, "-i");
  const fs::path output = path_flag(flags, "-oc");
  const bool labeled = flags.has("-L");
  const Delimiter delim = delimiter_flag(flags, false, Delimiter::semicolon);
  const std::size_t workers = workers_flag(flags);

  std::vector<Document> docs = read_input(input, delim, labeled);
  PolarityClassifier clf = [&] {
    if (auto dir = optional_path_flag(flags, "-M")) {
      PolarityClassifier loaded = load_polarity_classifier(*dir);
      if (loaded.config.mode != config.mode || loaded.config.vector_size != config.vector_size) {
        throw ConfigError(fmt::format("model in {} was trained with -F {} -vd {}", dir->string(),
                                      static_cast<char>(loaded.config.mode), loaded.config.vector_size));
      }
      return loaded;
    }
    return default_polarity_classifier(config, space_flag(flags), uint_flag(flags, "--seed", 42));
  }();

  auto results = classify_all(docs, clf, workers);
  std::string csv = "id,predicted\n";
  for (const auto& r : results) {
    csv += fmt::format("{},{}\n", quote_field(docs[r.seq].id, ','), r.ok() ? r.value->label : "ERROR");
  }
  write_file(output, csv);
  std::size_t failed = report_failures(docs, results, err);

  if (labeled) {
    std::vector<LabeledId> predicted;
    std::vector<LabeledId> gold;
    for (const auto& r : results) {
      const Document& d = docs[r.seq];
      auto p = d.gold ? parse_polarity(*d.gold) : std::nullopt;
      if (!p) throw DataError(fmt::format("document '{}' has no polarity label", d.id));
      gold.emplace_back(d.id, std::string(to_string(*p)));
      predicted.emplace_back(d.id, r.ok() ? r.value->label : "ERROR");
    }
    PerformanceReport report = evaluate(predicted, gold, kPolarityClasses);
    fs::path perf = output.parent_path() / (output.stem().string() + "_performance.txt");
    write_file(perf, render_report(report));
    fmt::print(out, "performance written to {}\n", perf.string());
  }
  fmt::print(out, "{} predictions written to {}\n", results.size(), output.string());
  return failed == 0 ? kExitOk : kExitRuntime;
}

int cmd_polarity_train(std::span<const std::string> args, std::ostream& out, std::ostream&) {
  Flags flags(args, {{"-F", true}, {"-i", true}, {"-vd", true}, {"-W", true}, {"-ul", true},
                     {"-bl", true}, {"-p", false}, {"-d", true}, {"--out", true}, {"--seed", true}});
  PolarityOptions options;
  options.features = feature_config(flags);
  options.seed = uint_flag(flags, "--seed", 42);
  const fs::path input = path_flag(flags, "-i");
  const fs::path dir = path_flag(flags, "--out");
  const Delimiter delim = delimiter_flag(flags, false, Delimiter::semicolon);

  std::vector<Document> gold = parse_corpus(read_file(input), delim, true);
  PolarityTraining trained = train_polarity(gold, bundled_sentiment_lexicon(default_data_dir()),
                                            space_flag(flags), options);
  save_polarity_classifier(trained.classifier, dir);
  std::string performance = render_tuning(trained.tuning) + "\n" + render_report(trained.report);
  write_file(dir / "performance.txt", performance);
  fmt::print(out, "{}model written to {}\n", performance, dir.string());
  return kExitOk;
}

// --- emotions ----------------------------------------------------------------

int cmd_emotions_train(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  Flags flags(args, {{"-i", true}, {"-p", false}, {"-d", true}, {"-g", false}, {"-e", true},
                     {"--out", true}, {"--seed", true}, {"--workers", true}});
  const Emotion emotion = emotion_flag(flags);
  const fs::path input = path_flag(flags, "-i");
  const Delimiter delim = delimiter_flag(flags, true, Delimiter::semicolon);
  if (flags.has("-g")) fmt::print(err, "warning: -g has no documented meaning and is ignored\n");

  EmotionSuiteOptions options;
  options.politeness_mood = flags.has("-p");
  options.seed = uint_flag(flags, "--seed", 42);
  options.workers = workers_flag(flags);

  std::vector<Document> corpus = parse_corpus(read_file(input), delim, true);
  TrainArtifacts art = train_emotion_suite(corpus, input.filename().string(), emotion,
                                           bundled_emotion_lexicon(default_data_dir()),
                                           output_parent(flags), options);
  fmt::print(out, "training output written to {}\n", art.root.string());
  return kExitOk;
}

int cmd_emotions_classify(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  Flags flags(args, {{"-i", true}, {"-p", false}, {"-d", true}, {"-e", true}, {"-m", true},
                     {"-f", true}, {"-o", true}, {"-l", false}, {"--out", true}, {"--workers", true},
                     {"--seed", true}});
  const Emotion emotion = emotion_flag(flags);
  const fs::path input = path_flag(flags, "-i");
  const Delimiter delim = delimiter_flag(flags, true, Delimiter::semicolon);
  const bool politeness = flags.has("-p");
  const bool labeled = flags.has("-l");
  const int custom = flags.has("-m") + flags.has("-f") + flags.has("-o");
  if (custom != 0 && custom != 3) {
    throw UsageError("a custom model needs -m, -f (idfs folder) and -o (n-grams folder) together");
  }
  const std::size_t workers = workers_flag(flags);

  std::vector<Document> docs = read_input(input, delim, labeled);
  EmotionClassifier clf = [&] {
    if (custom == 3) {
      return load_emotion_classifier(path_flag(flags, "-m"), path_flag(flags, "-f"),
                                     path_flag(flags, "-o"), emotion, politeness);
    }
    EmotionSuiteOptions options;
    options.politeness_mood = politeness;
    options.seed = uint_flag(flags, "--seed", 42);
    return train_emotion_classifier(bundled_emotion_corpus(emotion), emotion,
                                    bundled_emotion_lexicon(default_data_dir()), options);
  }();

  std::vector<FeatureVector> vectors;
  for (const Document& d : docs) vectors.push_back(clf.features(d.text));
  warn_unseen(clf.model, vectors, err);

  auto results = classify_all(docs, clf, workers);
  const std::string ename(to_string(emotion));
  const fs::path dir =
      output_parent(flags) / fmt::format("classification_{}_{}", input.filename().string(), ename);
  std::string csv = "id;predicted\n";
  for (const auto& r : results) {
    csv += fmt::format("{};{}\n", quote_field(docs[r.seq].id, ';'), r.ok() ? r.value->label : "ERROR");
  }
  write_file(dir / fmt::format("predictions_{}.csv", ename), csv);
  std::size_t failed = report_failures(docs, results, err);

  if (labeled) {
    std::vector<LabeledId> predicted;
    std::vector<LabeledId> gold;
    for (const auto& r : results) {
      const Document& d = docs[r.seq];
      auto yes = d.gold ? parse_yes_no(*d.gold) : std::nullopt;
      if (!yes) throw DataError(fmt::format("document '{}' needs a YES/NO label", d.id));
      gold.emplace_back(d.id, std::string(*yes ? kYes : kNo));
      predicted.emplace_back(d.id, r.ok() ? r.value->label : "ERROR");
    }
    PerformanceReport report =
        evaluate(predicted, gold, std::vector<std::string>{std::string(kYes), std::string(kNo)});
    write_file(dir / fmt::format("performance_{}.txt", ename),
               fmt::format("emotion: {}\n\n{}", ename, render_report(report)));
  }
  fmt::print(out, "{} predictions written to {}\n", results.size(), dir.string());
  return failed == 0 ? kExitOk : kExitRuntime;
}

// --- bench -------------------------------------------------------------------

std::vector<std::size_t> worker_list(std::string_view text) {
  std::vector<std::size_t> out;
  for (std::string_view part : split(text, ',')) {
    try {
      out.push_back(parse_uint(trim(part)));
    } catch (const FormatError&) {
      throw UsageError(fmt::format("--workers expects a comma-separated list, got '{}'", text));
    }
    if (out.back() == 0) throw UsageError("worker counts must be at least 1");
  }
  return out;
}

int cmd_bench(std::span<const std::string> args, std::ostream& out, std::ostream&) {
  Flags flags(args, {{"--task", true}, {"-i", true}, {"--synthetic", true}, {"--workers", true},
                     {"--reps", true}, {"--csv", true}, {"-d", true}, {"-e", true},
                     {"-F", true}, {"-vd", true}, {"--seed", true}});
  const std::string task_name = flags.require("--task");
  if (task_name != "polarity" && task_name != "emotions") {
    throw UsageError(fmt::format("--task must be 'polarity' or 'emotions', got '{}'", task_name));
  }
  if (flags.has("-i") == flags.has("--synthetic")) {
    throw UsageError("bench needs exactly one of -i and --synthetic");
  }
  BenchOptions options;
  const std::size_t cores = PipelineConfig::default_workers();
  options.worker_counts = flags.has("--workers") ? worker_list(*flags.get("--workers"))
                                                 : std::vector<std::size_t>{1, cores};
  options.worker_counts.erase(std::unique(options.worker_counts.begin(), options.worker_counts.end()),
                              options.worker_counts.end());
  options.repetitions = uint_flag(flags, "--reps", 3);
  if (options.repetitions == 0) throw UsageError("--reps must be at least 1");
  const std::uint64_t seed = uint_flag(flags, "--seed", 42);

  std::vector<Document> corpus;
  if (flags.has("-i")) {
    corpus = read_input(path_flag(flags, "-i"), delimiter_flag(flags, false, Delimiter::semicolon), false);
  } else {
    std::size_t n = uint_flag(flags, "--synthetic", 0);
    if (n == 0) throw UsageError("--synthetic needs a positive document count");
    corpus = synthetic_corpus(n, seed);
  }

  BenchTask task;
  task.name = task_name;
  if (task_name == "polarity") {
    FeatureConfig config;
    config.mode = mode_flag(flags, FeatureMode::all);
    config.vector_size = uint_flag(flags, "-vd", 600);
    auto clf = std::make_shared<PolarityClassifier>(default_polarity_classifier(config, std::nullopt, seed));
    task.classify = [clf](const Document& d) { return clf->classify(d).label; };
  } else {
    const Emotion emotion = emotion_flag(flags, Emotion::love);
    EmotionSuiteOptions options_e;
    options_e.seed = seed;
    auto clf = std::make_shared<EmotionClassifier>(train_emotion_classifier(
        bundled_emotion_corpus(emotion), emotion, bundled_emotion_lexicon(default_data_dir()), options_e));
    task.classify = [clf](const Document& d) { return clf->classify(d).label; };
  }

  std::vector<BenchmarkResult> results = run_benchmark(corpus, task, options);
  fmt::print(out, "{} documents, {} repetition(s), {} core(s) detected\n{}", corpus.size(),
             options.repetitions, cores, render_bench_table(results));
  const fs::path csv = flags.has("--csv") ? path_flag(flags, "--csv")
                                          : resolve_shared_path(fmt::format("bench_{}.csv", task_name),
                                                                workspace_root());
  write_file(csv, render_bench_csv(results));
  fmt::print(out, "csv written to {}\n", csv.string());
  return kExitOk;
}

int dispatch(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  if (args.empty()) throw UsageError("missing command");
  const std::string& cmd = args[0];
  auto rest = args.subspan(1);
  if (cmd == "--help" || cmd == "-h") {
    fmt::print(out, "{}", kUsage);
    return kExitOk;
  }
  if (cmd == "--version") {
    fmt::print(out,
               "emtk {}\nDefault models are trained at run time on the bundled sample data in {},\n"
               "not on the original Stack Overflow or Jira gold standards.\n",
               kVersion, default_data_dir().string());
    return kExitOk;
  }
  if (cmd == "polarity") return cmd_polarity(rest, out, err);
  if (cmd == "polarity-train") return cmd_polarity_train(rest, out, err);
  if (cmd == "bench") return cmd_bench(rest, out, err);
  if (cmd == "emotions") {
    if (rest.empty()) throw UsageError("emotions needs 'train' or 'classify'");
    if (rest[0] == "train") return cmd_emotions_train(rest.subspan(1), out, err);
    if (rest[0] == "classify") return cmd_emotions_classify(rest.subspan(1), out, err);
    throw UsageError(fmt::format("unknown emotions command '{}'", rest[0]));
  }
  throw UsageError(fmt::format("unknown command '{}'", cmd));
}

}  // namespace

std::optional<fs::path> workspace_root() {
  const char* env = std::getenv("EMTK_WORKSPACE");
  if (!env || !*env) return std::nullopt;
  return fs::path(env);
}

fs::path resolve_shared_path(const fs::path& path, const std::optional<fs::path>& root) {
  if (path.is_absolute()) return path;
  if (!root) return fs::current_path() / path;
  const fs::path base = fs::absolute(*root).lexically_normal();
  fs::path joined = (base / path).lexically_normal();
  if (joined.has_parent_path() && joined.filename().empty()) joined = joined.parent_path();
  const fs::path rel = joined.lexically_relative(base);
  if (rel.empty() || *rel.begin() == "..") {
    throw ConfigError(fmt::format("path '{}' escapes the workspace root {}", path.string(), base.string()));
  }
  return joined;
}

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(args, out, err);
  } catch (const UsageError& e) {
    fmt::print(err, "usage error: {}\n\n{}", e.what(), kUsage);
    return kExitUsage;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitRuntime;
  }
}

}  // namespace emtk
