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

#include "emtk/training.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cstdlib>
#include <map>
#include <unordered_map>

#include "emtk/error.hpp"
#include "emtk/io.hpp"
#include "emtk/pipeline.hpp"
#include "emtk/solver.hpp"

namespace emtk {

namespace fs = std::filesystem;

fs::path default_data_dir() {
  if (const char* env = std::getenv("EMTK_DATA_DIR"); env && *env) return env;
#ifdef EMTK_DEFAULT_DATA_DIR
  return EMTK_DEFAULT_DATA_DIR;
#else
  return "data";
#endif
}

EmotionLexicon bundled_emotion_lexicon(const fs::path& data_dir) {
  return load_emotion_lexicon(read_file(data_dir / "lexicon" / "emotions.tsv"));
}

SentimentLexicon bundled_sentiment_lexicon(const fs::path& data_dir) {
  return load_sentiment_lexicon(read_file(data_dir / "lexicon" / "sentiment.tsv"));
}

namespace {

std::vector<bool> yes_flags(std::span<const Document> docs) {
  std::vector<bool> flags;
  flags.reserve(docs.size());
  for (const Document& d : docs) {
    std::optional<bool> yes = d.gold ? parse_yes_no(*d.gold) : std::nullopt;
    if (!yes) {
      throw DataError(fmt::format("document '{}' needs a YES/NO label", d.id));
    }
    flags.push_back(*yes);
  }
  return flags;
}

// Normalizes gold labels to YES/NO so split and downsampling see two classes.
std::vector<Document> normalize_yes_no(std::span<const Document> docs) {
  std::vector<bool> flags = yes_flags(docs);
  std::vector<Document> out(docs.begin(), docs.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i].gold = std::string(flags[i] ? kYes : kNo);
  return out;
}

std::string labeled_csv(std::span<const Document> docs) {
  return "id;label;text\n" + serialize_corpus(docs, Delimiter::semicolon, true);
}

std::string feature_table(std::span<const Document> docs, std::span<const FeatureVector> vectors,
                          std::span<const std::string> schema) {
  std::string out = "id;label";
  for (const auto& name : schema) {
    out += ';';
    out += quote_field(name, ';');
  }
  out += '\n';
  for (std::size_t i = 0; i < docs.size(); ++i) {
    out += quote_field(docs[i].id, ';');
    out += ';';
    out += docs[i].gold.value_or("");
    for (const auto& name : schema) {
      out += ';';
      out += format_double(vectors[i].get(name));
    }
    out += '\n';
  }
  return out;
}

struct SuiteJob {
  std::string regime;
  int solver_id;
  std::vector<std::size_t> train;  // corpus indices
};

struct SuiteOutput {
  std::string model;
  std::string performance;
  std::string predictions;
};

}  // namespace

std::string training_dir_name(std::string_view file_name, Emotion emotion) {
  return fmt::format("training_{}_{}", file_name, to_string(emotion));
}

unsigned EmotionClassifier::fragments() const {
  return kKeyword | kLexicon | (politeness_mood ? kPoliteness : 0u);
}

FeatureVector EmotionClassifier::features(std::string_view text) const {
  FeatureConfig config;
  config.politeness_mood = politeness_mood;
  FeatureResources res;
  res.ngrams = &ngrams;
  res.emotions = &lexicon;
  return assemble_fragments(text, fragments(), config, res);
}

Prediction EmotionClassifier::classify(const Document& doc) const {
  return model.predict(features(doc.text));
}

TrainArtifacts train_emotion_suite(std::span<const Document> input, std::string_view file_name,
                                   Emotion emotion, const EmotionLexicon& lexicon,
                                   const fs::path& parent, const EmotionSuiteOptions& options) {
  if (input.empty()) throw DataError("empty training corpus");
  const std::vector<Document> corpus = normalize_yes_no(input);
  const std::string ename(to_string(emotion));

  TrainArtifacts art;
  art.root = parent / training_dir_name(file_name, emotion);
  const fs::path staging = parent / (art.root.filename().string() + ".partial");
  fs::remove_all(staging);

  try {
    const fs::path ngrams_dir = staging / "n-grams";
    const fs::path idfs_dir = staging / "idfs";

    NgramModel ngrams = build_ngram_model(corpus, options.min_df);
    EmotionLexicon weighted = lexicon;
    weighted.idf = emotion_word_idf(lexicon, corpus);
    save_ngram_lists(ngrams, ngrams_dir);
    save_ngram_idfs(ngrams, idfs_dir);
    write_file(idfs_dir / kEmotionLexiconFile, save_emotion_lexicon(weighted));
    write_file(idfs_dir / kEmotionIdfFile, save_word_idf(*weighted.idf));

    EmotionClassifier extractor{emotion, options.politeness_mood, ngrams, weighted,
                                LinearModel({std::string(kYes), std::string(kNo)}, {}, {{}}, {0.0}, {})};
    FeatureConfig config;
    config.politeness_mood = options.politeness_mood;
    FeatureResources res;
    res.ngrams = &ngrams;
    res.emotions = &weighted;
    const std::vector<std::string> schema = feature_schema(extractor.fragments(), config, res);

    std::vector<FeatureVector> vectors;
    vectors.reserve(corpus.size());
    for (const Document& d : corpus) vectors.push_back(extractor.features(d.text));
    write_file(staging / fmt::format("feature-{}.csv", ename), feature_table(corpus, vectors, schema));

    std::unordered_map<std::string, std::size_t> index_of;
    for (std::size_t i = 0; i < corpus.size(); ++i) index_of.emplace(corpus[i].id, i);
    const auto indices = [&](std::span<const Document> part) {
      std::vector<std::size_t> out;
      for (const Document& d : part) out.push_back(index_of.at(d.id));
      return out;
    };

    const auto [train, test] = split_train_test(corpus, options.test_fraction, options.seed);
    const std::vector<std::string> classes = {std::string(kYes), std::string(kNo)};
    const std::vector<Document> balanced = downsample(train, classes, options.seed);
    const std::vector<std::size_t> test_idx = indices(test);

    std::vector<SuiteJob> jobs;
    const std::pair<std::string, const std::vector<Document>*> regimes[] = {
        {std::string(kDownSampling), &balanced}, {std::string(kNoDownSampling), &train}};
    for (const auto& [regime, part] : regimes) {
      const fs::path dir = staging / "liblinear" / regime;
      write_file(dir / "trainingSet.csv", labeled_csv(*part));
      write_file(dir / "testSet.csv", labeled_csv(test));
      for (int id = 0; id < kSolverCount; ++id) jobs.push_back(SuiteJob{regime, id, indices(*part)});
    }

    const std::string fingerprint = corpus_fingerprint(corpus);
    const auto work = [&](const SuiteJob& job) {
      std::vector<FeatureVector> xs;
      std::vector<bool> pos;
      for (std::size_t i : job.train) {
        xs.push_back(vectors[i]);
        pos.push_back(*corpus[i].gold == kYes);
      }
      std::unique_ptr<bool[]> flags(new bool[pos.size()]);
      std::copy(pos.begin(), pos.end(), flags.get());
      std::span<const bool> positive(flags.get(), pos.size());

      const SolverConfig& solver = solver_config(job.solver_id);
      SolverOptions sopts;
      sopts.seed = options.seed;
      TuneResult tuning = tune_cost(xs, positive, schema, solver, options.cost_grid, options.folds,
                                    options.seed, sopts);
      TrainOptions topts{sopts, fingerprint};
      LinearModel model = train_linear(xs, positive, schema, solver, tuning.best_cost, topts);

      std::vector<LabeledId> predicted;
      std::vector<LabeledId> gold;
      std::string predictions = "id;label;predicted\n";
      for (std::size_t i : test_idx) {
        Prediction p = model.predict(vectors[i]);
        predicted.emplace_back(corpus[i].id, p.label);
        gold.emplace_back(corpus[i].id, *corpus[i].gold);
        predictions += fmt::format("{};{};{}\n", quote_field(corpus[i].id, ';'), *corpus[i].gold, p.label);
      }
      PerformanceReport report = evaluate(predicted, gold, classes);
      report.best_cost = tuning.best_cost;

      std::string performance = fmt::format("emotion: {}\nsampling: {}\nsolver: {} ({})\n\n", ename,
                                            job.regime, job.solver_id, solver.description);
      performance += render_tuning(tuning);
      performance += '\n';
      performance += render_report(report);
      return SuiteOutput{save_model(model), std::move(performance), std::move(predictions)};
    };

    std::vector<std::string> failures;
    const auto sink = [&](SequencedResult<SuiteOutput>&& result) {
      const SuiteJob& job = jobs[result.seq];
      if (!result.ok()) {
        failures.push_back(fmt::format("{} solver {}: {}", job.regime, job.solver_id, result.error));
        return;
      }
      const fs::path dir = staging / "liblinear" / job.regime;
      write_file(dir / fmt::format("model_{}_{}.model", ename, job.solver_id), result.value->model);
      write_file(dir / fmt::format("performance_{}_{}.txt", ename, job.solver_id),
                 result.value->performance);
      write_file(dir / fmt::format("predictions_{}_{}.csv", ename, job.solver_id),
                 result.value->predictions);
    };
    PipelineConfig pconfig;
    pconfig.workers = std::max<std::size_t>(options.workers, 1);
    pconfig.batch_size = 1;
    run_pipeline(source_from(jobs), work, sink, pconfig);
    if (!failures.empty()) throw DataError("training failed: " + failures.front());

    fs::remove_all(art.root);
    fs::rename(staging, art.root);
  } catch (...) {
    std::error_code ec;
    fs::remove_all(staging, ec);
    throw;
  }

  art.ngrams_dir = art.root / "n-grams";
  art.idfs_dir = art.root / "idfs";
  art.feature_csv = art.root / fmt::format("feature-{}.csv", ename);
  for (std::string_view regime : {kDownSampling, kNoDownSampling}) {
    const fs::path dir = art.root / "liblinear" / regime;
    art.training_sets.push_back(dir / "trainingSet.csv");
    art.test_sets.push_back(dir / "testSet.csv");
    for (int id = 0; id < kSolverCount; ++id) {
      art.models.push_back(dir / fmt::format("model_{}_{}.model", ename, id));
      art.performance.push_back(dir / fmt::format("performance_{}_{}.txt", ename, id));
      art.predictions.push_back(dir / fmt::format("predictions_{}_{}.csv", ename, id));
    }
  }
  return art;
}

EmotionClassifier load_emotion_classifier(const fs::path& model_file, const fs::path& idfs_dir,
                                          const fs::path& ngrams_dir, Emotion emotion,
                                          bool politeness_mood) {
  LinearModel model = load_model(read_file(model_file));
  if (!model.binary()) throw ConfigError(fmt::format("{} is not a binary model", model_file.string()));
  EmotionLexicon lexicon = load_emotion_lexicon(read_file(idfs_dir / kEmotionLexiconFile));
  lexicon.idf = load_word_idf(read_file(idfs_dir / kEmotionIdfFile));
  return EmotionClassifier{emotion, politeness_mood, load_ngram_model(ngrams_dir, idfs_dir),
                           std::move(lexicon), std::move(model)};
}

EmotionClassifier train_emotion_classifier(std::span<const Document> input, Emotion emotion,
                                           const EmotionLexicon& lexicon,
                                           const EmotionSuiteOptions& options, int solver_id) {
  if (input.empty()) throw DataError("empty training corpus");
  const std::vector<Document> corpus = normalize_yes_no(input);
  EmotionLexicon weighted = lexicon;
  weighted.idf = emotion_word_idf(lexicon, corpus);
  EmotionClassifier out{emotion, options.politeness_mood, build_ngram_model(corpus, options.min_df),
                        std::move(weighted),
                        LinearModel({std::string(kYes), std::string(kNo)}, {}, {{}}, {0.0}, {})};

  FeatureConfig config;
  config.politeness_mood = options.politeness_mood;
  FeatureResources res;
  res.ngrams = &out.ngrams;
  res.emotions = &out.lexicon;
  const std::vector<std::string> schema = feature_schema(out.fragments(), config, res);

  std::vector<FeatureVector> xs;
  for (const Document& d : corpus) xs.push_back(out.features(d.text));
  std::vector<bool> pos = yes_flags(corpus);
  std::unique_ptr<bool[]> flags(new bool[pos.size()]);
  std::copy(pos.begin(), pos.end(), flags.get());
  std::span<const bool> positive(flags.get(), pos.size());

  const SolverConfig& solver = solver_config(solver_id);
  SolverOptions sopts;
  sopts.seed = options.seed;
  TuneResult tuning =
      tune_cost(xs, positive, schema, solver, options.cost_grid, options.folds, options.seed, sopts);
  out.model = train_linear(xs, positive, schema, solver, tuning.best_cost,
                           TrainOptions{sopts, corpus_fingerprint(corpus)});
  return out;
}

// --- Polarity ----------------------------------------------------------------

FeatureResources PolarityClassifier::resources() const {
  FeatureResources res;
  res.ngrams = &ngrams;
  res.sentiment = &sentiment;
  res.space = space ? &*space : nullptr;
  return res;
}

FeatureVector PolarityClassifier::features(std::string_view text) const {
  return assemble_fragments(text, fragments_for(config), config, resources());
}

Prediction PolarityClassifier::classify(const Document& doc) const {
  return model.predict(features(doc.text));
}

PolarityTraining train_polarity(std::span<const Document> input, const SentimentLexicon& sentiment,
                                std::optional<WordSpace> space, const PolarityOptions& options) {
  std::vector<Document> gold(input.begin(), input.end());
  std::array<std::size_t, 3> counts{};
  for (Document& d : gold) {
    std::optional<Polarity> p = d.gold ? parse_polarity(*d.gold) : std::nullopt;
    if (!p) {
      throw DataError(fmt::format("document '{}' has no polarity label", d.id));
    }
    d.gold = std::string(to_string(*p));
    ++counts[static_cast<std::size_t>(*p)];
  }
  for (Polarity p : {Polarity::positive, Polarity::negative, Polarity::neutral}) {
    if (counts[static_cast<std::size_t>(p)] == 0) {
      throw DataError(fmt::format("gold corpus has no '{}' document", to_string(p)));
    }
  }

  auto [train, test] = split_train_test(gold, options.test_fraction, options.seed);
  const unsigned fragments = fragments_for(options.features);
  if ((fragments & kSemantic) && !space) {
    space = build_wordspace(train, options.features.vector_size, options.window, options.seed);
  }

  PolarityClassifier clf{options.features, build_ngram_model(train, options.min_df), sentiment,
                         std::move(space), LinearModel(kPolarityClasses, {}, {{}, {}, {}}, {0, 0, 0}, {})};
  const FeatureResources res = clf.resources();
  const std::vector<std::string> schema = feature_schema(fragments, clf.config, res);

  std::vector<FeatureVector> xs;
  std::vector<std::string> labels;
  for (const Document& d : train) {
    xs.push_back(clf.features(d.text));
    labels.push_back(*d.gold);
  }

  const SolverConfig& solver = solver_config(options.solver_id);
  SolverOptions sopts;
  sopts.seed = options.seed;
  TuneResult tuning = tune_cost_multiclass(xs, labels, kPolarityClasses, schema, solver,
                                           options.cost_grid, options.folds, options.seed, sopts);
  clf.model = train_one_vs_rest(xs, labels, kPolarityClasses, schema, solver, tuning.best_cost,
                                TrainOptions{sopts, corpus_fingerprint(train)});

  std::vector<LabeledId> predicted;
  std::vector<LabeledId> expected;
  for (const Document& d : test) {
    predicted.emplace_back(d.id, clf.classify(d).label);
    expected.emplace_back(d.id, *d.gold);
  }
  PerformanceReport report = evaluate(predicted, expected, kPolarityClasses);
  report.best_cost = tuning.best_cost;
  return PolarityTraining{std::move(clf), std::move(report), std::move(tuning)};
}

namespace {

std::string join_lines(const std::set<std::string, std::less<>>& items) {
  std::string out;
  for (const auto& s : items) out += s + "\n";
  return out;
}

std::set<std::string, std::less<>> to_set(const std::vector<std::string>& items) {
  return {items.begin(), items.end()};
}

}  // namespace

void save_polarity_classifier(const PolarityClassifier& clf, const fs::path& dir) {
  fs::create_directories(dir);
  std::string config = fmt::format("mode\t{}\nvector_size\t{}\npoliteness_mood\t{}\n",
                                   static_cast<char>(clf.config.mode), clf.config.vector_size,
                                   clf.config.politeness_mood ? 1 : 0);
  write_file(dir / "config.txt", config);
  write_file(dir / "polarity.model", save_model(clf.model));
  write_file(dir / "sentiment.tsv", save_sentiment_lexicon(clf.sentiment));
  save_ngram_lists(clf.ngrams, dir / "n-grams");
  save_ngram_idfs(clf.ngrams, dir / "idfs");
  if (clf.config.unigram_allow) write_file(dir / "unigram_allow.txt", join_lines(*clf.config.unigram_allow));
  if (clf.config.bigram_allow) write_file(dir / "bigram_allow.txt", join_lines(*clf.config.bigram_allow));
  if (clf.space) write_file(dir / "dsm.txt", save_wordspace(*clf.space));
}

PolarityClassifier load_polarity_classifier(const fs::path& dir) {
  FeatureConfig config;
  const std::string config_text = read_file(dir / "config.txt");
  for (const auto& [number, line] : lines_of(config_text)) {
    auto parts = split(line, '\t');
    if (parts.size() != 2) throw FormatError("expected 'key<TAB>value' in config.txt", number);
    if (parts[0] == "mode") {
      auto mode = parse_feature_mode(parts[1]);
      if (!mode) throw FormatError(fmt::format("unknown feature mode '{}'", parts[1]), number);
      config.mode = *mode;
    } else if (parts[0] == "vector_size") {
      config.vector_size = parse_uint(parts[1]);
    } else if (parts[0] == "politeness_mood") {
      config.politeness_mood = parts[1] == "1";
    } else {
      throw FormatError(fmt::format("unknown key '{}' in config.txt", parts[0]), number);
    }
  }
  if (fs::exists(dir / "unigram_allow.txt")) {
    config.unigram_allow = to_set(parse_ngram_list(read_file(dir / "unigram_allow.txt")));
  }
  if (fs::exists(dir / "bigram_allow.txt")) {
    config.bigram_allow = to_set(parse_ngram_list(read_file(dir / "bigram_allow.txt")));
  }
  std::optional<WordSpace> space;
  if (fs::exists(dir / "dsm.txt")) space = load_wordspace(read_file(dir / "dsm.txt"));
  LinearModel model = load_model(read_file(dir / "polarity.model"));
  if (model.classes() != kPolarityClasses) {
    throw ConfigError(fmt::format("{} is not a polarity model", (dir / "polarity.model").string()));
  }
  PolarityClassifier clf{std::move(config), load_ngram_model(dir / "n-grams", dir / "idfs"),
                         load_sentiment_lexicon(read_file(dir / "sentiment.tsv")), std::move(space),
                         std::move(model)};
  check_resources(fragments_for(clf.config), clf.config, clf.resources());
  return clf;
}

}  // namespace emtk
