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

#include <algorithm>
#include <filesystem>
#include <set>

#include "doctest.h"
#include "emtk/bench.hpp"
#include "emtk/error.hpp"
#include "emtk/io.hpp"
#include "emtk/training.hpp"
#include "oracles.hpp"

using namespace emtk;
namespace fs = std::filesystem;

namespace {

fs::path scratch(std::string_view name) {
  fs::path dir = fs::temp_directory_path() / "emtk_training_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<Document> sample_corpus() {
  return parse_corpus(read_file(default_data_dir() / "emotions" / "sample.csv"), Delimiter::semicolon, true);
}

std::set<std::string> tree(const fs::path& root) {
  std::set<std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    out.insert(fs::relative(e.path(), root).generic_string() + (e.is_directory() ? "/" : ""));
  }
  return out;
}

std::set<std::string> expected_tree(std::string_view e) {
  std::set<std::string> out = {"n-grams/", "n-grams/UnigramsList.txt", "n-grams/BigramsList.txt",
                               "idfs/", "idfs/UnigramsIdf.txt", "idfs/BigramsIdf.txt",
                               "idfs/EmotionLexicon.txt", "idfs/EmotionWordsIdf.txt",
                               "feature-" + std::string(e) + ".csv", "liblinear/"};
  for (std::string regime : {"DownSampling", "NoDownSampling"}) {
    std::string dir = "liblinear/" + regime + "/";
    out.insert(dir);
    out.insert(dir + "trainingSet.csv");
    out.insert(dir + "testSet.csv");
    for (int id = 0; id < 8; ++id) {
      out.insert(dir + "model_" + std::string(e) + "_" + std::to_string(id) + ".model");
      out.insert(dir + "performance_" + std::string(e) + "_" + std::to_string(id) + ".txt");
      out.insert(dir + "predictions_" + std::string(e) + "_" + std::to_string(id) + ".csv");
    }
  }
  return out;
}

}  // namespace

TEST_CASE("emotion suite writes the documented tree, reproducibly") {
  const fs::path dir = scratch("suite");
  const auto corpus = sample_corpus();
  const auto lexicon = bundled_emotion_lexicon(default_data_dir());
  EmotionSuiteOptions options;
  TrainArtifacts art = train_emotion_suite(corpus, "sample.csv", Emotion::love, lexicon, dir, options);
  CHECK(art.root == dir / "training_sample.csv_love");
  CHECK(tree(art.root) == expected_tree("love"));
  CHECK(art.models.size() == 16);
  for (const auto& p : art.models) CHECK(fs::exists(p));

  std::map<std::string, std::string> first;
  for (const auto& e : fs::recursive_directory_iterator(art.root)) {
    if (e.is_regular_file()) first[e.path().string()] = read_file(e.path());
  }
  options.workers = 3;
  train_emotion_suite(corpus, "sample.csv", Emotion::love, lexicon, dir, options);
  for (const auto& [path, bytes] : first) CHECK(read_file(path) == bytes);

  const std::string features = read_file(art.feature_csv);
  const std::string header = features.substr(0, features.find('\n'));
  CHECK(header.find("pol:") == std::string::npos);
  CHECK(header.find("mood:") == std::string::npos);

  std::string perf = read_file(art.performance.front());
  CHECK(perf.find("best cost") != std::string::npos);
  CHECK(perf.find("confusion matrix") != std::string::npos);
  CHECK(perf.find("precision") != std::string::npos);
}

TEST_CASE("politeness columns appear only when enabled") {
  const fs::path dir = scratch("polite");
  EmotionSuiteOptions options;
  options.politeness_mood = true;
  TrainArtifacts art = train_emotion_suite(sample_corpus(), "sample.csv", Emotion::love,
                                           bundled_emotion_lexicon(default_data_dir()), dir, options);
  std::string csv = read_file(art.feature_csv);
  std::string header = csv.substr(0, csv.find('\n'));
  CHECK(header.find(";pol:score") != std::string::npos);
  CHECK(header.find(";mood:imperative") != std::string::npos);
}

TEST_CASE("a custom model reloaded from disk predicts like the in-memory one") {
  const fs::path dir = scratch("roundtrip");
  const auto corpus = sample_corpus();
  const auto lexicon = bundled_emotion_lexicon(default_data_dir());
  TrainArtifacts art = train_emotion_suite(corpus, "sample.csv", Emotion::love, lexicon, dir, {});

  EmotionClassifier loaded =
      load_emotion_classifier(art.models[8 + 1], art.idfs_dir, art.ngrams_dir, Emotion::love, false);
  // Predictions on the held-out split must match the suite's own file.
  std::string predictions = read_file(art.predictions[8 + 1]);
  std::map<std::string, std::string> expected;
  for (const auto& row : parse_corpus(predictions, Delimiter::semicolon, true)) expected[row.id] = row.text;
  REQUIRE_FALSE(expected.empty());
  for (const auto& doc : corpus) {
    auto it = expected.find(doc.id);
    if (it != expected.end()) CHECK(loaded.classify(doc).label == it->second);
  }
}

TEST_CASE("failed training leaves no partial tree") {
  const fs::path dir = scratch("failure");
  auto corpus = sample_corpus();
  corpus[3].gold = "MAYBE";
  CHECK_THROWS_AS(train_emotion_suite(corpus, "bad.csv", Emotion::joy,
                                      bundled_emotion_lexicon(default_data_dir()), dir, {}),
                  DataError);
  CHECK(fs::is_empty(dir));

  auto single = sample_corpus();
  for (auto& d : single) d.gold = "NO";
  CHECK_THROWS(train_emotion_suite(single, "single.csv", Emotion::joy,
                                   bundled_emotion_lexicon(default_data_dir()), dir, {}));
  CHECK(fs::is_empty(dir));
}

TEST_CASE("polarity training on separable synthetic data") {
  std::vector<Document> corpus;
  for (const auto& t : oracle::separable_polarity_corpus(300, 1)) corpus.push_back({t.id, t.text, t.label});
  auto sentiment = bundled_sentiment_lexicon(default_data_dir());
  PolarityOptions options;
  options.features.mode = FeatureMode::keyword;
  PolarityTraining t = train_polarity(corpus, sentiment, std::nullopt, options);
  CHECK(t.report.macro.f1 >= 0.99);
  CHECK(t.report.total == 90);
  CHECK(t.classifier.model.classes() == kPolarityClasses);

  PolarityTraining again = train_polarity(corpus, sentiment, std::nullopt, options);
  CHECK(again.classifier.model == t.classifier.model);

  corpus.erase(std::remove_if(corpus.begin(), corpus.end(), [](const Document& d) { return d.gold == "neutral"; }),
               corpus.end());
  CHECK_THROWS_AS(train_polarity(corpus, sentiment, std::nullopt, options), DataError);
}

TEST_CASE("keyword-only data: mode A and mode K agree") {
  // No lexicon words and an empty word space make the lexicon and semantic
  // fragments constant, so only keywords can separate the classes.
  std::vector<Document> corpus;
  const std::vector<std::string> labels = {"positive", "negative", "neutral"};
  const std::vector<std::string> cue = {"zorp", "blick", "quux"};
  for (int i = 0; i < 90; ++i) {
    corpus.push_back({"k" + std::to_string(i), "item " + cue[i % 3] + " value " + std::to_string(i % 7),
                      labels[i % 3]});
  }
  SentimentLexicon empty_lexicon;
  PolarityOptions k;
  k.features.mode = FeatureMode::keyword;
  k.features.vector_size = 4;
  PolarityOptions a = k;
  a.features.mode = FeatureMode::all;
  auto mk = train_polarity(corpus, empty_lexicon, std::nullopt, k);
  auto ma = train_polarity(corpus, empty_lexicon, WordSpace(4), a);
  for (const auto& d : corpus) CHECK(mk.classifier.classify(d).label == ma.classifier.classify(d).label);
}

TEST_CASE("polarity classifier persistence") {
  const fs::path dir = scratch("polarity_model");
  auto gold = parse_corpus(read_file(default_data_dir() / "polarity" / "gold.csv"), Delimiter::semicolon, true);
  PolarityOptions options;
  options.features.mode = FeatureMode::all;
  options.features.vector_size = 32;
  options.features.unigram_allow = std::set<std::string, std::less<>>{"great", "crash", "how"};
  auto trained = train_polarity(gold, bundled_sentiment_lexicon(default_data_dir()), std::nullopt, options);
  save_polarity_classifier(trained.classifier, dir);
  PolarityClassifier back = load_polarity_classifier(dir);
  CHECK(back.model == trained.classifier.model);
  CHECK(back.config.unigram_allow == options.features.unigram_allow);
  for (const auto& d : gold) CHECK(back.classify(d).label == trained.classifier.classify(d).label);
}
