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

// End-to-end training: the per-emotion model suite with its on-disk tree,
// the three-class polarity model, and the classifier bundles used at
// prediction time.

#ifndef EMTK_TRAINING_HPP
#define EMTK_TRAINING_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "emtk/corpus.hpp"
#include "emtk/features.hpp"
#include "emtk/learner.hpp"
#include "emtk/textproc.hpp"

namespace emtk {

/// EMTK_DATA_DIR when set, otherwise the data directory of the source tree.
std::filesystem::path default_data_dir();

EmotionLexicon bundled_emotion_lexicon(const std::filesystem::path& data_dir);
SentimentLexicon bundled_sentiment_lexicon(const std::filesystem::path& data_dir);

// --- Emotion suite -----------------------------------------------------------

inline constexpr std::string_view kEmotionLexiconFile = "EmotionLexicon.txt";
inline constexpr std::string_view kEmotionIdfFile = "EmotionWordsIdf.txt";
inline constexpr std::string_view kDownSampling = "DownSampling";
inline constexpr std::string_view kNoDownSampling = "NoDownSampling";

struct EmotionSuiteOptions {
  bool politeness_mood = false;
  std::uint64_t seed = 42;
  double test_fraction = 0.3;
  std::vector<double> cost_grid = kDefaultCostGrid;
  std::size_t folds = kDefaultFolds;
  std::size_t min_df = kDefaultMinDf;
  std::size_t workers = 1;  // concurrent training jobs
};

struct TrainArtifacts {
  std::filesystem::path root;
  std::filesystem::path ngrams_dir;
  std::filesystem::path idfs_dir;
  std::filesystem::path feature_csv;
  std::vector<std::filesystem::path> training_sets;
  std::vector<std::filesystem::path> test_sets;
  std::vector<std::filesystem::path> models;
  std::vector<std::filesystem::path> performance;
  std::vector<std::filesystem::path> predictions;
};

/// `training_<file_name>_<emotion>` directory name.
std::string training_dir_name(std::string_view file_name, Emotion emotion);

/// Builds the full training tree under `parent`. Labels must be YES/NO.
/// Any existing tree of the same name is replaced; on failure nothing is
/// left behind.
TrainArtifacts train_emotion_suite(std::span<const Document> corpus, std::string_view file_name,
                                   Emotion emotion, const EmotionLexicon& lexicon,
                                   const std::filesystem::path& parent,
                                   const EmotionSuiteOptions& options);

/// Everything needed to classify one emotion.
struct EmotionClassifier {
  Emotion emotion;
  bool politeness_mood = false;
  NgramModel ngrams;
  EmotionLexicon lexicon;  // with idf weights
  LinearModel model;

  unsigned fragments() const;
  FeatureVector features(std::string_view text) const;
  Prediction classify(const Document& doc) const;
};

/// Reassembles a classifier from a model file and the idfs/ and n-grams/
/// folders of a training tree.
EmotionClassifier load_emotion_classifier(const std::filesystem::path& model_file,
                                          const std::filesystem::path& idfs_dir,
                                          const std::filesystem::path& ngrams_dir,
                                          Emotion emotion, bool politeness_mood);

/// Single tuned model over the whole corpus (used for the bundled default).
EmotionClassifier train_emotion_classifier(std::span<const Document> corpus, Emotion emotion,
                                           const EmotionLexicon& lexicon,
                                           const EmotionSuiteOptions& options, int solver_id = 1);

// --- Polarity ----------------------------------------------------------------

/// Class order of polarity models; it is also the argmax tie order.
inline const std::vector<std::string> kPolarityClasses = {"neutral", "positive", "negative"};

struct PolarityOptions {
  FeatureConfig features;
  std::uint64_t seed = 42;
  double test_fraction = 0.3;
  std::vector<double> cost_grid = kDefaultCostGrid;
  std::size_t folds = kDefaultFolds;
  std::size_t min_df = kDefaultMinDf;
  std::size_t window = kDefaultWindow;
  int solver_id = 1;
};

struct PolarityClassifier {
  FeatureConfig config;
  NgramModel ngrams;
  SentimentLexicon sentiment;
  std::optional<WordSpace> space;
  LinearModel model;

  FeatureResources resources() const;
  FeatureVector features(std::string_view text) const;
  Prediction classify(const Document& doc) const;
};

struct PolarityTraining {
  PolarityClassifier classifier;
  PerformanceReport report;  // on the held-out split
  TuneResult tuning;
};

/// Gold labels must name the three polarities (case-insensitive). When the
/// feature mode needs a word space and `space` is empty, one is built from
/// the training split with config.vector_size dimensions.
PolarityTraining train_polarity(std::span<const Document> gold, const SentimentLexicon& sentiment,
                                std::optional<WordSpace> space, const PolarityOptions& options);

/// Directory layout: polarity.model, config.txt, sentiment.tsv, n-grams/,
/// idfs/, and dsm.txt when a word space is used.
void save_polarity_classifier(const PolarityClassifier& classifier, const std::filesystem::path& dir);
PolarityClassifier load_polarity_classifier(const std::filesystem::path& dir);

}  // namespace emtk

#endif  // EMTK_TRAINING_HPP
