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

#ifndef EMTK_LEARNER_HPP
#define EMTK_LEARNER_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "emtk/corpus.hpp"
#include "emtk/solver.hpp"
#include "emtk/textproc.hpp"

namespace emtk {

inline constexpr std::string_view kYes = "YES";
inline constexpr std::string_view kNo = "NO";

struct Prediction {
  std::string label;
  double score = 0.0;  // decision value of the predicted class
};

/// Trained linear classifier. Binary models hold one weight row and predict
/// classes[0] when w.x + b >= 0. Models with three or more classes hold one
/// row per class (one-vs-rest) and predict the argmax; ties go to the class
/// listed first.
class LinearModel {
 public:
  struct Metadata {
    double cost = 1.0;
    int solver_id = 0;
    std::uint64_t seed = 0;
    std::string fingerprint;
  };

  LinearModel(std::vector<std::string> classes, std::vector<std::string> features,
              std::vector<std::vector<double>> weights, std::vector<double> bias, Metadata meta);

  const std::vector<std::string>& classes() const { return classes_; }
  const std::vector<std::string>& features() const { return features_; }
  const std::vector<std::vector<double>>& weights() const { return weights_; }
  const std::vector<double>& bias() const { return bias_; }
  const Metadata& metadata() const { return meta_; }
  bool binary() const { return weights_.size() == 1; }

  std::vector<double> scores(const FeatureVector& x) const;
  Prediction predict(const FeatureVector& x) const;
  /// Number of entries of x that are not model features.
  std::size_t unseen_features(const FeatureVector& x) const;

  friend bool operator==(const LinearModel& a, const LinearModel& b) {
    return a.classes_ == b.classes_ && a.features_ == b.features_ && a.weights_ == b.weights_ &&
           a.bias_ == b.bias_ && a.meta_.cost == b.meta_.cost &&
           a.meta_.solver_id == b.meta_.solver_id && a.meta_.seed == b.meta_.seed &&
           a.meta_.fingerprint == b.meta_.fingerprint;
  }

 private:
  std::vector<std::string> classes_;
  std::vector<std::string> features_;
  std::vector<std::vector<double>> weights_;
  std::vector<double> bias_;
  Metadata meta_;
  std::unordered_map<std::string, std::size_t> index_;
};

Prediction predict(const LinearModel& model, const FeatureVector& x);

std::string save_model(const LinearModel& model);
LinearModel load_model(std::string_view bytes);

struct TrainOptions {
  SolverOptions solver;
  std::string fingerprint;
};

/// Trains a binary model; `positive[i]` marks vectors of class `kYes`.
/// `schema` lists the feature space (sorted); when empty it is the union of
/// the vectors' names. Throws DataError when a class has no example.
LinearModel train_linear(std::span<const FeatureVector> vectors, std::span<const bool> positive,
                         std::span<const std::string> schema, const SolverConfig& solver, double cost,
                         const TrainOptions& options = {});

/// One-vs-rest model; `classes` fixes the row order and the tie order.
LinearModel train_one_vs_rest(std::span<const FeatureVector> vectors,
                              std::span<const std::string> labels,
                              std::span<const std::string> classes,
                              std::span<const std::string> schema, const SolverConfig& solver,
                              double cost, const TrainOptions& options = {});

/// Indexed problem with the bias column appended; exposed for the solvers'
/// tests.
Problem make_problem(std::span<const FeatureVector> vectors, std::span<const double> labels,
                     std::span<const std::string> schema);

// --- Data splitting ----------------------------------------------------------

/// Stratified by gold label, order within each part follows the input.
/// Throws DataError when a class has fewer than two members.
std::pair<std::vector<Document>, std::vector<Document>> split_train_test(
    std::span<const Document> docs, double test_fraction, std::uint64_t seed);

/// Reduces every class in `classes` to the minority size, then shuffles.
std::vector<Document> downsample(std::span<const Document> docs, std::span<const std::string> classes,
                                 std::uint64_t seed);

/// Stratified fold id per example (labels compared by value).
std::vector<std::size_t> stratified_folds(std::span<const std::string> labels, std::size_t folds,
                                          std::uint64_t seed);

// --- Evaluation --------------------------------------------------------------

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

struct PerformanceReport {
  std::vector<std::string> classes;
  std::vector<std::vector<std::size_t>> confusion;  // [gold][predicted]
  std::vector<ClassMetrics> per_class;
  ClassMetrics macro;
  std::size_t total = 0;
  std::optional<double> best_cost;
};

double f_measure(double precision, double recall);

PerformanceReport metrics_from_confusion(std::vector<std::string> classes,
                                         std::vector<std::vector<std::size_t>> confusion);

using LabeledId = std::pair<std::string, std::string>;  // (id, label)

/// Throws DataError listing ids present on one side only, or labels that are
/// not among `classes`.
PerformanceReport evaluate(std::span<const LabeledId> predictions, std::span<const LabeledId> gold,
                           std::span<const std::string> classes);

/// Plain-text rendering: confusion matrix and per-class P/R/F.
std::string render_report(const PerformanceReport& report);

// --- Cost tuning -------------------------------------------------------------

struct CostScore {
  double cost;
  double f1;                 // mean over scored folds
  std::size_t scored_folds;
  std::size_t skipped_folds;
};

struct TuneResult {
  double best_cost;
  std::vector<CostScore> scores;
  std::size_t skipped_folds = 0;
};

inline const std::vector<double> kDefaultCostGrid = {0.01, 0.1, 1, 10, 100};
inline constexpr std::size_t kDefaultFolds = 5;

/// k-fold cross-validated F-measure of the YES class for every cost; the best
/// cost maximizes it, ties going to the smaller cost. Folds whose training or
/// validation part holds a single class (or whose solver fails) are skipped.
TuneResult tune_cost(std::span<const FeatureVector> vectors, std::span<const bool> positive,
                     std::span<const std::string> schema, const SolverConfig& solver,
                     std::span<const double> grid, std::size_t folds, std::uint64_t seed,
                     const SolverOptions& options = {});

/// Same protocol for one-vs-rest models, scored by macro F-measure.
TuneResult tune_cost_multiclass(std::span<const FeatureVector> vectors,
                                std::span<const std::string> labels,
                                std::span<const std::string> classes,
                                std::span<const std::string> schema, const SolverConfig& solver,
                                std::span<const double> grid, std::size_t folds, std::uint64_t seed,
                                const SolverOptions& options = {});

std::string render_tuning(const TuneResult& tuning);

/// FNV-1a over ids, labels and texts.
std::string corpus_fingerprint(std::span<const Document> docs);

}  // namespace emtk

#endif  // EMTK_LEARNER_HPP
