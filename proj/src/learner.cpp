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

#include "emtk/learner.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

#include "emtk/error.hpp"
#include "emtk/io.hpp"

namespace emtk {

namespace {

constexpr std::string_view kModelMagic = "emtk-linear-model 1";

std::vector<std::string> owned_schema(std::span<const FeatureVector> vectors,
                                      std::span<const std::string> schema) {
  if (!schema.empty()) return {schema.begin(), schema.end()};
  std::set<std::string> names;
  for (const auto& v : vectors) {
    for (const auto& [name, value] : v) names.insert(name);
  }
  return {names.begin(), names.end()};
}

void shuffle_indices(std::vector<std::size_t>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng() % i]);
}

double row_dot(const SparseRow& row, std::span<const double> w) {
  double s = 0.0;
  for (std::size_t k = 0; k < row.index.size(); ++k) s += row.value[k] * w[row.index[k]];
  return s;
}

Problem subset(const Problem& full, std::span<const std::size_t> rows, std::span<const double> labels) {
  Problem p;
  p.dim = full.dim;
  p.rows.reserve(rows.size());
  p.labels.reserve(rows.size());
  for (std::size_t r : rows) {
    p.rows.push_back(full.rows[r]);
    p.labels.push_back(labels[r]);
  }
  return p;
}

std::string ids_sample(const std::vector<std::string>& ids) {
  constexpr std::size_t kShown = 10;
  std::string out;
  for (std::size_t i = 0; i < ids.size() && i < kShown; ++i) out += (i ? ", " : "") + ids[i];
  if (ids.size() > kShown) out += fmt::format(", ... ({} total)", ids.size());
  return out;
}

bool better(const CostScore& candidate, const CostScore& incumbent) {
  return candidate.f1 > incumbent.f1 || (candidate.f1 == incumbent.f1 && candidate.cost < incumbent.cost);
}

TuneResult pick_best(std::vector<CostScore> scores) {
  TuneResult result{scores.front().cost, {}, 0};
  const CostScore* best = &scores.front();
  for (const auto& s : scores) {
    if (better(s, *best)) best = &s;
    result.skipped_folds += s.skipped_folds;
  }
  result.best_cost = best->cost;
  result.scores = std::move(scores);
  return result;
}

}  // namespace

// --- LinearModel -------------------------------------------------------------

LinearModel::LinearModel(std::vector<std::string> classes, std::vector<std::string> features,
                         std::vector<std::vector<double>> weights, std::vector<double> bias,
                         Metadata meta)
    : classes_(std::move(classes)),
      features_(std::move(features)),
      weights_(std::move(weights)),
      bias_(std::move(bias)),
      meta_(std::move(meta)) {
  if (weights_.empty() || weights_.size() != bias_.size()) {
    throw std::invalid_argument("model needs one bias per weight row");
  }
  if (weights_.size() == 1 ? classes_.size() != 2 : weights_.size() != classes_.size()) {
    throw std::invalid_argument("class count does not match weight rows");
  }
  for (const auto& row : weights_) {
    if (row.size() != features_.size()) throw std::invalid_argument("weight row length mismatch");
  }
  index_.reserve(features_.size());
  for (std::size_t i = 0; i < features_.size(); ++i) {
    if (!index_.emplace(features_[i], i).second) {
      throw std::invalid_argument("duplicate model feature: " + features_[i]);
    }
  }
}

std::vector<double> LinearModel::scores(const FeatureVector& x) const {
  std::vector<double> s = bias_;
  for (const auto& [name, value] : x) {
    auto it = index_.find(name);
    if (it == index_.end()) continue;
    for (std::size_t r = 0; r < weights_.size(); ++r) s[r] += weights_[r][it->second] * value;
  }
  return s;
}

Prediction LinearModel::predict(const FeatureVector& x) const {
  std::vector<double> s = scores(x);
  if (binary()) return {s[0] >= 0.0 ? classes_[0] : classes_[1], s[0]};
  std::size_t best = 0;
  for (std::size_t r = 1; r < s.size(); ++r) {
    if (s[r] > s[best]) best = r;
  }
  return {classes_[best], s[best]};
}

std::size_t LinearModel::unseen_features(const FeatureVector& x) const {
  std::size_t unseen = 0;
  for (const auto& [name, value] : x) unseen += index_.count(name) ? 0 : 1;
  return unseen;
}

Prediction predict(const LinearModel& model, const FeatureVector& x) { return model.predict(x); }

std::string save_model(const LinearModel& model) {
  const auto& m = model.metadata();
  std::string out;
  out += kModelMagic;
  out += '\n';
  out += fmt::format("solver\t{}\n", m.solver_id);
  out += fmt::format("cost\t{}\n", format_double(m.cost));
  out += fmt::format("seed\t{}\n", m.seed);
  out += fmt::format("fingerprint\t{}\n", m.fingerprint.empty() ? "-" : m.fingerprint);
  out += fmt::format("classes\t{}\n", model.classes().size());
  for (const auto& c : model.classes()) out += c + '\n';
  out += "bias";
  for (double b : model.bias()) out += '\t' + format_double(b);
  out += '\n';
  out += fmt::format("features\t{}\n", model.features().size());
  for (std::size_t i = 0; i < model.features().size(); ++i) {
    out += model.features()[i];
    for (const auto& row : model.weights()) out += '\t' + format_double(row[i]);
    out += '\n';
  }
  return out;
}

LinearModel load_model(std::string_view bytes) {
  std::vector<NumberedLine> lines = lines_of(bytes);
  std::size_t cursor = 0;
  const auto next = [&]() -> const NumberedLine& {
    if (cursor >= lines.size()) throw FormatError("truncated model file");
    return lines[cursor++];
  };
  const auto field = [&](std::string_view key) {
    const NumberedLine& line = next();
    auto parts = split(line.text, '\t');
    if (parts.size() < 2 || parts[0] != key) {
      throw FormatError(fmt::format("expected '{}' entry", key), line.number);
    }
    return std::make_pair(line, std::vector<std::string_view>(parts.begin() + 1, parts.end()));
  };

  if (next().text != kModelMagic) throw FormatError("not an emtk model file", 1);
  LinearModel::Metadata meta;
  try {
    meta.solver_id = static_cast<int>(parse_uint(field("solver").second.at(0)));
    solver_config(meta.solver_id);
    meta.cost = parse_double(field("cost").second.at(0));
    meta.seed = parse_uint(field("seed").second.at(0));
    std::string_view fp = field("fingerprint").second.at(0);
    meta.fingerprint = fp == "-" ? "" : std::string(fp);
  } catch (const std::out_of_range& e) {
    throw FormatError(std::string("model header: ") + e.what());
  }
  const std::size_t n_classes = parse_uint(field("classes").second.at(0));
  std::vector<std::string> classes;
  for (std::size_t i = 0; i < n_classes; ++i) classes.emplace_back(next().text);
  const std::size_t rows = n_classes == 2 ? 1 : n_classes;

  auto [bias_line, bias_fields] = field("bias");
  if (bias_fields.size() != rows) throw FormatError("bias count mismatch", bias_line.number);
  std::vector<double> bias;
  for (auto b : bias_fields) bias.push_back(parse_double(b));

  const std::size_t n_features = parse_uint(field("features").second.at(0));
  std::vector<std::string> features;
  std::vector<std::vector<double>> weights(rows);
  features.reserve(n_features);
  for (std::size_t i = 0; i < n_features; ++i) {
    const NumberedLine& line = next();
    auto parts = split(line.text, '\t');
    if (parts.size() != rows + 1) throw FormatError("weight count mismatch", line.number);
    features.emplace_back(parts[0]);
    for (std::size_t r = 0; r < rows; ++r) weights[r].push_back(parse_double(parts[r + 1]));
  }
  if (cursor != lines.size()) throw FormatError("trailing data in model file", lines[cursor].number);
  try {
    return LinearModel(std::move(classes), std::move(features), std::move(weights), std::move(bias),
                       std::move(meta));
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

// --- Training ----------------------------------------------------------------

Problem make_problem(std::span<const FeatureVector> vectors, std::span<const double> labels,
                     std::span<const std::string> schema) {
  std::unordered_map<std::string_view, std::uint32_t> index;
  index.reserve(schema.size());
  for (std::size_t i = 0; i < schema.size(); ++i) index.emplace(schema[i], static_cast<std::uint32_t>(i));
  Problem p;
  p.dim = schema.size() + 1;
  p.rows.reserve(vectors.size());
  for (const auto& v : vectors) {
    std::vector<std::pair<std::uint32_t, double>> entries;
    entries.reserve(v.size() + 1);
    for (const auto& [name, value] : v) {
      auto it = index.find(name);
      if (it != index.end()) entries.emplace_back(it->second, value);
    }
    std::sort(entries.begin(), entries.end());
    entries.emplace_back(static_cast<std::uint32_t>(schema.size()), 1.0);
    SparseRow row;
    for (const auto& [i, x] : entries) {
      row.index.push_back(i);
      row.value.push_back(x);
    }
    p.rows.push_back(std::move(row));
  }
  p.labels.assign(labels.begin(), labels.end());
  return p;
}

LinearModel train_linear(std::span<const FeatureVector> vectors, std::span<const bool> positive,
                         std::span<const std::string> schema, const SolverConfig& solver, double cost,
                         const TrainOptions& options) {
  if (vectors.size() != positive.size()) throw std::invalid_argument("vectors/labels size mismatch");
  const auto n_pos = static_cast<std::size_t>(std::count(positive.begin(), positive.end(), true));
  if (n_pos == 0 || n_pos == positive.size()) {
    throw DataError(fmt::format("training needs examples of both classes ({} {}, {} {})", n_pos, kYes,
                                positive.size() - n_pos, kNo));
  }
  std::vector<std::string> names = owned_schema(vectors, schema);
  std::vector<double> labels;
  labels.reserve(positive.size());
  for (bool p : positive) labels.push_back(p ? 1.0 : -1.0);
  SolverResult fit = solve(make_problem(vectors, labels, names), solver, cost, options.solver);
  const double b = fit.weights.back();
  fit.weights.pop_back();
  return LinearModel({std::string(kYes), std::string(kNo)}, std::move(names), {std::move(fit.weights)},
                     {b}, {cost, solver.id, options.solver.seed, options.fingerprint});
}

LinearModel train_one_vs_rest(std::span<const FeatureVector> vectors,
                              std::span<const std::string> labels,
                              std::span<const std::string> classes,
                              std::span<const std::string> schema, const SolverConfig& solver,
                              double cost, const TrainOptions& options) {
  if (vectors.size() != labels.size()) throw std::invalid_argument("vectors/labels size mismatch");
  if (classes.size() < 3) throw std::invalid_argument("one-vs-rest needs at least three classes");
  for (const auto& c : classes) {
    if (std::find(labels.begin(), labels.end(), c) == labels.end()) {
      throw DataError(fmt::format("no training example of class '{}'", c));
    }
  }
  std::vector<std::string> names = owned_schema(vectors, schema);
  std::vector<double> y(labels.size());
  Problem problem = make_problem(vectors, y, names);
  std::vector<std::vector<double>> rows;
  std::vector<double> bias;
  for (const auto& c : classes) {
    for (std::size_t i = 0; i < labels.size(); ++i) problem.labels[i] = labels[i] == c ? 1.0 : -1.0;
    SolverResult fit = solve(problem, solver, cost, options.solver);
    bias.push_back(fit.weights.back());
    fit.weights.pop_back();
    rows.push_back(std::move(fit.weights));
  }
  return LinearModel({classes.begin(), classes.end()}, std::move(names), std::move(rows), std::move(bias),
                     {cost, solver.id, options.solver.seed, options.fingerprint});
}

// --- Splitting ---------------------------------------------------------------

std::pair<std::vector<Document>, std::vector<Document>> split_train_test(
    std::span<const Document> docs, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw std::invalid_argument("test fraction must be in (0, 1)");
  }
  std::map<std::string, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (!docs[i].gold) throw DataError(fmt::format("document '{}' has no gold label", docs[i].id));
    by_class[*docs[i].gold].push_back(i);
  }
  std::mt19937_64 rng(seed);
  std::vector<bool> in_test(docs.size(), false);
  for (auto& [label, members] : by_class) {
    if (members.size() < 2) {
      throw DataError(fmt::format("class '{}' has {} member(s); at least 2 are needed to split", label,
                                  members.size()));
    }
    shuffle_indices(members, rng);
    auto n_test = static_cast<std::size_t>(static_cast<double>(members.size()) * test_fraction + 0.5);
    n_test = std::clamp<std::size_t>(n_test, 1, members.size() - 1);
    for (std::size_t k = 0; k < n_test; ++k) in_test[members[k]] = true;
  }
  std::pair<std::vector<Document>, std::vector<Document>> parts;
  for (std::size_t i = 0; i < docs.size(); ++i) (in_test[i] ? parts.second : parts.first).push_back(docs[i]);
  return parts;
}

std::vector<Document> downsample(std::span<const Document> docs, std::span<const std::string> classes,
                                 std::uint64_t seed) {
  if (classes.size() < 2) throw std::invalid_argument("downsampling needs at least two classes");
  std::map<std::string, std::vector<std::size_t>> by_class;
  for (const auto& c : classes) by_class[c];
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (!docs[i].gold) throw DataError(fmt::format("document '{}' has no gold label", docs[i].id));
    auto it = by_class.find(*docs[i].gold);
    if (it == by_class.end()) throw DataError(fmt::format("unexpected label '{}'", *docs[i].gold));
    it->second.push_back(i);
  }
  std::size_t minority = docs.size();
  for (const auto& [label, members] : by_class) {
    if (members.empty()) throw DataError(fmt::format("class '{}' has no members", label));
    minority = std::min(minority, members.size());
  }
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> chosen;
  for (auto& [label, members] : by_class) {
    shuffle_indices(members, rng);
    chosen.insert(chosen.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(minority));
  }
  std::sort(chosen.begin(), chosen.end());
  shuffle_indices(chosen, rng);
  std::vector<Document> out;
  out.reserve(chosen.size());
  for (std::size_t i : chosen) out.push_back(docs[i]);
  return out;
}

std::vector<std::size_t> stratified_folds(std::span<const std::string> labels, std::size_t folds,
                                          std::uint64_t seed) {
  if (folds < 2) throw std::invalid_argument("at least two folds are needed");
  std::map<std::string, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> fold(labels.size());
  std::size_t offset = 0;
  for (auto& [label, members] : by_class) {
    shuffle_indices(members, rng);
    for (std::size_t k = 0; k < members.size(); ++k) fold[members[k]] = (offset + k) % folds;
    offset += members.size();
  }
  return fold;
}

// --- Evaluation --------------------------------------------------------------

double f_measure(double precision, double recall) {
  return precision + recall == 0.0 ? 0.0 : 2.0 * precision * recall / (precision + recall);
}

PerformanceReport metrics_from_confusion(std::vector<std::string> classes,
                                         std::vector<std::vector<std::size_t>> confusion) {
  const std::size_t k = classes.size();
  if (confusion.size() != k) throw std::invalid_argument("confusion matrix shape mismatch");
  for (const auto& row : confusion) {
    if (row.size() != k) throw std::invalid_argument("confusion matrix shape mismatch");
  }
  PerformanceReport report;
  report.classes = std::move(classes);
  report.confusion = std::move(confusion);
  report.per_class.resize(k);
  for (std::size_t c = 0; c < k; ++c) {
    const std::size_t tp = report.confusion[c][c];
    std::size_t predicted = 0, actual = 0;
    for (std::size_t o = 0; o < k; ++o) {
      predicted += report.confusion[o][c];
      actual += report.confusion[c][o];
    }
    ClassMetrics& m = report.per_class[c];
    m.support = actual;
    m.precision = predicted == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(predicted);
    m.recall = actual == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(actual);
    m.f1 = f_measure(m.precision, m.recall);
    report.total += actual;
  }
  if (k > 0) {
    for (const auto& m : report.per_class) {
      report.macro.precision += m.precision / static_cast<double>(k);
      report.macro.recall += m.recall / static_cast<double>(k);
      report.macro.f1 += m.f1 / static_cast<double>(k);
    }
    report.macro.support = report.total;
  }
  return report;
}

PerformanceReport evaluate(std::span<const LabeledId> predictions, std::span<const LabeledId> gold,
                           std::span<const std::string> classes) {
  std::unordered_map<std::string, std::size_t> class_index;
  for (std::size_t c = 0; c < classes.size(); ++c) class_index.emplace(classes[c], c);
  const auto label_index = [&](const std::string& label, std::string_view side) {
    auto it = class_index.find(label);
    if (it == class_index.end()) throw DataError(fmt::format("unknown {} label '{}'", side, label));
    return it->second;
  };

  std::unordered_map<std::string, std::size_t> gold_by_id;
  for (const auto& [id, label] : gold) {
    if (!gold_by_id.emplace(id, label_index(label, "gold")).second) {
      throw DataError("duplicate gold id: " + id);
    }
  }
  std::vector<std::vector<std::size_t>> confusion(classes.size(), std::vector<std::size_t>(classes.size(), 0));
  std::set<std::string> seen;
  std::vector<std::string> unexpected;
  for (const auto& [id, label] : predictions) {
    if (!seen.insert(id).second) throw DataError("duplicate prediction id: " + id);
    auto it = gold_by_id.find(id);
    if (it == gold_by_id.end()) {
      unexpected.push_back(id);
      continue;
    }
    ++confusion[it->second][label_index(label, "predicted")];
  }
  std::vector<std::string> missing;
  for (const auto& [id, label] : gold) {
    if (!seen.count(id)) missing.push_back(id);
  }
  if (!missing.empty() || !unexpected.empty()) {
    std::string msg = "prediction/gold id mismatch";
    if (!missing.empty()) msg += "; no prediction for: " + ids_sample(missing);
    if (!unexpected.empty()) msg += "; no gold label for: " + ids_sample(unexpected);
    throw DataError(msg);
  }
  return metrics_from_confusion({classes.begin(), classes.end()}, std::move(confusion));
}

std::string render_report(const PerformanceReport& report) {
  std::size_t width = 10;
  for (const auto& c : report.classes) width = std::max(width, c.size() + 2);
  std::string out;
  if (report.best_cost) out += fmt::format("best cost: {}\n\n", format_double(*report.best_cost));
  out += "confusion matrix (rows: gold, columns: predicted)\n";
  out += fmt::format("{:<{}}", "", width);
  for (const auto& c : report.classes) out += fmt::format("{:>{}}", c, width);
  out += '\n';
  for (std::size_t g = 0; g < report.classes.size(); ++g) {
    out += fmt::format("{:<{}}", report.classes[g], width);
    for (std::size_t count : report.confusion[g]) out += fmt::format("{:>{}}", count, width);
    out += '\n';
  }
  out += fmt::format("\n{:<{}}{:>11}{:>11}{:>11}{:>9}\n", "class", width, "precision", "recall",
                     "f-measure", "support");
  for (std::size_t c = 0; c < report.classes.size(); ++c) {
    const auto& m = report.per_class[c];
    out += fmt::format("{:<{}}{:>11.4f}{:>11.4f}{:>11.4f}{:>9}\n", report.classes[c], width, m.precision,
                       m.recall, m.f1, m.support);
  }
  out += fmt::format("{:<{}}{:>11.4f}{:>11.4f}{:>11.4f}{:>9}\n", "macro avg", width, report.macro.precision,
                     report.macro.recall, report.macro.f1, report.total);
  return out;
}

// --- Cost tuning -------------------------------------------------------------

TuneResult tune_cost(std::span<const FeatureVector> vectors, std::span<const bool> positive,
                     std::span<const std::string> schema, const SolverConfig& solver,
                     std::span<const double> grid, std::size_t folds, std::uint64_t seed,
                     const SolverOptions& options) {
  if (grid.empty()) throw std::invalid_argument("cost grid is empty");
  if (vectors.size() != positive.size()) throw std::invalid_argument("vectors/labels size mismatch");
  std::vector<std::string> names = owned_schema(vectors, schema);
  std::vector<double> y;
  std::vector<std::string> labels;
  for (bool p : positive) {
    y.push_back(p ? 1.0 : -1.0);
    labels.emplace_back(p ? kYes : kNo);
  }
  const Problem full = make_problem(vectors, y, names);
  const std::vector<std::size_t> fold_of = stratified_folds(labels, folds, seed);

  std::vector<CostScore> scores;
  for (double cost : grid) {
    CostScore score{cost, 0.0, 0, 0};
    double sum = 0.0;
    for (std::size_t f = 0; f < folds; ++f) {
      std::vector<std::size_t> train, valid;
      for (std::size_t i = 0; i < fold_of.size(); ++i) (fold_of[i] == f ? valid : train).push_back(i);
      const auto classes_in = [&](const std::vector<std::size_t>& rows) {
        std::size_t pos = 0;
        for (std::size_t r : rows) pos += positive[r] ? 1 : 0;
        return (pos > 0 ? 1 : 0) + (pos < rows.size() ? 1 : 0);
      };
      if (classes_in(train) < 2 || classes_in(valid) < 2) {
        ++score.skipped_folds;
        continue;
      }
      SolverResult fit;
      try {
        fit = solve(subset(full, train, y), solver, cost, options);
      } catch (const ConvergenceError&) {
        ++score.skipped_folds;
        continue;
      }
      std::size_t tp = 0, fp = 0, fn = 0;
      for (std::size_t r : valid) {
        const bool predicted = row_dot(full.rows[r], fit.weights) >= 0.0;
        if (predicted && positive[r]) ++tp;
        if (predicted && !positive[r]) ++fp;
        if (!predicted && positive[r]) ++fn;
      }
      const double p = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
      const double r = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
      sum += f_measure(p, r);
      ++score.scored_folds;
    }
    score.f1 = score.scored_folds == 0 ? 0.0 : sum / static_cast<double>(score.scored_folds);
    scores.push_back(score);
  }
  return pick_best(std::move(scores));
}

TuneResult tune_cost_multiclass(std::span<const FeatureVector> vectors,
                                std::span<const std::string> labels,
                                std::span<const std::string> classes,
                                std::span<const std::string> schema, const SolverConfig& solver,
                                std::span<const double> grid, std::size_t folds, std::uint64_t seed,
                                const SolverOptions& options) {
  if (grid.empty()) throw std::invalid_argument("cost grid is empty");
  std::vector<std::string> names = owned_schema(vectors, schema);
  std::vector<double> y(labels.size(), 0.0);
  Problem full = make_problem(vectors, y, names);
  const std::vector<std::size_t> fold_of = stratified_folds(labels, folds, seed);

  std::vector<CostScore> scores;
  for (double cost : grid) {
    CostScore score{cost, 0.0, 0, 0};
    double sum = 0.0;
    for (std::size_t f = 0; f < folds; ++f) {
      std::vector<std::size_t> train, valid;
      for (std::size_t i = 0; i < fold_of.size(); ++i) (fold_of[i] == f ? valid : train).push_back(i);
      bool complete = !valid.empty();
      for (const auto& c : classes) {
        complete = complete && std::any_of(train.begin(), train.end(), [&](std::size_t r) { return labels[r] == c; });
      }
      if (!complete) {
        ++score.skipped_folds;
        continue;
      }
      std::vector<std::vector<double>> rows;
      try {
        for (const auto& c : classes) {
          for (std::size_t i = 0; i < labels.size(); ++i) y[i] = labels[i] == c ? 1.0 : -1.0;
          rows.push_back(solve(subset(full, train, y), solver, cost, options).weights);
        }
      } catch (const ConvergenceError&) {
        ++score.skipped_folds;
        continue;
      }
      std::vector<std::vector<std::size_t>> confusion(classes.size(), std::vector<std::size_t>(classes.size(), 0));
      for (std::size_t r : valid) {
        std::size_t best = 0;
        double best_score = row_dot(full.rows[r], rows[0]);
        for (std::size_t c = 1; c < rows.size(); ++c) {
          const double s = row_dot(full.rows[r], rows[c]);
          if (s > best_score) {
            best = c;
            best_score = s;
          }
        }
        const auto gold = static_cast<std::size_t>(
            std::find(classes.begin(), classes.end(), labels[r]) - classes.begin());
        if (gold < classes.size()) ++confusion[gold][best];
      }
      sum += metrics_from_confusion({classes.begin(), classes.end()}, std::move(confusion)).macro.f1;
      ++score.scored_folds;
    }
    score.f1 = score.scored_folds == 0 ? 0.0 : sum / static_cast<double>(score.scored_folds);
    scores.push_back(score);
  }
  return pick_best(std::move(scores));
}

std::string render_tuning(const TuneResult& tuning) {
  std::string out = fmt::format("{:>10}{:>12}{:>8}{:>9}\n", "cost", "mean-F", "folds", "skipped");
  for (const auto& s : tuning.scores) {
    out += fmt::format("{:>10}{:>12.4f}{:>8}{:>9}\n", format_double(s.cost), s.f1, s.scored_folds,
                       s.skipped_folds);
  }
  if (tuning.skipped_folds > 0) {
    out += fmt::format("warning: {} fold evaluation(s) skipped (single-class fold or solver failure)\n",
                       tuning.skipped_folds);
  }
  return out;
}

std::string corpus_fingerprint(std::span<const Document> docs) {
  std::uint64_t h = fnv1a("");
  for (const auto& d : docs) {
    h = fnv1a(d.id, h);
    h = fnv1a("\x1f", h);
    h = fnv1a(d.gold.value_or(""), h);
    h = fnv1a("\x1f", h);
    h = fnv1a(d.text, h);
    h = fnv1a("\x1e", h);
  }
  return hex64(h);
}

}  // namespace emtk
