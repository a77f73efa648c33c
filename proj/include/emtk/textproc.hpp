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

#ifndef EMTK_TEXTPROC_HPP
#define EMTK_TEXTPROC_HPP

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "emtk/corpus.hpp"

namespace emtk {

struct Token {
  std::string surface;    // lowercased, never empty, no whitespace
  std::size_t position;   // 0-based index in the document
  std::size_t sentence = 0;

  friend bool operator==(const Token&, const Token&) = default;
};

inline constexpr std::string_view kUrlToken = "<url>";

/// Lowercased word tokens. Letter/digit/apostrophe runs form words (non-ASCII
/// code points count as letters), URLs become `<url>`, runs of `!` or `?`
/// become a single `!` / `?` token, any other punctuation is dropped.
std::vector<Token> tokenize(std::string_view text);

/// Splits after `.`, `!`, `?` runs followed by whitespace or end of text.
/// Known abbreviations ("e.g.", "i.e.", "vs.", "Mr.", ...) do not end
/// a sentence. Numbered items like "1." are not special-cased.
std::vector<std::string> split_sentences(std::string_view text);

/// Sentence split followed by tokenization; positions run across the whole
/// document and `sentence` records the sentence index.
std::vector<Token> tokenize_document(std::string_view text);

/// All contiguous n-token sequences (n = 1 or 2) joined by a single space.
/// Bigrams never span two sentences.
std::vector<std::string> extract_ngrams(std::span<const Token> tokens, int n);

/// Sparse feature map; zero values are never stored.
class FeatureVector {
 public:
  using Map = std::map<std::string, double, std::less<>>;

  void set(std::string name, double value);
  void add(std::string_view name, double delta);
  /// Copies all entries of `other`; names must not collide.
  void merge(const FeatureVector& other);

  double get(std::string_view name) const;
  bool contains(std::string_view name) const { return entries_.find(name) != entries_.end(); }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const Map& entries() const { return entries_; }

  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;

 private:
  Map entries_;
};

/// Trained n-gram vocabulary and idf table.
struct NgramModel {
  std::vector<std::string> unigrams;  // sorted, unique
  std::vector<std::string> bigrams;   // sorted, unique
  std::map<std::string, double, std::less<>> idf;
  std::size_t documents = 0;  // not persisted: 0 after load_ngram_model
};

inline constexpr std::size_t kDefaultMinDf = 2;

/// Vocabulary = n-grams with document frequency >= min_df;
/// idf(t) = ln(N / df(t)). Throws DataError on an empty corpus.
NgramModel build_ngram_model(std::span<const Document> corpus, std::size_t min_df = kDefaultMinDf);

/// tf * idf for every in-vocabulary n-gram, keyed `uni:<t>` / `bi:<a b>`.
FeatureVector tfidf_vector(std::span<const Token> tokens, const NgramModel& model);
FeatureVector tfidf_vector(const Document& doc, const NgramModel& model);

// Persistence: n-grams/UnigramsList.txt, n-grams/BigramsList.txt and
// idfs/UnigramsIdf.txt, idfs/BigramsIdf.txt (`ngram<TAB>idf`).
inline constexpr std::string_view kUnigramList = "UnigramsList.txt";
inline constexpr std::string_view kBigramList = "BigramsList.txt";
inline constexpr std::string_view kUnigramIdf = "UnigramsIdf.txt";
inline constexpr std::string_view kBigramIdf = "BigramsIdf.txt";

void save_ngram_lists(const NgramModel& model, const std::filesystem::path& ngrams_dir);
void save_ngram_idfs(const NgramModel& model, const std::filesystem::path& idfs_dir);
/// Throws FormatError when the lists and idf tables disagree.
NgramModel load_ngram_model(const std::filesystem::path& ngrams_dir,
                            const std::filesystem::path& idfs_dir);

/// One n-gram per line (blank lines ignored); used for the -ul/-bl allow-lists.
std::vector<std::string> parse_ngram_list(std::string_view bytes);

}  // namespace emtk

#endif  // EMTK_TEXTPROC_HPP
