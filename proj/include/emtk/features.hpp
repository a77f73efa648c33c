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

// Feature extractors. Every fragment uses its own name prefix:
//   uni: bi:     tf-idf keywords
//   lex:emo:     emotion lexicon hits
//   lex:sent:    sentiment lexicon counts
//   sem:         mean word-space vector
//   pol:         politeness
//   mood:        sentence mood (one-hot)

#ifndef EMTK_FEATURES_HPP
#define EMTK_FEATURES_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "emtk/corpus.hpp"
#include "emtk/textproc.hpp"

namespace emtk {

// --- Emotion lexicon ---------------------------------------------------------

struct EmotionLexicon {
  std::array<std::set<std::string, std::less<>>, kEmotionCount> words;
  /// When present, hits are weighted by idf instead of 1.0.
  std::optional<std::map<std::string, double, std::less<>>> idf;

  const std::set<std::string, std::less<>>& words_for(Emotion e) const {
    return words[static_cast<std::size_t>(e)];
  }
  /// Union of all six sets, sorted.
  std::vector<std::string> all_words() const;
};

/// Lines `emotion<TAB>word`; '#' starts a comment line.
EmotionLexicon load_emotion_lexicon(std::string_view bytes);
std::string save_emotion_lexicon(const EmotionLexicon& lexicon);

/// idf of every lexicon word over `corpus` (df of 0 is treated as 1).
std::map<std::string, double, std::less<>> emotion_word_idf(const EmotionLexicon& lexicon,
                                                             std::span<const Document> corpus);
std::string save_word_idf(const std::map<std::string, double, std::less<>>& idf);
std::map<std::string, double, std::less<>> load_word_idf(std::string_view bytes);

FeatureVector emotion_lexicon_features(std::span<const Token> tokens, const EmotionLexicon& lexicon);

// --- Sentiment lexicon -------------------------------------------------------

struct SentimentLexicon {
  std::set<std::string, std::less<>> positive;
  std::set<std::string, std::less<>> negative;
  std::set<std::string, std::less<>> negation;
};

/// Lines `positive|negative|negation<TAB>word`. Throws FormatError when a
/// word is both positive and negative.
SentimentLexicon load_sentiment_lexicon(std::string_view bytes);
std::string save_sentiment_lexicon(const SentimentLexicon& lexicon);

inline constexpr std::size_t kNegationWindow = 2;

/// lex:sent:pos, lex:sent:neg, lex:sent:net, lex:sent:negations. A polar word
/// preceded by a negation within kNegationWindow tokens counts for the
/// opposite side.
FeatureVector sentiment_lexicon_features(std::span<const Token> tokens, const SentimentLexicon& lexicon);

// --- Word space --------------------------------------------------------------

class WordSpace {
 public:
  explicit WordSpace(std::size_t dim);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }

  /// Throws std::invalid_argument on duplicate word or wrong length.
  void add(std::string word, std::span<const double> vector);
  std::optional<std::span<const double>> find(std::string_view word) const;
  std::span<const double> vector_at(std::size_t index) const {
    return {data_.data() + index * dim_, dim_};
  }

  friend bool operator==(const WordSpace& a, const WordSpace& b) {
    return a.dim_ == b.dim_ && a.words_ == b.words_ && a.data_ == b.data_;
  }

 private:
  std::size_t dim_;
  std::vector<std::string> words_;
  std::vector<double> data_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Text format: header `EMTK-DSM1 <count> <dim>`, then one `word<TAB>v1<TAB>...`
/// record per word. Values use shortest round-trip notation.
std::string save_wordspace(const WordSpace& space);
WordSpace load_wordspace(std::string_view bytes);

inline constexpr std::size_t kDefaultWindow = 2;
inline constexpr std::size_t kIndexNonZeros = 8;

/// Seeded sparse ternary index vector of a word (kIndexNonZeros entries of
/// +1/-1, half each); depends only on (word, dim, seed).
std::vector<double> index_vector(std::string_view word, std::size_t dim, std::uint64_t seed);

/// Random indexing: a word's vector is the sum of the index vectors of every
/// token within `window` positions of its occurrences.
WordSpace build_wordspace(std::span<const Document> corpus, std::size_t dim, std::size_t window,
                          std::uint64_t seed);

/// Mean vector of the in-vocabulary tokens; zeros when none.
std::vector<double> document_vector(std::span<const Token> tokens, const WordSpace& space);
FeatureVector semantic_features(std::span<const Token> tokens, const WordSpace& space);

// --- Politeness and mood -----------------------------------------------------

/// Fraction of sentences containing a politeness marker (please, thanks,
/// thank you, sorry, could you, would you, ...). 0 for no sentences.
double politeness_score(std::span<const std::string> sentences);

enum class Mood : std::uint8_t { indicative, imperative, conditional };
std::string_view to_string(Mood m);

/// Per-sentence mood: modal or conditional markers -> conditional, a leading
/// base-form verb (optionally after "please") -> imperative, else indicative.
Mood sentence_mood(std::string_view sentence);

/// One-hot mood:<m> over the majority sentence mood (ties resolved in the
/// order indicative, imperative, conditional); empty for no sentences.
FeatureVector mood_features(std::span<const std::string> sentences);

// --- Assembly ----------------------------------------------------------------

enum class FeatureMode : char { all = 'A', semantic = 'S', lexicon = 'L', keyword = 'K' };
std::optional<FeatureMode> parse_feature_mode(std::string_view text);

struct FeatureConfig {
  FeatureMode mode = FeatureMode::all;
  bool politeness_mood = false;
  std::size_t vector_size = 600;
  std::optional<std::set<std::string, std::less<>>> unigram_allow;
  std::optional<std::set<std::string, std::less<>>> bigram_allow;
};

/// Non-owning view of the shared, immutable extraction resources.
struct FeatureResources {
  const NgramModel* ngrams = nullptr;
  const EmotionLexicon* emotions = nullptr;
  const SentimentLexicon* sentiment = nullptr;
  const WordSpace* space = nullptr;
};

enum Fragment : unsigned {
  kKeyword = 1u << 0,
  kLexicon = 1u << 1,
  kSemantic = 1u << 2,
  kPoliteness = 1u << 3,  // pol: and mood:
};

/// Fragments selected by a configuration: K, L, S alone, A = all three, plus
/// politeness/mood for A when enabled.
unsigned fragments_for(const FeatureConfig& config);

/// Throws ConfigError when a fragment lacks its resource (or the word space
/// dimension differs from config.vector_size).
void check_resources(unsigned fragments, const FeatureConfig& config, const FeatureResources& res);

FeatureVector assemble_fragments(std::string_view text, unsigned fragments,
                                 const FeatureConfig& config, const FeatureResources& res);
FeatureVector assemble_features(const Document& doc, const FeatureConfig& config,
                                const FeatureResources& res);

/// Every feature name the fragments can produce, sorted.
std::vector<std::string> feature_schema(unsigned fragments, const FeatureConfig& config,
                                        const FeatureResources& res);

}  // namespace emtk

#endif  // EMTK_FEATURES_HPP
