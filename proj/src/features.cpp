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

#include "emtk/features.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "emtk/error.hpp"
#include "emtk/io.hpp"

namespace emtk {

// --- Emotion lexicon ---------------------------------------------------------

std::vector<std::string> EmotionLexicon::all_words() const {
  std::set<std::string, std::less<>> all;
  for (const auto& set : words) all.insert(set.begin(), set.end());
  return {all.begin(), all.end()};
}

EmotionLexicon load_emotion_lexicon(std::string_view bytes) {
  EmotionLexicon lexicon;
  for (const auto& [number, line] : lines_of(bytes)) {
    if (trim(line).empty() || trim(line).front() == '#') continue;
    auto parts = split(line, '\t');
    if (parts.size() != 2 || trim(parts[1]).empty()) {
      throw FormatError("expected 'emotion<TAB>word'", number);
    }
    std::optional<Emotion> e = parse_emotion(parts[0]);
    if (!e) throw FormatError(fmt::format("unknown emotion '{}'", trim(parts[0])), number);
    lexicon.words[static_cast<std::size_t>(*e)].insert(to_lower(trim(parts[1])));
  }
  return lexicon;
}

std::string save_emotion_lexicon(const EmotionLexicon& lexicon) {
  std::string out;
  for (Emotion e : kEmotions) {
    for (const auto& w : lexicon.words_for(e)) out += fmt::format("{}\t{}\n", to_string(e), w);
  }
  return out;
}

std::map<std::string, double, std::less<>> emotion_word_idf(const EmotionLexicon& lexicon,
                                                             std::span<const Document> corpus) {
  if (corpus.empty()) throw DataError("cannot compute idf over an empty corpus");
  std::map<std::string, std::size_t, std::less<>> df;
  for (const auto& w : lexicon.all_words()) df.emplace(w, 0);
  for (const Document& doc : corpus) {
    std::set<std::string, std::less<>> seen;
    for (const Token& t : tokenize(doc.text)) {
      if (df.count(t.surface)) seen.insert(t.surface);
    }
    for (const auto& w : seen) ++df[w];
  }
  std::map<std::string, double, std::less<>> idf;
  const double n = static_cast<double>(corpus.size());
  for (const auto& [word, count] : df) {
    idf.emplace(word, std::log(n / static_cast<double>(std::max<std::size_t>(count, 1))));
  }
  return idf;
}

std::string save_word_idf(const std::map<std::string, double, std::less<>>& idf) {
  std::string out;
  for (const auto& [word, value] : idf) out += word + '\t' + format_double(value) + '\n';
  return out;
}

std::map<std::string, double, std::less<>> load_word_idf(std::string_view bytes) {
  std::map<std::string, double, std::less<>> idf;
  for (const auto& [number, line] : lines_of(bytes)) {
    auto parts = split(line, '\t');
    if (parts.size() != 2) throw FormatError("expected 'word<TAB>idf'", number);
    double value = parse_double(parts[1]);
    if (!(value >= 0.0)) throw FormatError("negative idf", number);
    idf.insert_or_assign(std::string(parts[0]), value);
  }
  return idf;
}

FeatureVector emotion_lexicon_features(std::span<const Token> tokens, const EmotionLexicon& lexicon) {
  std::array<double, kEmotionCount> sums{};
  for (const Token& t : tokens) {
    double weight = 1.0;
    bool weighted = false;
    for (std::size_t e = 0; e < kEmotionCount; ++e) {
      if (!lexicon.words[e].contains(t.surface)) continue;
      if (!weighted && lexicon.idf) {
        auto it = lexicon.idf->find(t.surface);
        if (it != lexicon.idf->end()) weight = it->second;
        weighted = true;
      }
      sums[e] += weight;
    }
  }
  FeatureVector out;
  for (std::size_t e = 0; e < kEmotionCount; ++e) {
    out.set(fmt::format("lex:emo:{}", to_string(kEmotions[e])), sums[e]);
  }
  return out;
}

// --- Sentiment lexicon -------------------------------------------------------

SentimentLexicon load_sentiment_lexicon(std::string_view bytes) {
  SentimentLexicon lexicon;
  for (const auto& [number, line] : lines_of(bytes)) {
    if (trim(line).empty() || trim(line).front() == '#') continue;
    auto parts = split(line, '\t');
    if (parts.size() != 2 || trim(parts[1]).empty()) {
      throw FormatError("expected 'class<TAB>word'", number);
    }
    std::string cls = to_lower(trim(parts[0]));
    std::string word = to_lower(trim(parts[1]));
    if (cls == "positive") {
      lexicon.positive.insert(word);
    } else if (cls == "negative") {
      lexicon.negative.insert(word);
    } else if (cls == "negation") {
      lexicon.negation.insert(word);
    } else {
      throw FormatError(fmt::format("unknown sentiment class '{}'", cls), number);
    }
    if (lexicon.positive.contains(word) && lexicon.negative.contains(word)) {
      throw FormatError(fmt::format("'{}' is listed as both positive and negative", word), number);
    }
  }
  return lexicon;
}

std::string save_sentiment_lexicon(const SentimentLexicon& lexicon) {
  std::string out;
  for (const auto& w : lexicon.positive) out += "positive\t" + w + "\n";
  for (const auto& w : lexicon.negative) out += "negative\t" + w + "\n";
  for (const auto& w : lexicon.negation) out += "negation\t" + w + "\n";
  return out;
}

FeatureVector sentiment_lexicon_features(std::span<const Token> tokens, const SentimentLexicon& lexicon) {
  double pos = 0, neg = 0, negations = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string& w = tokens[i].surface;
    if (lexicon.negation.contains(w)) {
      ++negations;
      continue;
    }
    const bool is_pos = lexicon.positive.contains(w);
    const bool is_neg = lexicon.negative.contains(w);
    if (!is_pos && !is_neg) continue;
    bool negated = false;
    for (std::size_t back = 1; back <= kNegationWindow && back <= i; ++back) {
      if (lexicon.negation.contains(tokens[i - back].surface)) negated = true;
    }
    (is_pos != negated ? pos : neg) += 1;
  }
  FeatureVector out;
  out.set("lex:sent:pos", pos);
  out.set("lex:sent:neg", neg);
  out.set("lex:sent:net", pos - neg);
  out.set("lex:sent:negations", negations);
  return out;
}

// --- Politeness and mood -----------------------------------------------------

namespace {

const std::set<std::string, std::less<>>& politeness_words() {
  static const std::set<std::string, std::less<>> words = {
      "please", "pls", "plz", "thanks", "thank", "thx", "ty", "sorry", "apologies",
      "appreciate", "appreciated", "grateful", "kindly"};
  return words;
}

const std::set<std::string, std::less<>>& politeness_pairs() {
  static const std::set<std::string, std::less<>> pairs = {"could you", "would you", "thank you",
                                                          "can you", "would it"};
  return pairs;
}

const std::set<std::string, std::less<>>& conditional_markers() {
  static const std::set<std::string, std::less<>> words = {
      "would", "could", "should", "might", "may", "if", "unless", "wish", "ought",
      "wouldn't", "couldn't", "shouldn't", "perhaps", "maybe"};
  return words;
}

const std::set<std::string, std::less<>>& imperative_verbs() {
  static const std::set<std::string, std::less<>> words = {
      "add", "avoid", "call", "change", "check", "close", "consider", "copy", "create",
      "delete", "do", "don't", "download", "edit", "enable", "disable", "fix", "follow",
      "give", "go", "help", "install", "keep", "let", "look", "make", "move", "note",
      "open", "post", "put", "read", "remove", "replace", "restart", "run", "see",
      "send", "set", "share", "show", "start", "stop", "take", "tell", "try", "update",
      "upgrade", "use", "write"};
  return words;
}

std::vector<std::string> sentence_words(std::string_view sentence) {
  std::vector<std::string> words;
  for (Token& t : tokenize(sentence)) {
    if (t.surface != "!" && t.surface != "?") words.push_back(std::move(t.surface));
  }
  return words;
}

}  // namespace

double politeness_score(std::span<const std::string> sentences) {
  if (sentences.empty()) return 0.0;
  std::size_t polite = 0;
  for (const std::string& s : sentences) {
    std::vector<std::string> words = sentence_words(s);
    bool marked = false;
    for (std::size_t i = 0; i < words.size() && !marked; ++i) {
      marked = politeness_words().contains(words[i]) ||
               (i + 1 < words.size() && politeness_pairs().contains(words[i] + ' ' + words[i + 1]));
    }
    polite += marked ? 1 : 0;
  }
  return static_cast<double>(polite) / static_cast<double>(sentences.size());
}

std::string_view to_string(Mood m) {
  switch (m) {
    case Mood::indicative: return "indicative";
    case Mood::imperative: return "imperative";
    case Mood::conditional: return "conditional";
  }
  return "?";
}

Mood sentence_mood(std::string_view sentence) {
  std::vector<std::string> words = sentence_words(sentence);
  for (const auto& w : words) {
    if (conditional_markers().contains(w)) return Mood::conditional;
  }
  std::size_t first = 0;
  while (first < words.size() &&
         (words[first] == "please" || words[first] == "pls" || words[first] == "just" ||
          words[first] == "kindly")) {
    ++first;
  }
  if (first < words.size() && imperative_verbs().contains(words[first])) return Mood::imperative;
  return Mood::indicative;
}

FeatureVector mood_features(std::span<const std::string> sentences) {
  FeatureVector out;
  if (sentences.empty()) return out;
  std::array<std::size_t, 3> counts{};
  for (const auto& s : sentences) ++counts[static_cast<std::size_t>(sentence_mood(s))];
  auto best = static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
  out.set(fmt::format("mood:{}", to_string(static_cast<Mood>(best))), 1.0);
  return out;
}

// --- Assembly ----------------------------------------------------------------

std::optional<FeatureMode> parse_feature_mode(std::string_view text) {
  if (text == "A") return FeatureMode::all;
  if (text == "S") return FeatureMode::semantic;
  if (text == "L") return FeatureMode::lexicon;
  if (text == "K") return FeatureMode::keyword;
  return std::nullopt;
}

unsigned fragments_for(const FeatureConfig& config) {
  switch (config.mode) {
    case FeatureMode::keyword: return kKeyword;
    case FeatureMode::lexicon: return kLexicon;
    case FeatureMode::semantic: return kSemantic;
    case FeatureMode::all:
      return kKeyword | kLexicon | kSemantic | (config.politeness_mood ? kPoliteness : 0u);
  }
  return 0;
}

void check_resources(unsigned fragments, const FeatureConfig& config, const FeatureResources& res) {
  if ((fragments & kKeyword) && !res.ngrams) {
    throw ConfigError("keyword features need an n-gram model");
  }
  if ((fragments & kLexicon) && !res.emotions && !res.sentiment) {
    throw ConfigError("lexicon features need an emotion or sentiment lexicon");
  }
  if (fragments & kSemantic) {
    if (!res.space) throw ConfigError("semantic features need a word space (-W)");
    if (res.space->dim() != config.vector_size) {
      throw ConfigError(fmt::format("word space has dimension {} but vector size is {}",
                                    res.space->dim(), config.vector_size));
    }
  }
}

FeatureVector assemble_fragments(std::string_view text, unsigned fragments,
                                 const FeatureConfig& config, const FeatureResources& res) {
  check_resources(fragments, config, res);
  std::vector<std::string> sentences = split_sentences(text);
  std::vector<Token> tokens;
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    for (Token& t : tokenize(sentences[s])) {
      t.position = tokens.size();
      t.sentence = s;
      tokens.push_back(std::move(t));
    }
  }

  FeatureVector out;
  if (fragments & kKeyword) {
    FeatureVector keywords = tfidf_vector(tokens, *res.ngrams);
    if (!config.unigram_allow && !config.bigram_allow) {
      out.merge(keywords);
    } else {
      for (const auto& [name, value] : keywords) {
        const bool uni = name.starts_with("uni:");
        std::string_view gram = std::string_view(name).substr(uni ? 4 : 3);
        const auto& allow = uni ? config.unigram_allow : config.bigram_allow;
        if (!allow || allow->contains(gram)) out.set(name, value);
      }
    }
  }
  if (fragments & kLexicon) {
    if (res.emotions) out.merge(emotion_lexicon_features(tokens, *res.emotions));
    if (res.sentiment) out.merge(sentiment_lexicon_features(tokens, *res.sentiment));
  }
  if (fragments & kSemantic) out.merge(semantic_features(tokens, *res.space));
  if (fragments & kPoliteness) {
    out.set("pol:score", politeness_score(sentences));
    out.merge(mood_features(sentences));
  }
  return out;
}

FeatureVector assemble_features(const Document& doc, const FeatureConfig& config,
                                const FeatureResources& res) {
  return assemble_fragments(doc.text, fragments_for(config), config, res);
}

std::vector<std::string> feature_schema(unsigned fragments, const FeatureConfig& config,
                                        const FeatureResources& res) {
  check_resources(fragments, config, res);
  std::vector<std::string> names;
  if (fragments & kKeyword) {
    for (const auto& u : res.ngrams->unigrams) {
      if (!config.unigram_allow || config.unigram_allow->contains(u)) names.push_back("uni:" + u);
    }
    for (const auto& b : res.ngrams->bigrams) {
      if (!config.bigram_allow || config.bigram_allow->contains(b)) names.push_back("bi:" + b);
    }
  }
  if (fragments & kLexicon) {
    if (res.emotions) {
      for (Emotion e : kEmotions) names.push_back(fmt::format("lex:emo:{}", to_string(e)));
    }
    if (res.sentiment) {
      for (const char* n : {"pos", "neg", "net", "negations"}) names.push_back(fmt::format("lex:sent:{}", n));
    }
  }
  if (fragments & kSemantic) {
    for (std::size_t i = 0; i < res.space->dim(); ++i) names.push_back(fmt::format("sem:{}", i));
  }
  if (fragments & kPoliteness) {
    names.emplace_back("pol:score");
    for (Mood m : {Mood::indicative, Mood::imperative, Mood::conditional}) {
      names.push_back(fmt::format("mood:{}", to_string(m)));
    }
  }
  std::sort(names.begin(), names.end());
  return names;
}

}  // namespace emtk
