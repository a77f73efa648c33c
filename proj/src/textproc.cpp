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

#include "emtk/textproc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include <fmt/format.h>

#include "emtk/error.hpp"
#include "emtk/io.hpp"

namespace emtk {

namespace {

enum class CharClass { space, word, apostrophe, bang, question, other };

struct CodePoint {
  std::uint32_t value;
  std::size_t length;
};

CodePoint decode(std::string_view s, std::size_t i) {
  const auto c = static_cast<unsigned char>(s[i]);
  std::size_t len = c < 0x80 ? 1 : (c & 0xe0) == 0xc0 ? 2 : (c & 0xf0) == 0xe0 ? 3 : 4;
  if (i + len > s.size()) return {c, 1};
  std::uint32_t cp = len == 1 ? c : len == 2 ? (c & 0x1f) : len == 3 ? (c & 0x0f) : (c & 0x07);
  for (std::size_t k = 1; k < len; ++k) cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3f);
  return {cp, len};
}

CharClass classify(std::uint32_t cp) {
  if (cp < 0x80) {
    const char c = static_cast<char>(cp);
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') return CharClass::space;
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9')) return CharClass::word;
    if (c == '\'') return CharClass::apostrophe;
    if (c == '!') return CharClass::bang;
    if (c == '?') return CharClass::question;
    return CharClass::other;
  }
  switch (cp) {
    case 0x00a0: case 0x2002: case 0x2003: case 0x2009: case 0x3000:
      return CharClass::space;
    case 0x2018: case 0x2019:
      return CharClass::apostrophe;
    case 0x00ab: case 0x00bb: case 0x2013: case 0x2014: case 0x201c: case 0x201d: case 0x2026:
    case 0x00bf: case 0x00a1:
      return CharClass::other;
    default:
      return CharClass::word;
  }
}

bool starts_with_icase(std::string_view text, std::string_view prefix) {
  if (text.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    char c = text[i];
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (c != prefix[i]) return false;
  }
  return true;
}

bool is_url_start(std::string_view rest) {
  return starts_with_icase(rest, "http://") || starts_with_icase(rest, "https://") ||
         starts_with_icase(rest, "www.");
}

// Tokenizes one whitespace-free chunk.
void tokenize_chunk(std::string_view chunk, std::vector<Token>& out) {
  std::size_t i = 0;
  bool after_word = false;
  while (i < chunk.size()) {
    std::string_view rest = chunk.substr(i);
    if (rest.substr(0, kUrlToken.size()) == kUrlToken) {
      out.push_back({std::string(kUrlToken), 0});
      i += kUrlToken.size();
      after_word = false;
      continue;
    }
    if (!after_word && is_url_start(rest)) {
      out.push_back({std::string(kUrlToken), 0});
      return;
    }
    CodePoint cp = decode(chunk, i);
    CharClass cls = classify(cp.value);
    if (cls == CharClass::word || cls == CharClass::apostrophe) {
      std::string word;
      while (i < chunk.size()) {
        CodePoint c = decode(chunk, i);
        CharClass k = classify(c.value);
        if (k == CharClass::apostrophe) {
          word.push_back('\'');
        } else if (k == CharClass::word) {
          word.append(chunk.substr(i, c.length));
        } else {
          break;
        }
        i += c.length;
      }
      std::size_t first = word.find_first_not_of('\'');
      if (first != std::string::npos) {
        std::size_t last = word.find_last_not_of('\'');
        out.push_back({to_lower(std::string_view(word).substr(first, last - first + 1)), 0});
      }
      after_word = true;
      continue;
    }
    after_word = false;
    if (cls == CharClass::bang || cls == CharClass::question) {
      const char mark = cls == CharClass::bang ? '!' : '?';
      while (i < chunk.size() && chunk[i] == mark) ++i;
      out.push_back({std::string(1, mark), 0});
      continue;
    }
    i += cp.length;
  }
}

constexpr std::array<std::string_view, 18> kAbbreviations = {
    "e.g.", "i.e.", "eg.", "ie.", "vs.", "cf.", "mr.", "mrs.", "ms.",
    "dr.", "prof.", "approx.", "fig.", "no.", "st.", "jr.", "sr.", "a.k.a."};

bool is_abbreviation(std::string_view word) {
  while (!word.empty() && (word.front() == '(' || word.front() == '"' || word.front() == '\'')) {
    word.remove_prefix(1);
  }
  std::string lower = to_lower(word);
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), lower) != kAbbreviations.end();
}

bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    // Chunks are separated by any whitespace code point.
    CodePoint cp = decode(text, i);
    if (classify(cp.value) == CharClass::space) {
      i += cp.length;
      continue;
    }
    std::size_t start = i;
    while (i < text.size()) {
      CodePoint c = decode(text, i);
      if (classify(c.value) == CharClass::space) break;
      i += c.length;
    }
    tokenize_chunk(text.substr(start, i - start), tokens);
  }
  for (std::size_t k = 0; k < tokens.size(); ++k) tokens[k].position = k;
  return tokens;
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> sentences;
  std::size_t start = 0;
  const auto flush = [&](std::size_t end) {
    std::string_view s = trim(text.substr(start, end - start));
    if (!s.empty()) sentences.emplace_back(s);
    start = end;
  };
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c != '.' && c != '!' && c != '?') {
      ++i;
      continue;
    }
    std::size_t run_start = i;
    while (i < text.size() && (text[i] == '.' || text[i] == '!' || text[i] == '?')) ++i;
    while (i < text.size() && (text[i] == ')' || text[i] == '"' || text[i] == '\'')) ++i;
    if (i < text.size() && !is_ascii_space(text[i])) continue;
    if (text.substr(run_start, i - run_start) == ".") {
      std::size_t word_start = run_start;
      while (word_start > 0 && !is_ascii_space(text[word_start - 1])) --word_start;
      if (is_abbreviation(text.substr(word_start, i - word_start))) continue;
    }
    flush(i);
  }
  flush(text.size());
  return sentences;
}

std::vector<Token> tokenize_document(std::string_view text) {
  std::vector<Token> tokens;
  std::vector<std::string> sentences = split_sentences(text);
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    for (Token& t : tokenize(sentences[s])) {
      t.position = tokens.size();
      t.sentence = s;
      tokens.push_back(std::move(t));
    }
  }
  return tokens;
}

std::vector<std::string> extract_ngrams(std::span<const Token> tokens, int n) {
  std::vector<std::string> grams;
  if (n == 1) {
    grams.reserve(tokens.size());
    for (const Token& t : tokens) grams.push_back(t.surface);
    return grams;
  }
  if (n != 2) throw std::invalid_argument("extract_ngrams: n must be 1 or 2");
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    if (tokens[i].sentence != tokens[i + 1].sentence) continue;
    grams.push_back(tokens[i].surface + ' ' + tokens[i + 1].surface);
  }
  return grams;
}

// --- FeatureVector -----------------------------------------------------------

void FeatureVector::set(std::string name, double value) {
  if (value == 0.0) {
    entries_.erase(name);
    return;
  }
  entries_.insert_or_assign(std::move(name), value);
}

void FeatureVector::add(std::string_view name, double delta) {
  auto it = entries_.find(name);
  if (it == entries_.end()) {
    if (delta != 0.0) entries_.emplace(std::string(name), delta);
    return;
  }
  it->second += delta;
  if (it->second == 0.0) entries_.erase(it);
}

void FeatureVector::merge(const FeatureVector& other) {
  for (const auto& [name, value] : other.entries_) {
    if (!entries_.emplace(name, value).second) {
      throw std::logic_error("feature name collision: " + name);
    }
  }
}

double FeatureVector::get(std::string_view name) const {
  auto it = entries_.find(name);
  return it == entries_.end() ? 0.0 : it->second;
}

// --- NgramModel --------------------------------------------------------------

NgramModel build_ngram_model(std::span<const Document> corpus, std::size_t min_df) {
  if (corpus.empty()) throw DataError("cannot build an n-gram model from an empty corpus");
  std::map<std::string, std::size_t> df;
  for (const Document& doc : corpus) {
    std::vector<Token> tokens = tokenize_document(doc.text);
    std::set<std::string> seen;
    for (int n = 1; n <= 2; ++n) {
      for (std::string& g : extract_ngrams(tokens, n)) seen.insert(std::move(g));
    }
    for (const std::string& g : seen) ++df[g];
  }
  NgramModel model;
  model.documents = corpus.size();
  const double n_docs = static_cast<double>(corpus.size());
  for (const auto& [gram, count] : df) {
    if (count < std::max<std::size_t>(min_df, 1)) continue;
    (gram.find(' ') == std::string::npos ? model.unigrams : model.bigrams).push_back(gram);
    model.idf.emplace(gram, std::log(n_docs / static_cast<double>(count)));
  }
  return model;
}

FeatureVector tfidf_vector(std::span<const Token> tokens, const NgramModel& model) {
  FeatureVector out;
  for (int n = 1; n <= 2; ++n) {
    std::unordered_map<std::string, std::size_t> tf;
    for (std::string& g : extract_ngrams(tokens, n)) ++tf[std::move(g)];
    const std::string_view prefix = n == 1 ? "uni:" : "bi:";
    for (const auto& [gram, count] : tf) {
      auto it = model.idf.find(gram);
      if (it == model.idf.end()) continue;
      out.set(std::string(prefix) + gram, static_cast<double>(count) * it->second);
    }
  }
  return out;
}

FeatureVector tfidf_vector(const Document& doc, const NgramModel& model) {
  return tfidf_vector(tokenize_document(doc.text), model);
}

namespace {

std::string join_lines(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& item : items) {
    out += item;
    out.push_back('\n');
  }
  return out;
}

std::string idf_table(const NgramModel& model, const std::vector<std::string>& grams) {
  std::string out;
  for (const auto& g : grams) {
    out += g;
    out.push_back('\t');
    out += format_double(model.idf.at(g));
    out.push_back('\n');
  }
  return out;
}

std::map<std::string, double> parse_idf_table(std::string_view bytes, const std::string& name) {
  std::map<std::string, double> table;
  for (const auto& [number, line] : lines_of(bytes)) {
    std::size_t tab = line.rfind('\t');
    if (tab == std::string_view::npos) throw FormatError(name + ": expected 'ngram<TAB>idf'", number);
    double value = parse_double(line.substr(tab + 1));
    if (!(value >= 0.0)) throw FormatError(name + ": negative idf", number);
    if (!table.emplace(std::string(line.substr(0, tab)), value).second) {
      throw FormatError(name + ": duplicate entry", number);
    }
  }
  return table;
}

}  // namespace

void save_ngram_lists(const NgramModel& model, const std::filesystem::path& ngrams_dir) {
  write_file(ngrams_dir / kUnigramList, join_lines(model.unigrams));
  write_file(ngrams_dir / kBigramList, join_lines(model.bigrams));
}

void save_ngram_idfs(const NgramModel& model, const std::filesystem::path& idfs_dir) {
  write_file(idfs_dir / kUnigramIdf, idf_table(model, model.unigrams));
  write_file(idfs_dir / kBigramIdf, idf_table(model, model.bigrams));
}

std::vector<std::string> parse_ngram_list(std::string_view bytes) {
  std::vector<std::string> out;
  for (const auto& line : lines_of(bytes)) {
    std::string_view g = trim(line.text);
    if (!g.empty()) out.emplace_back(g);
  }
  return out;
}

NgramModel load_ngram_model(const std::filesystem::path& ngrams_dir,
                            const std::filesystem::path& idfs_dir) {
  NgramModel model;
  model.unigrams = parse_ngram_list(read_file(ngrams_dir / kUnigramList));
  model.bigrams = parse_ngram_list(read_file(ngrams_dir / kBigramList));
  std::sort(model.unigrams.begin(), model.unigrams.end());
  std::sort(model.bigrams.begin(), model.bigrams.end());
  auto uni = parse_idf_table(read_file(idfs_dir / kUnigramIdf), std::string(kUnigramIdf));
  auto bi = parse_idf_table(read_file(idfs_dir / kBigramIdf), std::string(kBigramIdf));

  const auto check = [](const std::vector<std::string>& list, const std::map<std::string, double>& table,
                        std::string_view what) {
    if (std::adjacent_find(list.begin(), list.end()) != list.end()) {
      throw FormatError(fmt::format("duplicate entry in {} list", what));
    }
    if (list.size() != table.size()) {
      throw FormatError(fmt::format("{} list has {} entries but idf table has {}", what,
                                    list.size(), table.size()));
    }
    for (const auto& g : list) {
      if (!table.count(g)) throw FormatError(fmt::format("{} '{}' has no idf", what, g));
    }
  };
  check(model.unigrams, uni, "unigram");
  check(model.bigrams, bi, "bigram");
  for (const auto& g : model.unigrams) {
    if (g.find(' ') != std::string::npos) throw FormatError("unigram contains a space: " + g);
  }
  for (const auto& g : model.bigrams) {
    if (std::count(g.begin(), g.end(), ' ') != 1) throw FormatError("malformed bigram: " + g);
  }
  model.idf.insert(uni.begin(), uni.end());
  model.idf.insert(bi.begin(), bi.end());
  return model;
}

}  // namespace emtk
