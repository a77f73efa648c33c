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

#include "emtk/corpus.hpp"

#include <algorithm>
#include <cstdlib>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>

#include "emtk/error.hpp"
#include "emtk/io.hpp"

namespace emtk {

namespace {

constexpr std::array<std::string_view, kEmotionCount> kEmotionNames = {
    "love", "joy", "surprise", "anger", "fear", "sadness"};
constexpr std::array<std::string_view, 3> kPolarityNames = {"positive", "negative", "neutral"};

// Offset of the first byte that breaks UTF-8 well-formedness, or npos.
std::size_t invalid_utf8_offset(std::string_view s) {
  std::size_t i = 0;
  const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(s[k]); };
  while (i < s.size()) {
    unsigned char c = byte(i);
    std::size_t len = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xe0) == 0xc0) {
      len = 2;
      cp = c & 0x1f;
    } else if ((c & 0xf0) == 0xe0) {
      len = 3;
      cp = c & 0x0f;
    } else if ((c & 0xf8) == 0xf0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return i;
    }
    if (i + len > s.size()) return i;
    for (std::size_t k = 1; k < len; ++k) {
      if ((byte(i + k) & 0xc0) != 0x80) return i;
      cp = (cp << 6) | (byte(i + k) & 0x3f);
    }
    const bool overlong = (len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
                          (len == 4 && cp < 0x10000);
    if (overlong || cp > 0x10ffff || (cp >= 0xd800 && cp <= 0xdfff)) return i;
    i += len;
  }
  return std::string_view::npos;
}

std::size_t line_at(std::string_view s, std::size_t offset) {
  return 1 + static_cast<std::size_t>(std::count(s.begin(), s.begin() + offset, '\n'));
}

bool is_header(const CsvRecord& record) {
  return !record.fields.empty() && to_lower(trim(record.fields.front())) == "id";
}

std::optional<bool> parse_flag(std::string_view text) {
  std::string v = to_lower(trim(text));
  if (v == "1" || v == "yes" || v == "true" || v == "y") return true;
  if (v == "0" || v == "no" || v == "false" || v == "n") return false;
  return std::nullopt;
}

void check_unique_id(std::unordered_set<std::string>& seen, const std::string& id, std::size_t line) {
  if (id.empty()) throw FormatError("empty document id", line);
  if (!seen.insert(id).second) throw FormatError(fmt::format("duplicate id '{}'", id), line);
}

}  // namespace

std::string_view to_string(Emotion e) { return kEmotionNames[static_cast<std::size_t>(e)]; }

std::optional<Emotion> parse_emotion(std::string_view name) {
  std::string lower = to_lower(trim(name));
  for (std::size_t i = 0; i < kEmotionCount; ++i) {
    if (lower == kEmotionNames[i]) return kEmotions[i];
  }
  return std::nullopt;
}

std::string_view to_string(Polarity p) { return kPolarityNames[static_cast<std::size_t>(p)]; }

std::optional<Polarity> parse_polarity(std::string_view name) {
  std::string lower = to_lower(trim(name));
  for (std::size_t i = 0; i < kPolarityNames.size(); ++i) {
    if (lower == kPolarityNames[i]) return static_cast<Polarity>(i);
  }
  return std::nullopt;
}

std::string_view to_string(PolarityOutcome p) {
  switch (p) {
    case PolarityOutcome::positive: return "positive";
    case PolarityOutcome::negative: return "negative";
    case PolarityOutcome::neutral: return "neutral";
    case PolarityOutcome::discarded: return "discarded";
  }
  return "?";
}

std::optional<Delimiter> parse_delimiter(std::string_view flag) {
  if (flag == "c") return Delimiter::comma;
  if (flag == "sc") return Delimiter::semicolon;
  return std::nullopt;
}

std::optional<bool> parse_yes_no(std::string_view label) {
  std::string v = to_lower(trim(label));
  if (v == "yes") return true;
  if (v == "no") return false;
  return std::nullopt;
}

// --- CSV -------------------------------------------------------------------

std::vector<CsvRecord> parse_csv(std::string_view bytes, char delimiter) {
  if (bytes.substr(0, 3) == "\xEF\xBB\xBF") {
    throw FormatError("input begins with a UTF-8 byte-order mark; save it as UTF-8 without BOM", 1);
  }
  if (std::size_t bad = invalid_utf8_offset(bytes); bad != std::string_view::npos) {
    throw FormatError("invalid UTF-8 byte sequence", line_at(bytes, bad));
  }

  std::vector<CsvRecord> records;
  const std::size_t n = bytes.size();
  std::size_t i = 0;
  std::size_t line = 1;
  const auto at_field_end = [&](std::size_t k) {
    return k >= n || bytes[k] == delimiter || bytes[k] == '\n' || bytes[k] == '\r';
  };

  while (i < n) {
    CsvRecord record{line, {}};
    const std::size_t record_start = i;
    while (true) {
      std::string field;
      if (i < n && bytes[i] == '"') {
        const bool wrapped = i + 2 < n && bytes[i + 1] == '"' && bytes[i + 2] != '"' &&
                             !at_field_end(i + 2);
        if (wrapped) {
          // ""text"" : literal content up to a closing "" at a field boundary.
          std::size_t k = i + 2;
          while (true) {
            std::size_t close = bytes.find("\"\"", k);
            if (close == std::string_view::npos) {
              throw FormatError("unterminated \"\"-wrapped field", record.line);
            }
            if (at_field_end(close + 2)) {
              field.assign(bytes.substr(i + 2, close - i - 2));
              line += static_cast<std::size_t>(std::count(field.begin(), field.end(), '\n'));
              i = close + 2;
              break;
            }
            k = close + 1;
          }
        } else {
          ++i;
          while (true) {
            if (i >= n) throw FormatError("unterminated quoted field", record.line);
            char c = bytes[i];
            if (c == '"') {
              if (i + 1 < n && bytes[i + 1] == '"') {
                field.push_back('"');
                i += 2;
                continue;
              }
              ++i;
              break;
            }
            if (c == '\n') ++line;
            field.push_back(c);
            ++i;
          }
          if (!at_field_end(i)) throw FormatError("unexpected character after closing quote", line);
        }
      } else {
        std::size_t start = i;
        while (i < n && bytes[i] != delimiter && bytes[i] != '\n') ++i;
        std::string_view raw = bytes.substr(start, i - start);
        if (!raw.empty() && raw.back() == '\r' && (i >= n || bytes[i] == '\n')) raw.remove_suffix(1);
        field.assign(raw);
      }
      record.fields.push_back(std::move(field));

      if (i < n && bytes[i] == delimiter) {
        ++i;
        continue;
      }
      if (i < n && bytes[i] == '\r') ++i;
      if (i < n && bytes[i] == '\n') {
        ++i;
        ++line;
      }
      break;
    }
    const bool blank = record.fields.size() == 1 && record.fields.front().empty() &&
                       trim(bytes.substr(record_start, i - record_start)).empty();
    if (!blank) records.push_back(std::move(record));
  }
  return records;
}

std::vector<Document> parse_corpus(std::string_view bytes, Delimiter delimiter, bool has_label) {
  std::vector<CsvRecord> records = parse_csv(bytes, static_cast<char>(delimiter));
  const std::size_t expected = has_label ? 3 : 2;
  std::vector<Document> docs;
  docs.reserve(records.size());
  std::unordered_set<std::string> seen;
  for (std::size_t r = 0; r < records.size(); ++r) {
    CsvRecord& rec = records[r];
    if (r == 0 && is_header(rec)) continue;
    if (rec.fields.size() != expected) {
      throw FormatError(fmt::format("expected {} columns ({}), found {}", expected,
                                    has_label ? "id, label, text" : "id, text", rec.fields.size()),
                        rec.line);
    }
    Document doc;
    doc.id = std::move(rec.fields[0]);
    check_unique_id(seen, doc.id, rec.line);
    if (has_label) {
      doc.gold = std::move(rec.fields[1]);
      doc.text = std::move(rec.fields[2]);
    } else {
      doc.text = std::move(rec.fields[1]);
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::size_t detect_columns(std::string_view bytes, Delimiter delimiter) {
  std::vector<CsvRecord> records = parse_csv(bytes, static_cast<char>(delimiter));
  for (std::size_t r = 0; r < records.size(); ++r) {
    if (r == 0 && is_header(records[r])) continue;
    return records[r].fields.size();
  }
  return 0;
}

std::string quote_field(std::string_view field, char delimiter) {
  const bool needs_quotes = field.find_first_of(std::string{delimiter, '"', '\n', '\r'}) !=
                            std::string_view::npos;
  if (!needs_quotes) return std::string(field);
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string serialize_corpus(std::span<const Document> docs, Delimiter delimiter, bool has_label) {
  const char d = static_cast<char>(delimiter);
  std::string out;
  for (const Document& doc : docs) {
    out += quote_field(doc.id, d);
    out.push_back(d);
    if (has_label) {
      out += quote_field(doc.gold.value_or(""), d);
      out.push_back(d);
    }
    out += quote_field(doc.text, d);
    out.push_back('\n');
  }
  return out;
}

// --- Annotations -----------------------------------------------------------

bool majority_vote(const AnnotationSet& annotations, Emotion emotion) {
  const auto e = static_cast<std::size_t>(emotion);
  std::size_t votes = 0;
  for (const auto& rater : annotations.raters) votes += rater[e] ? 1 : 0;
  return 2 * votes > annotations.raters.size();
}

EmotionSet gold_emotions(const AnnotationSet& annotations) {
  EmotionSet gold;
  for (Emotion e : kEmotions) {
    if (majority_vote(annotations, e)) gold.insert(e);
  }
  return gold;
}

PolarityOutcome emotions_to_polarity(EmotionSet gold) {
  if (gold.contains(Emotion::surprise)) return PolarityOutcome::discarded;
  const bool positive = gold.contains(Emotion::love) || gold.contains(Emotion::joy);
  const bool negative = gold.contains(Emotion::anger) || gold.contains(Emotion::fear) ||
                        gold.contains(Emotion::sadness);
  if (positive && negative) return PolarityOutcome::discarded;
  if (positive) return PolarityOutcome::positive;
  if (negative) return PolarityOutcome::negative;
  return PolarityOutcome::neutral;
}

int percent_half_up(std::size_t count, std::size_t total) {
  if (total == 0) throw DataError("percentage of an empty total");
  return static_cast<int>((200 * count + total) / (2 * total));
}

DatasetStats dataset_stats(std::span<const EmotionSet> gold) {
  if (gold.empty()) throw DataError("dataset_stats: empty corpus");
  DatasetStats stats;
  stats.total = gold.size();
  for (EmotionSet set : gold) {
    for (std::size_t e = 0; e < kEmotionCount; ++e) {
      if (set.contains(kEmotions[e])) ++stats.emotion_counts[e];
    }
    PolarityOutcome p = emotions_to_polarity(set);
    if (p == PolarityOutcome::discarded) {
      ++stats.discarded;
    } else {
      ++stats.polarity_counts[static_cast<std::size_t>(p)];
    }
  }
  for (std::size_t e = 0; e < kEmotionCount; ++e) {
    stats.emotion_percent[e] = percent_half_up(stats.emotion_counts[e], stats.total);
  }
  const std::size_t base = stats.total - stats.discarded;
  if (base > 0) {
    for (std::size_t p = 0; p < 3; ++p) {
      stats.polarity_percent[p] = percent_half_up(stats.polarity_counts[p], base);
    }
  }
  return stats;
}

const ReferenceBreakdown& stack_overflow_reference() {
  static const ReferenceBreakdown ref{
      "Stack Overflow",
      4800,
      {1220, 491, 45, 882, 230, 106},
      {25, 10, 1, 18, 5, 2},
      {35, 27, 38},
  };
  return ref;
}

const ReferenceBreakdown& jira_reference() {
  // N is only known approximately (~4,000).
  static const ReferenceBreakdown ref{
      "Jira",
      4000,
      {166, 124, std::nullopt, 324, std::nullopt, 302},
      {4, 3, std::nullopt, 8, std::nullopt, 7},
      {19, 13, 68},
  };
  return ref;
}

std::array<std::optional<int>, kEmotionCount> reference_percentages(const ReferenceBreakdown& ref) {
  std::array<std::optional<int>, kEmotionCount> out;
  for (std::size_t e = 0; e < kEmotionCount; ++e) {
    if (ref.counts[e]) out[e] = percent_half_up(*ref.counts[e], ref.total);
  }
  return out;
}

std::vector<std::string> compare_emotion_percentages(const DatasetStats& stats,
                                                      const ReferenceBreakdown& ref,
                                                      int tolerance_pp) {
  std::vector<std::string> problems;
  for (std::size_t e = 0; e < kEmotionCount; ++e) {
    if (!ref.percent[e]) continue;
    const int got = stats.emotion_percent[e];
    if (std::abs(got - *ref.percent[e]) > tolerance_pp) {
      problems.push_back(fmt::format("{} {}: {}% vs reference {}%", ref.name,
                                     to_string(kEmotions[e]), got, *ref.percent[e]));
    }
  }
  return problems;
}

std::vector<std::string> compare_polarity_percentages(const DatasetStats& stats,
                                                       const ReferenceBreakdown& ref,
                                                       int tolerance_pp) {
  std::vector<std::string> problems;
  for (std::size_t p = 0; p < 3; ++p) {
    const int got = stats.polarity_percent[p];
    if (std::abs(got - ref.polarity_percent[p]) > tolerance_pp) {
      problems.push_back(fmt::format("{} {}: {}% vs reference {}%", ref.name,
                                     to_string(static_cast<Polarity>(p)), got,
                                     ref.polarity_percent[p]));
    }
  }
  return problems;
}

// --- Multi-label gold files --------------------------------------------------

std::vector<EmotionGoldDocument> parse_emotion_gold(std::string_view bytes, Delimiter delimiter,
                                                    EmotionSchema schema) {
  static constexpr std::array<Emotion, 6> full = {Emotion::love, Emotion::joy, Emotion::surprise,
                                                  Emotion::anger, Emotion::fear, Emotion::sadness};
  static constexpr std::array<Emotion, 4> jira = {Emotion::love, Emotion::joy, Emotion::anger,
                                                  Emotion::sadness};
  std::span<const Emotion> columns =
      schema == EmotionSchema::full ? std::span<const Emotion>(full) : std::span<const Emotion>(jira);

  std::vector<CsvRecord> records = parse_csv(bytes, static_cast<char>(delimiter));
  std::vector<EmotionGoldDocument> docs;
  std::unordered_set<std::string> seen;
  for (std::size_t r = 0; r < records.size(); ++r) {
    CsvRecord& rec = records[r];
    if (r == 0 && is_header(rec)) continue;
    if (rec.fields.size() != columns.size() + 2) {
      throw FormatError(fmt::format("expected {} columns, found {}", columns.size() + 2,
                                    rec.fields.size()),
                        rec.line);
    }
    EmotionGoldDocument doc;
    doc.id = std::move(rec.fields.front());
    check_unique_id(seen, doc.id, rec.line);
    for (std::size_t c = 0; c < columns.size(); ++c) {
      std::optional<bool> flag = parse_flag(rec.fields[c + 1]);
      if (!flag) {
        throw FormatError(fmt::format("bad {} flag '{}'", to_string(columns[c]), rec.fields[c + 1]),
                          rec.line);
      }
      if (*flag) doc.gold.insert(columns[c]);
    }
    doc.text = std::move(rec.fields.back());
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::vector<std::pair<std::string, AnnotationSet>> parse_annotations(std::string_view bytes,
                                                                     Delimiter delimiter) {
  std::vector<CsvRecord> records = parse_csv(bytes, static_cast<char>(delimiter));
  std::vector<std::pair<std::string, AnnotationSet>> out;
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t r = 0; r < records.size(); ++r) {
    const CsvRecord& rec = records[r];
    if (r == 0 && is_header(rec)) continue;
    if (rec.fields.size() != kEmotionCount + 2) {
      throw FormatError(fmt::format("expected {} columns, found {}", kEmotionCount + 2,
                                    rec.fields.size()),
                        rec.line);
    }
    if (rec.fields[0].empty()) throw FormatError("empty document id", rec.line);
    std::array<bool, kEmotionCount> flags{};
    for (std::size_t e = 0; e < kEmotionCount; ++e) {
      std::optional<bool> flag = parse_flag(rec.fields[e + 2]);
      if (!flag) throw FormatError(fmt::format("bad flag '{}'", rec.fields[e + 2]), rec.line);
      flags[e] = *flag;
    }
    auto [it, inserted] = index.try_emplace(rec.fields[0], out.size());
    if (inserted) out.emplace_back(rec.fields[0], AnnotationSet{});
    out[it->second].second.raters.push_back(flags);
  }
  return out;
}

std::vector<Document> project_emotion(std::span<const EmotionGoldDocument> docs, Emotion emotion) {
  std::vector<Document> out;
  out.reserve(docs.size());
  for (const auto& doc : docs) {
    out.push_back({doc.id, doc.text, std::string(doc.gold.contains(emotion) ? "YES" : "NO")});
  }
  return out;
}

std::vector<Document> project_polarity(std::span<const EmotionGoldDocument> docs) {
  std::vector<Document> out;
  for (const auto& doc : docs) {
    PolarityOutcome p = emotions_to_polarity(doc.gold);
    if (p == PolarityOutcome::discarded) continue;
    out.push_back({doc.id, doc.text, std::string(to_string(p))});
  }
  return out;
}

}  // namespace emtk
