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

// Corpus ingestion: CSV parsing, gold labels from rater annotations, the
// emotion-to-polarity mapping and dataset statistics.

#ifndef EMTK_CORPUS_HPP
#define EMTK_CORPUS_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace emtk {

struct Document {
  std::string id;
  std::string text;
  std::optional<std::string> gold;

  friend bool operator==(const Document&, const Document&) = default;
};

enum class Emotion : std::uint8_t { love, joy, surprise, anger, fear, sadness };
inline constexpr std::size_t kEmotionCount = 6;
inline constexpr std::array<Emotion, kEmotionCount> kEmotions = {
    Emotion::love, Emotion::joy, Emotion::surprise, Emotion::anger, Emotion::fear, Emotion::sadness};

std::string_view to_string(Emotion e);
std::optional<Emotion> parse_emotion(std::string_view name);

enum class Polarity : std::uint8_t { positive, negative, neutral };
std::string_view to_string(Polarity p);
std::optional<Polarity> parse_polarity(std::string_view name);

/// Set of emotions flagged for one document (bit i = kEmotions[i]).
class EmotionSet {
 public:
  constexpr EmotionSet() = default;
  constexpr EmotionSet(std::initializer_list<Emotion> emotions) {
    for (Emotion e : emotions) insert(e);
  }
  static constexpr EmotionSet from_mask(std::uint8_t mask) {
    EmotionSet s;
    s.mask_ = static_cast<std::uint8_t>(mask & 0x3f);
    return s;
  }

  constexpr void insert(Emotion e) { mask_ |= bit(e); }
  constexpr bool contains(Emotion e) const { return (mask_ & bit(e)) != 0; }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr std::uint8_t mask() const { return mask_; }

  friend constexpr bool operator==(EmotionSet, EmotionSet) = default;

 private:
  static constexpr std::uint8_t bit(Emotion e) {
    return static_cast<std::uint8_t>(1u << static_cast<unsigned>(e));
  }
  std::uint8_t mask_ = 0;
};

enum class Delimiter : char { comma = ',', semicolon = ';' };
/// CLI spelling: `c` or `sc`.
std::optional<Delimiter> parse_delimiter(std::string_view flag);

/// Parses `id;label;text` (has_label) or `id;text` rows. Quoted fields use
/// doubled quotes as escape; the `""text""` wrapping of exported corpora is
/// accepted as well. A first row whose first cell is `id` is a header.
/// Throws FormatError (BOM, invalid UTF-8, wrong column count, duplicate or
/// empty id) with the 1-based line where the record starts.
std::vector<Document> parse_corpus(std::string_view bytes, Delimiter delimiter, bool has_label);

/// Column count of the first data row (header skipped), 0 for an empty body.
std::size_t detect_columns(std::string_view bytes, Delimiter delimiter);

/// Inverse of parse_corpus (no header row).
std::string serialize_corpus(std::span<const Document> docs, Delimiter delimiter, bool has_label);

/// Quotes a single CSV field when needed.
std::string quote_field(std::string_view field, char delimiter);

/// Raw CSV records; exposed for other tabular readers.
struct CsvRecord {
  std::size_t line;
  std::vector<std::string> fields;
};
std::vector<CsvRecord> parse_csv(std::string_view bytes, char delimiter);

// --- Annotations -----------------------------------------------------------

/// Presence flags per emotion, one row per rater.
struct AnnotationSet {
  std::vector<std::array<bool, kEmotionCount>> raters;
};

/// True iff strictly more than half of the raters flagged the emotion.
bool majority_vote(const AnnotationSet& annotations, Emotion emotion);
EmotionSet gold_emotions(const AnnotationSet& annotations);

enum class PolarityOutcome : std::uint8_t { positive, negative, neutral, discarded };
std::string_view to_string(PolarityOutcome p);

/// love/joy -> positive, anger/fear/sadness -> negative, none -> neutral.
/// Surprise, or a mix of positive and negative emotions, is discarded.
PolarityOutcome emotions_to_polarity(EmotionSet gold);

struct DatasetStats {
  std::size_t total = 0;
  std::array<std::size_t, kEmotionCount> emotion_counts{};
  std::array<int, kEmotionCount> emotion_percent{};
  // Indexed by Polarity; discarded documents are excluded from the base.
  std::array<std::size_t, 3> polarity_counts{};
  std::array<int, 3> polarity_percent{};
  std::size_t discarded = 0;
};

/// Integer percentage rounded half-up.
int percent_half_up(std::size_t count, std::size_t total);

DatasetStats dataset_stats(std::span<const EmotionSet> gold);

/// Reference breakdown of a published dataset. Missing entries are NA.
struct ReferenceBreakdown {
  std::string name;
  std::size_t total;
  std::array<std::optional<std::size_t>, kEmotionCount> counts;
  std::array<std::optional<int>, kEmotionCount> percent;
  std::array<int, 3> polarity_percent;  // indexed by Polarity
};

const ReferenceBreakdown& stack_overflow_reference();
const ReferenceBreakdown& jira_reference();

/// Percentages recomputed from the reference counts and its N.
std::array<std::optional<int>, kEmotionCount> reference_percentages(const ReferenceBreakdown& ref);

/// Human-readable mismatches between computed emotion percentages and the
/// reference, allowing `tolerance_pp` percentage points. Empty when matching.
std::vector<std::string> compare_emotion_percentages(const DatasetStats& stats,
                                                      const ReferenceBreakdown& ref,
                                                      int tolerance_pp);
std::vector<std::string> compare_polarity_percentages(const DatasetStats& stats,
                                                       const ReferenceBreakdown& ref,
                                                       int tolerance_pp);

// --- Multi-label gold files --------------------------------------------------

enum class EmotionSchema {
  full,  // id;love;joy;surprise;anger;fear;sadness;text
  jira,  // id;love;joy;anger;sadness;text  (surprise and fear are NA)
};

struct EmotionGoldDocument {
  std::string id;
  std::string text;
  EmotionSet gold;
};

/// Flags accept 1/0, yes/no, true/false (case-insensitive).
std::vector<EmotionGoldDocument> parse_emotion_gold(std::string_view bytes, Delimiter delimiter,
                                                    EmotionSchema schema);

/// Rater file rows: `id;rater;love;joy;surprise;anger;fear;sadness`.
/// Returns annotations grouped by id in first-appearance order.
std::vector<std::pair<std::string, AnnotationSet>> parse_annotations(std::string_view bytes,
                                                                     Delimiter delimiter);

/// Projects a multi-label corpus onto one emotion as YES/NO documents.
std::vector<Document> project_emotion(std::span<const EmotionGoldDocument> docs, Emotion emotion);

/// Polarity documents; discarded ones are dropped.
std::vector<Document> project_polarity(std::span<const EmotionGoldDocument> docs);

/// YES/NO normalization of binary gold labels; nullopt for anything else.
std::optional<bool> parse_yes_no(std::string_view label);

}  // namespace emtk

#endif  // EMTK_CORPUS_HPP
