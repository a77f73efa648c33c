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
#include <random>

#include "doctest.h"
#include "emtk/corpus.hpp"
#include "emtk/error.hpp"

using namespace emtk;

namespace {

std::string random_field(std::mt19937_64& rng, bool allow_empty) {
  static const std::vector<std::string> kPieces = {"a", "Z", "7", " ", ";", ",", "\"", "\n",
                                                   "é", "—", "''", "x y", "\"\"", "\r\n"};
  std::string out;
  std::size_t n = (allow_empty ? 0 : 1) + rng() % 8;
  for (std::size_t i = 0; i < n; ++i) out += kPieces[rng() % kPieces.size()];
  return out;
}

std::size_t error_line(std::string_view csv, Delimiter d, bool labeled) {
  try {
    parse_corpus(csv, d, labeled);
  } catch (const FormatError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("hand-parsed semicolon fixture") {
  const std::string csv =
      "id;label;text\n"
      "1;YES;plain text\n"
      "\n"
      "2;NO;\"with ; delimiter and \"\"quotes\"\"\"\n"
      "3;NO;\"multi\nline\"\r\n"
      "4;YES;\"\"wrapped \"text\" here\"\"\n";
  auto docs = parse_corpus(csv, Delimiter::semicolon, true);
  REQUIRE(docs.size() == 4);
  CHECK(docs[0] == Document{"1", "plain text", "YES"});
  CHECK(docs[1] == Document{"2", "with ; delimiter and \"quotes\"", "NO"});
  CHECK(docs[2] == Document{"3", "multi\nline", "NO"});
  CHECK(docs[3] == Document{"4", "wrapped \"text\" here", "YES"});
}

TEST_CASE("comma delimiter without labels") {
  auto docs = parse_corpus("a,\"hello, world\"\nb,bye\n", Delimiter::comma, false);
  REQUIRE(docs.size() == 2);
  CHECK(docs[0] == Document{"a", "hello, world", std::nullopt});
  CHECK(docs[1].text == "bye");
  CHECK(detect_columns("id,text\na,b\n", Delimiter::comma) == 2);
  CHECK(detect_columns("", Delimiter::comma) == 0);
}

TEST_CASE("malformed input reports the starting line") {
  CHECK(error_line("\xEF\xBB\xBFid;text\n1;x\n", Delimiter::semicolon, false) == 1);
  CHECK(error_line("1;x\n2;y\n3;z;extra\n", Delimiter::semicolon, false) == 3);
  CHECK(error_line("1;x\n2;\"unterminated\n", Delimiter::semicolon, false) == 2);
  CHECK(error_line("1;x\n1;y\n", Delimiter::semicolon, false) == 2);
  CHECK(error_line("1;x\n2;bad \xff byte\n", Delimiter::semicolon, false) == 2);
  CHECK(error_line(";x\n", Delimiter::semicolon, false) == 1);
  CHECK(error_line("1;\"a\"b\n", Delimiter::semicolon, false) == 1);
}

TEST_CASE("serialize then parse is the identity for both delimiters") {
  std::mt19937_64 rng(7);
  for (Delimiter d : {Delimiter::semicolon, Delimiter::comma}) {
    for (int round = 0; round < 200; ++round) {
      std::vector<Document> docs;
      std::size_t n = 1 + rng() % 6;
      for (std::size_t i = 0; i < n; ++i) {
        docs.push_back({"d" + std::to_string(i) + random_field(rng, true), random_field(rng, true),
                        random_field(rng, true)});
      }
      auto back = parse_corpus(serialize_corpus(docs, d, true), d, true);
      REQUIRE(back == docs);
      for (auto& doc : docs) doc.gold.reset();
      REQUIRE(parse_corpus(serialize_corpus(docs, d, false), d, false) == docs);
    }
  }
}

TEST_CASE("quote_field only quotes when needed") {
  CHECK(quote_field("plain", ';') == "plain");
  CHECK(quote_field("a;b", ';') == "\"a;b\"");
  CHECK(quote_field("a;b", ',') == "a;b");
  CHECK(quote_field("say \"hi\"", ',') == "\"say \"\"hi\"\"\"");
}

TEST_CASE("majority vote needs more than half of the raters") {
  AnnotationSet a;
  a.raters = {{true, false, false, false, false, false},
              {true, true, false, false, false, false},
              {false, true, false, false, false, true}};
  CHECK(majority_vote(a, Emotion::love));
  CHECK(majority_vote(a, Emotion::joy));
  CHECK_FALSE(majority_vote(a, Emotion::sadness));
  AnnotationSet two;
  two.raters = {{true, false, false, false, false, false}, {false, false, false, false, false, false}};
  CHECK_FALSE(majority_vote(two, Emotion::love));
}

TEST_CASE("majority vote is invariant under rater permutation") {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 200; ++round) {
    AnnotationSet a;
    std::size_t raters = 1 + rng() % 5;
    for (std::size_t r = 0; r < raters; ++r) {
      std::array<bool, kEmotionCount> row{};
      for (auto& f : row) f = rng() % 2;
      a.raters.push_back(row);
    }
    EmotionSet before = gold_emotions(a);
    std::shuffle(a.raters.begin(), a.raters.end(), rng);
    CHECK(gold_emotions(a) == before);
  }
}

TEST_CASE("emotion to polarity rules") {
  using E = Emotion;
  CHECK(emotions_to_polarity({}) == PolarityOutcome::neutral);
  CHECK(emotions_to_polarity({E::love}) == PolarityOutcome::positive);
  CHECK(emotions_to_polarity({E::joy, E::love}) == PolarityOutcome::positive);
  CHECK(emotions_to_polarity({E::fear, E::anger}) == PolarityOutcome::negative);
  CHECK(emotions_to_polarity({E::surprise}) == PolarityOutcome::discarded);
  CHECK(emotions_to_polarity({E::joy, E::surprise}) == PolarityOutcome::discarded);
  CHECK(emotions_to_polarity({E::joy, E::sadness}) == PolarityOutcome::discarded);
}

TEST_CASE("percent_half_up") {
  CHECK(percent_half_up(1, 8) == 13);   // 12.5
  CHECK(percent_half_up(1, 3) == 33);
  CHECK(percent_half_up(2, 3) == 67);
  CHECK(percent_half_up(0, 5) == 0);
  CHECK(percent_half_up(45, 4800) == 1);  // 0.9375
}

TEST_CASE("reference breakdowns") {
  const auto& so = stack_overflow_reference();
  auto pct = reference_percentages(so);
  const std::array<int, 6> expected = {25, 10, 1, 18, 5, 2};
  for (std::size_t i = 0; i < 6; ++i) CHECK(pct[i] == expected[i]);

  // 302 of 4,000 is 7.55%, which rounds to 8, while the published table
  // lists 7: the recomputation reports exactly that one mismatch.
  const auto& jira = jira_reference();
  auto jp = reference_percentages(jira);
  CHECK_FALSE(jp[2].has_value());
  CHECK_FALSE(jp[4].has_value());
  CHECK(*jp[5] == 8);
  CHECK(*jira.percent[5] == 7);
}

TEST_CASE("dataset_stats over a hand-counted gold set") {
  using E = Emotion;
  std::vector<EmotionSet> gold = {{E::love}, {E::love, E::joy}, {E::anger}, {}, {E::surprise}, {}, {E::joy, E::fear}};
  DatasetStats s = dataset_stats(gold);
  CHECK(s.total == 7);
  CHECK(s.emotion_counts[0] == 2);
  CHECK(s.emotion_counts[1] == 2);
  CHECK(s.emotion_counts[2] == 1);
  CHECK(s.discarded == 2);
  CHECK(s.polarity_counts[static_cast<int>(Polarity::positive)] == 2);
  CHECK(s.polarity_counts[static_cast<int>(Polarity::negative)] == 1);
  CHECK(s.polarity_counts[static_cast<int>(Polarity::neutral)] == 2);
  CHECK(s.polarity_percent[static_cast<int>(Polarity::positive)] == 40);
  CHECK_THROWS_AS(dataset_stats({}), DataError);
}

TEST_CASE("multi-label gold files and projections") {
  const std::string full =
      "id;love;joy;surprise;anger;fear;sadness;text\n"
      "a;1;0;0;0;0;0;thanks\n"
      "b;0;0;1;0;0;0;wow\n"
      "c;no;no;no;no;no;no;plain\n";
  auto docs = parse_emotion_gold(full, Delimiter::semicolon, EmotionSchema::full);
  REQUIRE(docs.size() == 3);
  auto love = project_emotion(docs, Emotion::love);
  CHECK(love[0].gold == "YES");
  CHECK(love[1].gold == "NO");
  auto pol = project_polarity(docs);
  REQUIRE(pol.size() == 2);
  CHECK(pol[0].gold == "positive");
  CHECK(pol[1].gold == "neutral");

  auto jira = parse_emotion_gold("x;0;1;0;1;text\n", Delimiter::semicolon, EmotionSchema::jira);
  CHECK(jira[0].gold == EmotionSet{Emotion::joy, Emotion::sadness});
  CHECK_THROWS_AS(parse_emotion_gold("x;2;1;0;1;text\n", Delimiter::semicolon, EmotionSchema::jira),
                  FormatError);
}

TEST_CASE("rater annotations group by id") {
  auto groups = parse_annotations("d1;r1;1;0;0;0;0;0\nd1;r2;1;0;0;0;0;0\nd2;r1;0;0;0;0;0;1\n",
                                  Delimiter::semicolon);
  REQUIRE(groups.size() == 2);
  CHECK(groups[0].second.raters.size() == 2);
  CHECK(majority_vote(groups[0].second, Emotion::love));
}

TEST_CASE("label parsing") {
  CHECK(parse_emotion("Love") == Emotion::love);
  CHECK_FALSE(parse_emotion("hate"));
  CHECK(parse_polarity("NEUTRAL") == Polarity::neutral);
  CHECK(parse_delimiter("sc") == Delimiter::semicolon);
  CHECK_FALSE(parse_delimiter(";"));
  CHECK(parse_yes_no("yes") == true);
  CHECK_FALSE(parse_yes_no("maybe"));
}
