// Copyright 2026 The phonctx Authors
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
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.h"
#include "phonctx/error.h"
#include "phonctx/metrics.h"
#include "phonctx/rng.h"
#include "phonctx/tags.h"

namespace phonctx {
namespace {

TEST(Wer, Examples) {
  EXPECT_EQ(wer("call thomson", "call thomson").wer, 0.0);
  auto r = wer("call thomson", "call tom son");
  EXPECT_EQ(r.substitutions, 1u);
  EXPECT_EQ(r.insertions, 1u);
  EXPECT_EQ(r.deletions, 0u);
  EXPECT_EQ(r.wer, 1.0);
  EXPECT_EQ(wer("call <contact> thomson </contact>", "call thomson").wer, 0.0);
}

TEST(Wer, NormalizesCaseAndWhitespace) {
  EXPECT_EQ(wer("Call  THOMSON", "call thomson").errors(), 0u);
}

TEST(Wer, BacktraceOrder) {
  // One deletion is needed; with S before I before D the backtrace takes the
  // diagonal as late as possible.
  auto r = wer("a b c", "a c");
  EXPECT_EQ(r.deletions, 1u);
  EXPECT_EQ(r.substitutions, 0u);
  auto s = wer("a b", "c");
  EXPECT_EQ(s.substitutions, 1u);
  EXPECT_EQ(s.deletions, 1u);
}

TEST(Wer, EmptyReferenceIsAnError) {
  EXPECT_THROW(wer("", "a"), InvalidInput);
  EXPECT_THROW(wer("<contact> </contact>", "a"), InvalidInput);
}

TEST(Wer, MatchesRecursiveOracle) {
  static const std::vector<std::string> kVocab = {"a", "b", "c"};
  Rng rng(41);
  for (int i = 0; i < 2000; ++i) {
    std::vector<std::string> ref(1 + rng.uniform(6)), hyp(rng.uniform(7));
    for (auto& w : ref) w = kVocab[rng.uniform(3)];
    for (auto& w : hyp) w = kVocab[rng.uniform(3)];
    auto r = align_words(ref, hyp);
    EXPECT_EQ(r.errors(), oracle::brute_edit_distance(ref, hyp));
    EXPECT_EQ(r.insertions + ref.size(), r.deletions + hyp.size());
  }
}

TEST(Ner, Examples) {
  auto same = ner(parse_tagged("<contact> Thomson </contact>"), parse_tagged("<contact> Thomson </contact>"));
  EXPECT_EQ(same.entity_errors, 0u);
  EXPECT_EQ(same.ner, 0.0);
  auto wrong = ner(parse_tagged("<contact> Thomson </contact>"), parse_tagged("<contact> Thompson </contact>"));
  EXPECT_EQ(wrong.entity_errors, 1u);
  EXPECT_EQ(wrong.ner, 1.0);
  auto partial = ner(parse_tagged("<contact> Bob </contact> and <contact> Ann </contact>"),
                     parse_tagged("and <contact> Ann </contact>"));
  EXPECT_EQ(partial.entity_errors, 1u);
  EXPECT_EQ(partial.ref_entities, 2u);
  EXPECT_EQ(partial.ner, 0.5);
}

TEST(Ner, ClassAndNormalizationMatter) {
  EXPECT_EQ(ner(parse_tagged("<contact> Ann </contact>"), parse_tagged("<app> Ann </app>")).entity_errors, 1u);
  EXPECT_EQ(ner(parse_tagged("<contact> Ann Lee </contact>"), parse_tagged("<contact> ann  LEE </contact>")).entity_errors,
            0u);
}

TEST(Ner, FalsePositivesAreInformational) {
  auto r = ner(parse_tagged("call <contact> Ann </contact>"),
               parse_tagged("<app> call </app> <contact> Ann </contact> <contact> Bo </contact>"));
  EXPECT_EQ(r.entity_errors, 0u);
  EXPECT_EQ(r.false_positives, 2u);
}

TEST(Ner, NoReferenceEntities) {
  auto r = ner(parse_tagged("play jazz"), parse_tagged("<contact> jazz </contact>"));
  EXPECT_EQ(r.ref_entities, 0u);
  EXPECT_TRUE(std::isnan(r.ner));
}

// Adding a correct hypothesis span for an unmatched reference entity never
// increases the error count.
TEST(Ner, Monotone) {
  static const std::vector<std::string> kNames = {"Ann", "Bo", "Cy"};
  Rng rng(42);
  auto random_spans = [&](std::size_t max) {
    std::vector<std::string> out(rng.uniform(max + 1));
    for (auto& n : out) n = kNames[rng.uniform(kNames.size())];
    return out;
  };
  auto render = [](const std::vector<std::string>& names) {
    std::string s;
    for (const auto& n : names) s += "<contact> " + n + " </contact> ";
    return parse_tagged(s);
  };
  for (int i = 0; i < 3000; ++i) {
    auto ref = random_spans(5);
    auto hyp = random_spans(5);
    const auto before = ner(render(ref), render(hyp));
    if (ref.empty()) continue;
    // Insert the k-th reference entity at every position of the hypothesis.
    const std::size_t k = rng.uniform(ref.size());
    for (std::size_t pos = 0; pos <= hyp.size(); ++pos) {
      auto more = hyp;
      more.insert(more.begin() + static_cast<std::ptrdiff_t>(pos), ref[k]);
      EXPECT_LE(ner(render(ref), render(more)).entity_errors, before.entity_errors);
    }
  }
}

TEST(Report, PooledNotAveraged) {
  std::vector<ScoredPair> pairs{
      {"call <contact> Ann </contact>", "call <contact> Anne </contact>", "m"},
      {"text <contact> Bo </contact> and <contact> Cy </contact> now please", "text <contact> Bo </contact> and <contact> Cy </contact> now please", "m"},
      {"play jazz", "play jazz", "m"},
      {"call <contact> Ann </contact>", "call <contact> Ann </contact>", "other"}};
  auto rows = corpus_report(pairs);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].mode, "m");
  EXPECT_EQ(rows[0].utterances, 3u);
  std::size_t errs = 0, refs = 0, werrs = 0, words = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    auto n = ner(parse_tagged(pairs[i].reference), parse_tagged(pairs[i].hypothesis));
    errs += n.entity_errors;
    refs += n.ref_entities;
    auto w = wer(pairs[i].reference, pairs[i].hypothesis);
    werrs += w.errors();
    words += w.ref_words;
  }
  EXPECT_EQ(rows[0].ner.entity_errors, errs);
  EXPECT_EQ(rows[0].ner.ner, static_cast<double>(errs) / static_cast<double>(refs));
  EXPECT_EQ(rows[0].wer.wer, static_cast<double>(werrs) / static_cast<double>(words));
  EXPECT_EQ(rows[1].ner.ner, 0.0);
}

TEST(Report, SingleUtteranceEqualsDirectMetrics) {
  std::vector<ScoredPair> pairs{{"call <contact> Ann </contact>", "call <contact> Anne </contact> x", "m"}};
  auto row = corpus_report(pairs).front();
  EXPECT_EQ(row.wer.wer, wer(pairs[0].reference, pairs[0].hypothesis).wer);
  EXPECT_EQ(row.ner.ner, 1.0);
}

TEST(Report, Writers) {
  std::vector<ScoredPair> pairs{{"call <contact> Ann </contact>", "call <contact> Ann </contact>", "full-full"}};
  auto rows = corpus_report(pairs);
  std::ostringstream table, jsonl;
  write_report_table(table, rows);
  write_report_jsonl(jsonl, rows);
  EXPECT_NE(table.str().find("full-full"), std::string::npos);
  EXPECT_NE(jsonl.str().find("\"mode\":\"full-full\""), std::string::npos);
}

}  // namespace
}  // namespace phonctx
