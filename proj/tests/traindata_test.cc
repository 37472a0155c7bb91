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
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "phonctx/error.h"
#include "phonctx/traindata.h"
#include "test_util.h"

namespace phonctx {
namespace {

using testing::contacts;

struct Fixture {
  Lexicon lex;
  EntityDatabase db = contacts({"Thomson", "Walker", "Thompson"}, lex);
  TaggedHypothesis ref = parse_tagged("Call <contact> Thomson </contact>");
  TaggedHypothesis det = parse_tagged("Call <contact> Tomson </contact>");
};

TEST(BuildExample, FullFull) {
  Fixture f;
  auto ex = build_example(PipelineMode::kFullFull, "u1", f.ref, f.det, f.db, f.lex);
  ASSERT_EQ(ex.regions.size(), 3u);
  EXPECT_EQ(ex.regions[0], (Region{RegionRole::kDetectionTarget, "Call <contact> Tomson </contact>"}));
  // Rule-based pronunciations: Thomson is 1 edit from the query, Thompson 2
  // edits (2/6 > 1.2 * 1/6 and not < 0.2), Walker far away.
  EXPECT_EQ(ex.regions[1], (Region{RegionRole::kPrompt, "<s> Thomson </s>"}));
  EXPECT_EQ(ex.regions[2], (Region{RegionRole::kGenerationTarget, "Call <contact> Thomson </contact>"}));
  EXPECT_EQ(ex.source(), "Call <contact> Tomson </contact> <s> Thomson </s> Call <contact> Thomson </contact>");
  EXPECT_EQ(ex.query_source, QuerySource::kDetection);
  check_region_grammar(ex);
}

TEST(BuildExample, NoEntityIsSourceOnly) {
  Fixture f;
  auto plain = parse_tagged("play jazz");
  for (PipelineMode m : {PipelineMode::kFullFull, PipelineMode::kFullNe}) {
    auto ex = build_example(m, "u1", plain, plain, f.db, f.lex);
    EXPECT_EQ(ex.source(), "play jazz");
    ASSERT_EQ(ex.regions.size(), 1u);
    EXPECT_EQ(ex.query_source, QuerySource::kNone);
    check_region_grammar(ex);
  }
}

TEST(BuildExample, FullNeGeneratesEntitiesOnly) {
  Fixture f;
  auto ex = build_example(PipelineMode::kFullNe, "u1", f.ref, f.det, f.db, f.lex);
  ASSERT_EQ(ex.regions.size(), 3u);
  EXPECT_EQ(ex.regions[2].text, "<contact> Thomson </contact>");
}

TEST(BuildExample, NeFull) {
  Fixture f;
  auto ex = build_example(PipelineMode::kNeFull, "u1", f.ref, f.det, f.db, f.lex);
  ASSERT_EQ(ex.regions.size(), 3u);
  EXPECT_EQ(ex.regions[0].text, "<contact> Tomson </contact>");
  EXPECT_EQ(ex.regions[2].text, "Call <contact> Thomson </contact>");
  check_region_grammar(ex);

  auto plain = parse_tagged("play jazz");
  auto empty = build_example(PipelineMode::kNeFull, "u2", plain, plain, f.db, f.lex);
  ASSERT_EQ(empty.regions.size(), 3u);
  EXPECT_EQ(empty.regions[0].text, "");
  EXPECT_EQ(empty.regions[1].text, "<s> </s>");
  EXPECT_EQ(empty.regions[2].text, "play jazz");
  EXPECT_EQ(empty.source(), "<s> </s> play jazz");
  check_region_grammar(empty);
}

TEST(BuildExample, QueriesNeverComeFromReferenceByDefault) {
  Fixture f;
  // Detection missed the entity: the default follows inference behaviour.
  auto missed = parse_tagged("Call Tomson");
  auto ex = build_example(PipelineMode::kFullFull, "u1", f.ref, missed, f.db, f.lex);
  EXPECT_EQ(ex.query_source, QuerySource::kNone);
  ASSERT_EQ(ex.regions.size(), 1u);
  EXPECT_EQ(ex.regions[0].text, "Call <contact> Thomson </contact>");

  // Detection found a different span: queries come from it, not the reference.
  auto other = parse_tagged("Call <contact> Walker </contact>");
  auto ex2 = build_example(PipelineMode::kFullFull, "u1", f.ref, other, f.db, f.lex);
  EXPECT_EQ(ex2.query_source, QuerySource::kDetection);
  EXPECT_EQ(ex2.regions[1].text.rfind("<s> Walker", 0), 0u);
}

TEST(BuildExample, TeacherInject) {
  Fixture f;
  TrainDataOptions opts;
  opts.teacher_inject = true;
  auto missed = parse_tagged("Call Tomson");
  auto ex = build_example(PipelineMode::kFullFull, "u1", f.ref, missed, f.db, f.lex, opts);
  EXPECT_EQ(ex.query_source, QuerySource::kReference);
  ASSERT_EQ(ex.regions.size(), 3u);
  EXPECT_EQ(ex.regions[0].text, "Call Tomson");
  EXPECT_EQ(ex.regions[1].text.rfind("<s> Thomson", 0), 0u);
}

TEST(BuildExample, SimpleHasNoTrainingData) {
  Fixture f;
  EXPECT_THROW(build_example(PipelineMode::kSimpleReplacement, "u1", f.ref, f.det, f.db, f.lex), InvalidInput);
}

TEST(RegionGrammar, Rejects) {
  TrainingExample ex;
  ex.utterance_id = "u";
  EXPECT_THROW(check_region_grammar(ex), InvalidInput);
  ex.regions = {{RegionRole::kDetectionTarget, "a"}, {RegionRole::kGenerationTarget, "b"}};
  EXPECT_THROW(check_region_grammar(ex), InvalidInput);
  ex.regions = {{RegionRole::kDetectionTarget, "a"}, {RegionRole::kPrompt, "Thomson"}, {RegionRole::kGenerationTarget, "b"}};
  EXPECT_THROW(check_region_grammar(ex), InvalidInput);
  ex.variant = PipelineMode::kNeFull;
  ex.regions = {{RegionRole::kDetectionTarget, ""}};
  EXPECT_THROW(check_region_grammar(ex), InvalidInput);
}

TEST(Corpus, EmitAndReadBack) {
  Fixture f;
  const auto dir = std::filesystem::temp_directory_path();
  const auto path = (dir / "phonctx-traindata-test.jsonl").string();
  EXPECT_EQ(emit_corpus({}, path), 0u);
  EXPECT_EQ(std::filesystem::file_size(path), 0u);

  std::vector<TrainingExample> one{build_example(PipelineMode::kFullFull, "u1", f.ref, f.det, f.db, f.lex)};
  EXPECT_EQ(emit_corpus(one, path), 1u);
  std::ifstream in(path);
  auto back = read_training_corpus(in, path);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0], one[0]);
  std::filesystem::remove(path);

  EXPECT_THROW(emit_corpus(one, (dir / "no-such-dir" / "x.jsonl").string()), IoError);
}

TEST(Corpus, ReadErrors) {
  std::istringstream bad(R"({"id":"u","variant":"full-full","regions":[{"role":"loss","text":"x"}]})" "\n");
  EXPECT_THROW(read_training_corpus(bad, "t.jsonl"), ParseError);
}

TEST(Roles, Names) {
  for (auto r : {RegionRole::kDetectionTarget, RegionRole::kPrompt, RegionRole::kGenerationTarget})
    EXPECT_EQ(parse_role(to_string(r)), r);
  EXPECT_THROW(parse_role("target"), InvalidInput);
}

}  // namespace
}  // namespace phonctx
