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
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.h"
#include "phonctx/error.h"
#include "phonctx/retrieval.h"
#include "phonctx/rng.h"

namespace phonctx {
namespace {

NamedEntity entity(std::string id, std::string surface, Pronunciation pron, EntityClass cls = "contact") {
  NamedEntity e;
  e.id = std::move(id);
  e.surface = std::move(surface);
  e.normalized = normalize_surface(e.surface);
  e.cls = std::move(cls);
  e.pronunciations.push_back(std::move(pron));
  return e;
}

EntityDatabase example_db() {
  EntityDatabase db;
  db.add(entity("1", "Thomson", Pronunciation::parse("T AA M S AH N")));
  db.add(entity("2", "Thompson", Pronunciation::parse("T AA M P S AH N")));
  db.add(entity("3", "Walker", Pronunciation::parse("W AO K ER")));
  return db;
}

std::vector<std::string> surfaces(const RetrievalResult& r) {
  std::vector<std::string> out;
  for (const auto& c : r.candidates) out.push_back(c.entity.surface);
  return out;
}

const std::vector<Pronunciation> kQuery{Pronunciation::parse("T AA M S AH N")};

TEST(Retrieve, PaperExample) {
  auto r = retrieve(example_db(), kQuery, "contact");
  EXPECT_EQ(surfaces(r), (std::vector<std::string>{"Thomson", "Thompson"}));
  EXPECT_EQ(r.candidates[0].score.value, 0.0);
  EXPECT_DOUBLE_EQ(r.candidates[1].score.value, 1.0 / 6.0);
}

TEST(Retrieve, Singleton) {
  EntityDatabase db;
  db.add(entity("1", "Thomson", kQuery[0]));
  auto r = retrieve(db, kQuery, "contact");
  ASSERT_EQ(r.candidates.size(), 1u);
  EXPECT_EQ(r.candidates[0].score.value, 0.0);
}

TEST(Retrieve, CapAndTieOrder) {
  EntityDatabase db;
  // Surfaces and ids inserted out of order; ties resolve by surface, then id.
  for (int i = 14; i >= 0; --i)
    db.add(entity("id" + std::to_string(i % 3) + "-" + std::to_string(i), "Name" + std::string(1, char('a' + i / 3)),
                  kQuery[0]));
  auto r = retrieve(db, kQuery, "contact");
  ASSERT_EQ(r.candidates.size(), 10u);
  for (const auto& c : r.candidates) EXPECT_EQ(c.score.value, 0.0);
  for (std::size_t i = 1; i < r.candidates.size(); ++i) {
    const auto& a = r.candidates[i - 1].entity;
    const auto& b = r.candidates[i].entity;
    EXPECT_TRUE(a.normalized < b.normalized || (a.normalized == b.normalized && a.id < b.id));
  }
  EXPECT_EQ(r.candidates[0].entity.surface, "Namea");
  EXPECT_EQ(r.candidates[0].entity.id, "id0-0");
}

TEST(Retrieve, MissingClassIsEmpty) {
  EXPECT_TRUE(retrieve(example_db(), kQuery, "playlist").candidates.empty());
}

TEST(Retrieve, EmptyQueryIsAnError) {
  std::vector<Pronunciation> none;
  EXPECT_THROW(retrieve(example_db(), none, "contact"), InvalidInput);
}

TEST(Retrieve, ConfigValidation) {
  RetrievalConfig cfg;
  cfg.max_candidates = 0;
  EXPECT_THROW(retrieve(example_db(), kQuery, "contact", cfg), ConfigError);
  cfg = {};
  cfg.relative_factor = 0.0;
  EXPECT_THROW(retrieve(example_db(), kQuery, "contact", cfg), ConfigError);
  cfg = {};
  cfg.absolute_floor = -0.1;
  EXPECT_THROW(retrieve(example_db(), kQuery, "contact", cfg), ConfigError);
}

TEST(Retrieve, BoundarySemantics) {
  // best = 1/5 exactly; entity at 1.2 * best = 6/25 would not be representable,
  // so use factor 2: 2/5 is admitted by <=, 3/5 is not.
  const std::vector<Pronunciation> q{Pronunciation::parse("A B C D E")};
  EntityDatabase db;
  db.add(entity("1", "one", Pronunciation::parse("A B C D X")));
  db.add(entity("2", "two", Pronunciation::parse("A B C X X")));
  db.add(entity("3", "three", Pronunciation::parse("A B X X X")));
  RetrievalConfig cfg;
  cfg.relative_factor = 2.0;
  cfg.absolute_floor = 0.0;
  EXPECT_EQ(surfaces(retrieve(db, q, "contact", cfg)), (std::vector<std::string>{"one", "two"}));
  // The floor is strict: 0.2 is not < 0.2.
  cfg.relative_factor = 1.0;
  cfg.absolute_floor = 0.2;
  EXPECT_EQ(surfaces(retrieve(db, q, "contact", cfg)), (std::vector<std::string>{"one"}));
  cfg.absolute_floor = 0.41;
  EXPECT_EQ(surfaces(retrieve(db, q, "contact", cfg)), (std::vector<std::string>{"one", "two"}));
}

TEST(Retrieve, ExactMatchAdmitsOnlyFloor) {
  auto r = retrieve(example_db(), kQuery, "contact");
  for (const auto& c : r.candidates) EXPECT_TRUE(c.score.value == 0.0 || c.score.value < 0.2);
}

TEST(Retrieve, TopKBypassesRule) {
  RetrievalConfig cfg;
  cfg.selection = Selection::kTopK;
  cfg.max_candidates = 3;
  EXPECT_EQ(surfaces(retrieve(example_db(), kQuery, "contact", cfg)),
            (std::vector<std::string>{"Thomson", "Thompson", "Walker"}));
}

EntityDatabase random_db(Rng& rng, std::size_t n) {
  static const std::vector<Phoneme> kInv = {"AA", "B", "K", "S"};
  EntityDatabase db;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Phoneme> p(1 + rng.uniform(5));
    for (auto& x : p) x = kInv[rng.uniform(kInv.size())];
    db.add(entity("e" + std::to_string(i), "n" + std::to_string(rng.uniform(20)), Pronunciation(p)));
  }
  return db;
}

TEST(Retrieve, PrefixPropertyAndSoundness) {
  Rng rng(21);
  for (int t = 0; t < 200; ++t) {
    auto db = random_db(rng, 1 + rng.uniform(200));
    const std::vector<Pronunciation> q{Pronunciation::parse("AA B K")};
    RetrievalConfig small, large;
    small.max_candidates = 1 + rng.uniform(10);
    large.max_candidates = small.max_candidates + 1 + rng.uniform(10);
    auto a = retrieve(db, q, "contact", small);
    auto b = retrieve(db, q, "contact", large);
    ASSERT_LE(a.candidates.size(), small.max_candidates);
    ASSERT_LE(a.candidates.size(), b.candidates.size());
    for (std::size_t i = 0; i < a.candidates.size(); ++i)
      EXPECT_EQ(a.candidates[i].entity.id, b.candidates[i].entity.id);
    const double best = b.candidates.front().score.value;
    for (const auto& c : b.candidates) EXPECT_TRUE(c.score.value <= 1.2 * best || c.score.value < 0.2);
    const auto naive = oracle::naive_retrieve(db, q, "contact", large);
    ASSERT_EQ(naive.size(), b.candidates.size());
    for (std::size_t i = 0; i < naive.size(); ++i) EXPECT_EQ(naive[i].id, b.candidates[i].entity.id);
  }
}

TEST(Retrieve, DuplicatedPronunciationsDoNotChangeResult) {
  Rng rng(22);
  for (int t = 0; t < 50; ++t) {
    auto db = random_db(rng, 100);
    EntityDatabase doubled;
    for (const auto& e : db.partition("contact")) {
      NamedEntity d = e;
      d.pronunciations.insert(d.pronunciations.end(), e.pronunciations.begin(), e.pronunciations.end());
      doubled.add(d);
    }
    const std::vector<Pronunciation> q{Pronunciation::parse("K S AA")};
    auto a = retrieve(db, q, "contact");
    auto b = retrieve(doubled, q, "contact");
    ASSERT_EQ(a.candidates.size(), b.candidates.size());
    for (std::size_t i = 0; i < a.candidates.size(); ++i) {
      EXPECT_EQ(a.candidates[i].entity.id, b.candidates[i].entity.id);
      EXPECT_EQ(a.candidates[i].score, b.candidates[i].score);
    }
  }
}

TEST(Prompt, Build) {
  auto r = retrieve(example_db(), kQuery, "contact");
  EXPECT_EQ(build_prompt(r), "<s> Thomson ; Thompson </s>");
  EXPECT_EQ(build_prompt(RetrievalResult{}), "<s> </s>");
  std::vector<std::string> one{"Walker"};
  EXPECT_EQ(build_prompt(one), "<s> Walker </s>");
}

TEST(Prompt, ParseRoundTrip) {
  std::vector<std::string> names{"Thomson", "Tom Walker"};
  EXPECT_EQ(parse_prompt(build_prompt(names)), names);
  EXPECT_TRUE(parse_prompt("<s> </s>").empty());
}

TEST(Classes, Normalize) {
  EXPECT_EQ(normalize_class("CONTACT"), "contact");
  EXPECT_EQ(normalize_class(" App "), "app");
  EXPECT_THROW(normalize_class("s"), InvalidInput);
  EXPECT_THROW(normalize_class("two words"), InvalidInput);
  EXPECT_THROW(normalize_class(""), InvalidInput);
}

TEST(Database, LoadRecords) {
  Lexicon lex;
  lex.add("thomson", Pronunciation::parse("T AA M S AH N"));
  std::istringstream in(
      R"({"id":"a","surface":"Thomson","class":"CONTACT"})" "\n"
      R"({"id":"b","surface":"Thomson","class":"contact"})" "\n"
      R"({"surface":"Jazz Mix","class":"playlist","prons":["JH AE Z M IH K S"]})" "\n");
  auto db = read_database(in, "db.jsonl", lex);
  EXPECT_EQ(db.size(), 3u);
  auto contacts = db.partition("contact");
  ASSERT_EQ(contacts.size(), 2u);
  EXPECT_EQ(contacts[0].pronunciations, std::vector<Pronunciation>{Pronunciation::parse("T AA M S AH N")});
  auto playlists = db.partition("playlist");
  ASSERT_EQ(playlists.size(), 1u);
  EXPECT_EQ(playlists[0].id, "L3");
  EXPECT_EQ(playlists[0].pronunciations[0].size(), 7u);
}

TEST(Database, Errors) {
  Lexicon lex;
  auto load = [&](const std::string& text) {
    std::istringstream in(text);
    return read_database(in, "db.jsonl", lex);
  };
  EXPECT_THROW(load(R"({"id":"a","class":"contact"})" "\n"), ParseError);
  EXPECT_THROW(load(R"({"id":"a","surface":"Tom"})" "\n"), ParseError);
  EXPECT_THROW(load("not json\n"), ParseError);
  EXPECT_THROW(load(R"({"id":"a","surface":"Tom","class":"contact"})" "\n"
                    R"({"id":"a","surface":"Ann","class":"contact"})" "\n"),
               ParseError);
  EXPECT_THROW(load(R"({"id":"a","surface":"123","class":"contact"})" "\n"), Error);
}

TEST(Database, WriteReadRoundTrip) {
  Lexicon lex;
  auto db = example_db();
  std::ostringstream out;
  write_database(out, db, true);
  std::istringstream in(out.str());
  auto back = read_database(in, "db.jsonl", lex);
  ASSERT_EQ(back.size(), db.size());
  auto a = db.partition("contact"), b = back.partition("contact");
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].id, b[i].id);
    EXPECT_EQ(a[i].pronunciations, b[i].pronunciations);
  }
}

}  // namespace
}  // namespace phonctx
