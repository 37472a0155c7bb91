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
#include <vector>

#include <gtest/gtest.h>

#include "phonctx/rng.h"
#include "phonctx/tags.h"

namespace phonctx {
namespace {

TEST(Parse, PaperExample) {
  auto h = parse_tagged("Call <contact> Thomson </contact>");
  EXPECT_EQ(h.text, "Call Thomson");
  ASSERT_EQ(h.spans.size(), 1u);
  EXPECT_EQ(h.spans[0].cls, "contact");
  EXPECT_EQ(h.spans[0].surface, "Thomson");
  EXPECT_EQ(h.spans[0].begin, 5u);
  EXPECT_EQ(h.spans[0].end, 12u);
  EXPECT_FALSE(h.spans[0].auto_closed);
}

TEST(Parse, NoTags) {
  auto h = parse_tagged("play jazz");
  EXPECT_EQ(h.text, "play jazz");
  EXPECT_TRUE(h.spans.empty());
}

TEST(Parse, MultipleEntities) {
  auto h = parse_tagged("<contact> Bob </contact> and <contact> Ann </contact>");
  ASSERT_EQ(h.spans.size(), 2u);
  EXPECT_EQ(h.spans[0].surface, "Bob");
  EXPECT_EQ(h.spans[1].surface, "Ann");
  EXPECT_EQ(h.text, "Bob and Ann");
}

TEST(Parse, MixedClasses) {
  auto h = parse_tagged("play <playlist> Jazz Mix </playlist> for <contact> Ann </contact>");
  ASSERT_EQ(h.spans.size(), 2u);
  EXPECT_EQ(h.spans[0].cls, "playlist");
  EXPECT_EQ(h.spans[1].cls, "contact");
}

TEST(Parse, UnknownTagsAreLiteral) {
  auto h = parse_tagged("call <foo> Bob </foo>");
  EXPECT_TRUE(h.spans.empty());
  EXPECT_EQ(h.text, "call <foo> Bob </foo>");
  EXPECT_EQ(parse_tagged("a <b").text, "a <b");
}

TEST(Parse, DanglingOpenTagAutoCloses) {
  auto h = parse_tagged("call <contact> Tom Thom");
  ASSERT_EQ(h.spans.size(), 1u);
  EXPECT_TRUE(h.spans[0].auto_closed);
  EXPECT_EQ(h.spans[0].surface, "Tom Thom");
}

TEST(Parse, RegionTagsAreDropped) {
  auto h = parse_tagged("<s> Thomson ; Walker </s>");
  EXPECT_EQ(h.text, "Thomson ; Walker");
  EXPECT_TRUE(h.spans.empty());
}

TEST(Parse, NestedTagsAreErrors) {
  try {
    parse_tagged("a <contact> b <app> c </app> </contact>");
    FAIL();
  } catch (const TagParseError& e) {
    EXPECT_EQ(e.offset(), 14u);
  }
}

TEST(Parse, MismatchedCloseIsAnError) {
  EXPECT_THROW(parse_tagged("a <contact> b </app>"), TagParseError);
  EXPECT_THROW(parse_tagged("a b </contact>"), TagParseError);
}

TEST(Parse, EmptySpanIsDropped) {
  auto h = parse_tagged("a <contact> </contact> b");
  EXPECT_EQ(h.text, "a b");
  EXPECT_TRUE(h.spans.empty());
}

TEST(Parse, TotalOnRandomInput) {
  static const std::vector<std::string> kTokens = {"<contact>", "</contact>", "<app>", "</app>", "<s>",
                                                   "</s>", "bob", "<", ">", "</", "<foo>", "x"};
  Rng rng(31);
  for (int i = 0; i < 5000; ++i) {
    std::string raw;
    for (std::size_t n = rng.uniform(10); n > 0; --n) raw += kTokens[rng.uniform(kTokens.size())] + " ";
    try {
      auto h = parse_tagged(raw);
      for (const auto& s : h.spans) EXPECT_LE(s.end, h.text.size());
    } catch (const TagParseError& e) {
      EXPECT_LE(e.offset(), raw.size());
    }
  }
}

TEST(Serialize, Examples) {
  std::vector<EntitySpan> spans{{"contact", "Thomson", 5, 12, false}};
  EXPECT_EQ(serialize_tagged("Call Thomson", spans), "Call <contact> Thomson </contact>");
  EXPECT_EQ(serialize_tagged("play jazz", {}), "play jazz");
  std::vector<EntitySpan> adjacent{{"contact", "Bob", 0, 3, false}, {"contact", "Ann", 4, 7, false}};
  EXPECT_EQ(serialize_tagged("Bob Ann", adjacent), "<contact> Bob </contact> <contact> Ann </contact>");
}

TEST(Serialize, OverlapIsAnError) {
  std::vector<EntitySpan> spans{{"contact", "Bob A", 0, 5, false}, {"contact", "Ann", 4, 7, false}};
  EXPECT_THROW(serialize_tagged("Bob Ann", spans), InvalidInput);
  std::vector<EntitySpan> outside{{"contact", "x", 0, 50, false}};
  EXPECT_THROW(serialize_tagged("Bob", outside), InvalidInput);
}

TEST(Serialize, RoundTrip) {
  auto h = parse_tagged("call <contact> Tom Thomson </contact> now <app> Maps </app>");
  auto again = parse_tagged(serialize_tagged(h.text, h.spans));
  EXPECT_EQ(again.text, h.text);
  EXPECT_EQ(again.spans, h.spans);
  EXPECT_EQ(strip_tags(serialize_tagged(h.text, h.spans)), h.text);
}

TEST(MakeTagged, SortsAndFillsSurfaces) {
  auto h = make_tagged("Bob and Ann", {{"contact", "", 8, 11, false}, {"contact", "", 0, 3, false}});
  ASSERT_EQ(h.spans.size(), 2u);
  EXPECT_EQ(h.spans[0].surface, "Bob");
  EXPECT_EQ(h.raw, "<contact> Bob </contact> and <contact> Ann </contact>");
}

TEST(Strip, Examples) {
  EXPECT_EQ(strip_tags("Call <contact> Thomson </contact>"), "Call Thomson");
  EXPECT_EQ(strip_tags("<s> Thomson ; Walker </s>"), "Thomson ; Walker");
  EXPECT_EQ(strip_tags("a <b"), "a <b");
}

TEST(EntitiesOnly, KeepsTagsDropsContext) {
  auto h = parse_tagged("call <contact> Bob </contact> and <contact> Ann </contact> now");
  EXPECT_EQ(entities_only(h), "<contact> Bob </contact> <contact> Ann </contact>");
  EXPECT_EQ(entities_only(parse_tagged("play jazz")), "");
}

TEST(Whitespace, Collapse) { EXPECT_EQ(collapse_whitespace("  a \t b\n"), "a b"); }

}  // namespace
}  // namespace phonctx
