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

#ifndef PHONCTX_TAGS_H_
#define PHONCTX_TAGS_H_

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "phonctx/error.h"
#include "phonctx/retrieval.h"

namespace phonctx {

// Entity occurrence inside the untagged text; [begin, end) are byte offsets.
struct EntitySpan {
  EntityClass cls;
  std::string surface;
  std::size_t begin = 0;
  std::size_t end = 0;
  bool auto_closed = false;  // open tag ran to end of input

  friend bool operator==(const EntitySpan&, const EntitySpan&) = default;
};

struct TaggedHypothesis {
  std::string raw;
  std::string text;  // tags removed, whitespace collapsed
  std::vector<EntitySpan> spans;
};

// Nested tags or a mismatched open/close of a known class. `offset` is the
// byte position of the offending tag in the raw input.
class TagParseError : public Error {
 public:
  TagParseError(std::size_t offset, const std::string& what)
      : Error("tag error at offset " + std::to_string(offset) + ": " + what), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Tags of unknown classes stay in the text as literal words. Region
// delimiters <s> and </s> are dropped. An open tag left dangling at the end
// closes there and is flagged auto_closed. Empty spans are discarded.
TaggedHypothesis parse_tagged(std::string_view raw,
                              const std::set<EntityClass>& known = default_classes());

// Canonical raw form: single spaces around every tag. Spans must lie on
// word boundaries of a whitespace-normalized text for the round trip to hold.
// Throws InvalidInput for overlapping or out-of-range spans.
std::string serialize_tagged(std::string_view text, std::span<const EntitySpan> spans);

// Builds a TaggedHypothesis whose raw is the canonical serialization.
TaggedHypothesis make_tagged(std::string_view text, std::vector<EntitySpan> spans);

// Removes well-formed known-class tags and region delimiters, collapsing
// whitespace. Everything else passes through as literal text.
std::string strip_tags(std::string_view raw, const std::set<EntityClass>& known = default_classes());

// "<c> X </c> <c> Y </c>" for the spans of `hyp`, in order.
std::string entities_only(const TaggedHypothesis& hyp);

// Collapses whitespace runs to single spaces and trims.
std::string collapse_whitespace(std::string_view s);

}  // namespace phonctx

#endif  // PHONCTX_TAGS_H_
