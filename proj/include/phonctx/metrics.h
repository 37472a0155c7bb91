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

#ifndef PHONCTX_METRICS_H_
#define PHONCTX_METRICS_H_

#include <cstddef>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "phonctx/retrieval.h"
#include "phonctx/tags.h"

namespace phonctx {

struct WerReport {
  std::size_t substitutions = 0;
  std::size_t insertions = 0;
  std::size_t deletions = 0;
  std::size_t ref_words = 0;
  double wer = 0.0;

  std::size_t errors() const { return substitutions + insertions + deletions; }
};

// Minimal word alignment; backtrace prefers substitution/match, then
// insertion, then deletion. `wer` is 0 when ref is empty.
WerReport align_words(std::span<const std::string> ref, std::span<const std::string> hyp);

// Lowercased words of `text` with entity tags and region delimiters removed.
std::vector<std::string> scoring_words(std::string_view text,
                                       const std::set<EntityClass>& classes = default_classes());

// Throws InvalidInput when the reference has no words after stripping.
WerReport wer(std::string_view reference, std::string_view hypothesis,
              const std::set<EntityClass>& classes = default_classes());

struct NerReport {
  std::size_t ref_entities = 0;
  std::size_t entity_errors = 0;
  std::size_t false_positives = 0;  // informational, not part of ner
  double ner = 0.0;                 // NaN when ref_entities == 0
};

// A reference entity is correct when it is paired with a hypothesis span of
// the same class and identical normalized surface. Pairs are order-preserving
// and the number of correct pairs is maximized.
NerReport ner(const TaggedHypothesis& reference, const TaggedHypothesis& hypothesis);

struct ScoredPair {
  std::string reference;   // tagged
  std::string hypothesis;  // tagged
  std::string mode;
};

struct ModeScore {
  std::string mode;
  std::size_t utterances = 0;
  WerReport wer;  // pooled counts
  NerReport ner;  // pooled counts
};

// Pooled counts per mode, in order of first appearance. Malformed tags in a
// hypothesis are scored as plain text.
std::vector<ModeScore> corpus_report(std::span<const ScoredPair> pairs,
                                     const std::set<EntityClass>& classes = default_classes());

void write_report_jsonl(std::ostream& out, std::span<const ModeScore> rows);
void write_report_table(std::ostream& out, std::span<const ModeScore> rows);

}  // namespace phonctx

#endif  // PHONCTX_METRICS_H_
