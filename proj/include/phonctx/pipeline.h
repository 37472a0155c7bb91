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

#ifndef PHONCTX_PIPELINE_H_
#define PHONCTX_PIPELINE_H_

#include <cstddef>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "phonctx/decoder.h"
#include "phonctx/phoneme.h"
#include "phonctx/retrieval.h"
#include "phonctx/tags.h"

namespace phonctx {

enum class PipelineMode {
  kFullFull,           // full decode, full context-aware re-decode
  kNeFull,             // entity-only detection, full context-aware decode
  kFullNe,             // full decode, context-aware entity rewriting
  kSimpleReplacement,  // full decode, top-1 candidate substitution
};

// "full-full", "ne-full", "full-ne", "simple".
std::string_view to_string(PipelineMode mode);
PipelineMode parse_mode(std::string_view name);

inline constexpr PipelineMode kAllModes[] = {PipelineMode::kFullFull, PipelineMode::kNeFull,
                                             PipelineMode::kFullNe,
                                             PipelineMode::kSimpleReplacement};

class PipelineError : public Error {
 public:
  PipelineError(std::string stage, const std::string& what)
      : Error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct PipelineOptions {
  RetrievalConfig retrieval;
  PromptTemplate prompt;
  std::set<EntityClass> classes = default_classes();
};

struct SpanTrace {
  EntitySpan span;
  std::vector<Pronunciation> query_prons;
  RetrievalResult result;
};

struct PipelineTrace {
  std::string detection_raw;
  TaggedHypothesis detection;
  bool retrieval_skipped = true;
  std::vector<SpanTrace> spans;
  bool generation_run = false;
  std::string prompt;  // empty when no context-aware stage ran
  std::string generation_raw;
  std::vector<std::string> notes;
};

struct PipelineOutcome {
  std::string utterance_id;
  PipelineMode mode = PipelineMode::kFullFull;
  TaggedHypothesis final_hypothesis;
  PipelineTrace trace;
};

// Round-robin merge of per-span candidate lists by rank, skipping entities
// already taken, stopping at `cap` surfaces.
std::vector<std::string> interleave_candidates(std::span<const RetrievalResult> results,
                                               std::size_t cap);

// Replaces the surface of the i-th span of `hyp` by replacements[i].
TaggedHypothesis replace_spans(const TaggedHypothesis& hyp,
                               std::span<const std::string> replacements);

// One utterance through detection, retrieval and generation. `detector`
// serves the context-free stage and `generator` the context-aware stage; they
// may be the same object.
PipelineOutcome run(PipelineMode mode, const Utterance& utterance, const EntityDatabase& db,
                    const Lexicon& lex, Decoder& detector, Decoder& generator,
                    const PipelineOptions& opts = {});

inline PipelineOutcome run(PipelineMode mode, const Utterance& utterance,
                           const EntityDatabase& db, const Lexicon& lex, Decoder& decoder,
                           const PipelineOptions& opts = {}) {
  return run(mode, utterance, db, lex, decoder, decoder, opts);
}

struct CorpusItem {
  Utterance utterance;
  std::shared_ptr<const EntityDatabase> db;
};

// Runs every item, on `jobs` threads when both decoders are thread-safe.
// Outcomes are ordered by utterance id.
std::vector<PipelineOutcome> run_corpus(PipelineMode mode, std::span<const CorpusItem> items,
                                        const Lexicon& lex, Decoder& detector, Decoder& generator,
                                        const PipelineOptions& opts = {}, std::size_t jobs = 1);

struct SweepRow {
  std::size_t size = 0;
  double wer = 0.0;
  double ner = 0.0;
  std::size_t ref_words = 0;
  std::size_t word_errors = 0;
  std::size_t ref_entities = 0;
  std::size_t entity_errors = 0;
};

// Runs the corpus once per size with exactly min(size, |partition|) top-NPD
// candidates per span.
std::vector<SweepRow> sweep_context_size(PipelineMode mode, std::span<const CorpusItem> items,
                                         std::span<const std::size_t> sizes, const Lexicon& lex,
                                         Decoder& detector, Decoder& generator,
                                         const PipelineOptions& opts = {}, std::size_t jobs = 1);

}  // namespace phonctx

#endif  // PHONCTX_PIPELINE_H_
