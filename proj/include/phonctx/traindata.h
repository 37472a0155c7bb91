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

#ifndef PHONCTX_TRAINDATA_H_
#define PHONCTX_TRAINDATA_H_

#include <cstddef>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "phonctx/pipeline.h"
#include "phonctx/retrieval.h"
#include "phonctx/tags.h"

namespace phonctx {

enum class RegionRole {
  kDetectionTarget,   // detection region
  kPrompt,            // retrieval region, excluded from the loss
  kGenerationTarget,  // generation region
};

std::string_view to_string(RegionRole role);
RegionRole parse_role(std::string_view name);

struct Region {
  RegionRole role;
  std::string text;

  friend bool operator==(const Region&, const Region&) = default;
};

// Where the retrieval queries of an example came from.
enum class QuerySource { kNone, kDetection, kReference };

std::string_view to_string(QuerySource source);

struct TrainingExample {
  std::string utterance_id;
  PipelineMode variant = PipelineMode::kFullFull;
  std::vector<Region> regions;
  QuerySource query_source = QuerySource::kNone;

  // Region texts joined by single spaces, empty regions skipped.
  std::string source() const;

  friend bool operator==(const TrainingExample&, const TrainingExample&) = default;
};

struct TrainDataOptions {
  RetrievalConfig retrieval;
  PromptTemplate prompt;
  // Take the entity path from reference spans when detection missed every
  // entity. Ablation only: queries then come from the reference.
  bool teacher_inject = false;
};

// Source sequence for one utterance. `detection` must come from a standalone
// detection model (full tagged hypothesis for full-full/full-ne, tagged
// entities for ne-full); retrieval queries are taken from its spans.
TrainingExample build_example(PipelineMode variant, std::string_view utterance_id,
                              const TaggedHypothesis& reference, const TaggedHypothesis& detection,
                              const EntityDatabase& db, const Lexicon& lex,
                              const TrainDataOptions& opts = {});

// Throws InvalidInput when regions are out of order or their presence does
// not fit the variant.
void check_region_grammar(const TrainingExample& example);

// One JSON record per example: {"id", "variant", "regions": [{"role", "text"}],
// "source", "query_source"}. Returns the number of records written; an I/O
// failure throws IoError carrying the count written so far.
std::size_t write_training_corpus(std::ostream& out, std::span<const TrainingExample> examples);
std::size_t emit_corpus(std::span<const TrainingExample> examples, const std::string& path);
std::vector<TrainingExample> read_training_corpus(std::istream& in, const std::string& source_name);

}  // namespace phonctx

#endif  // PHONCTX_TRAINDATA_H_
