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

#include "phonctx/traindata.h"

#include <fstream>

#include <json.hpp>

#include "phonctx/error.h"

namespace phonctx {
namespace {

using json = nlohmann::json;

std::string canonical(const TaggedHypothesis& h) { return serialize_tagged(h.text, h.spans); }

std::string retrieval_prompt(std::span<const EntitySpan> queries, const EntityDatabase& db,
                             const Lexicon& lex, const TrainDataOptions& opts) {
  std::vector<RetrievalResult> results;
  for (const auto& span : queries) {
    std::vector<Pronunciation> prons;
    try {
      prons = pronounce(lex, span.surface);
    } catch (const InvalidInput&) {
      continue;
    }
    results.push_back(retrieve(db, prons, span.cls, opts.retrieval, span.surface));
  }
  return build_prompt(interleave_candidates(results, opts.retrieval.max_candidates), opts.prompt);
}

QuerySource parse_query_source(std::string_view s) {
  if (s == "none") return QuerySource::kNone;
  if (s == "detection") return QuerySource::kDetection;
  if (s == "reference") return QuerySource::kReference;
  throw InvalidInput("unknown query source '" + std::string(s) + "'");
}

}  // namespace

std::string_view to_string(RegionRole role) {
  switch (role) {
    case RegionRole::kDetectionTarget: return "detection-target";
    case RegionRole::kPrompt: return "prompt";
    case RegionRole::kGenerationTarget: return "generation-target";
  }
  return "unknown";
}

RegionRole parse_role(std::string_view name) {
  if (name == "detection-target") return RegionRole::kDetectionTarget;
  if (name == "prompt") return RegionRole::kPrompt;
  if (name == "generation-target") return RegionRole::kGenerationTarget;
  throw InvalidInput("unknown region role '" + std::string(name) + "'");
}

std::string_view to_string(QuerySource source) {
  switch (source) {
    case QuerySource::kNone: return "none";
    case QuerySource::kDetection: return "detection";
    case QuerySource::kReference: return "reference";
  }
  return "unknown";
}

std::string TrainingExample::source() const {
  std::string out;
  for (const auto& r : regions) {
    if (r.text.empty()) continue;
    if (!out.empty()) out += ' ';
    out += r.text;
  }
  return out;
}

TrainingExample build_example(PipelineMode variant, std::string_view utterance_id,
                              const TaggedHypothesis& reference, const TaggedHypothesis& detection,
                              const EntityDatabase& db, const Lexicon& lex,
                              const TrainDataOptions& opts) {
  if (variant == PipelineMode::kSimpleReplacement)
    throw InvalidInput("simple replacement has no training data");
  opts.retrieval.validate();

  TrainingExample ex;
  ex.utterance_id = std::string(utterance_id);
  ex.variant = variant;
  const bool detected = !detection.spans.empty();

  if (variant == PipelineMode::kNeFull) {
    ex.regions.push_back({RegionRole::kDetectionTarget, entities_only(detection)});
    if (detected) {
      ex.regions.push_back({RegionRole::kPrompt, retrieval_prompt(detection.spans, db, lex, opts)});
      ex.query_source = QuerySource::kDetection;
    } else {
      ex.regions.push_back({RegionRole::kPrompt, build_prompt(std::span<const std::string>{}, opts.prompt)});
    }
    ex.regions.push_back({RegionRole::kGenerationTarget, canonical(reference)});
    return ex;
  }

  std::span<const EntitySpan> queries = detection.spans;
  ex.query_source = QuerySource::kDetection;
  if (!detected) {
    if (!opts.teacher_inject || reference.spans.empty()) {
      ex.regions.push_back({RegionRole::kDetectionTarget, canonical(reference)});
      ex.query_source = QuerySource::kNone;
      return ex;
    }
    queries = reference.spans;
    ex.query_source = QuerySource::kReference;
  }
  ex.regions.push_back({RegionRole::kDetectionTarget, canonical(detection)});
  ex.regions.push_back({RegionRole::kPrompt, retrieval_prompt(queries, db, lex, opts)});
  ex.regions.push_back({RegionRole::kGenerationTarget, variant == PipelineMode::kFullNe
                                                           ? entities_only(reference)
                                                           : canonical(reference)});
  return ex;
}

void check_region_grammar(const TrainingExample& ex) {
  const auto& r = ex.regions;
  auto fail = [&](const std::string& why) {
    throw InvalidInput("example '" + ex.utterance_id + "': " + why);
  };
  if (r.empty() || r[0].role != RegionRole::kDetectionTarget) fail("must start with a detection region");
  if (r.size() == 1) {
    if (ex.variant == PipelineMode::kNeFull) fail("ne-full examples need a generation region");
    return;
  }
  if (r.size() != 3 || r[1].role != RegionRole::kPrompt || r[2].role != RegionRole::kGenerationTarget)
    fail("regions must be detection, prompt, generation");
  const std::string& p = r[1].text;
  if (p.rfind("<s>", 0) != 0 || p.size() < 7 || p.compare(p.size() - 4, 4, "</s>") != 0)
    fail("prompt region must be delimited by <s> and </s>");
}

std::size_t write_training_corpus(std::ostream& out, std::span<const TrainingExample> examples) {
  std::size_t written = 0;
  for (const auto& ex : examples) {
    json regions = json::array();
    for (const auto& r : ex.regions) regions.push_back({{"role", to_string(r.role)}, {"text", r.text}});
    json rec{{"id", ex.utterance_id},
             {"variant", to_string(ex.variant)},
             {"regions", std::move(regions)},
             {"source", ex.source()},
             {"query_source", to_string(ex.query_source)}};
    out << rec.dump() << '\n';
    if (!out) throw IoError("write failed after " + std::to_string(written) + " records");
    ++written;
  }
  out.flush();
  if (!out) throw IoError("write failed after " + std::to_string(written) + " records");
  return written;
}

std::size_t emit_corpus(std::span<const TrainingExample> examples, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing; 0 records written");
  return write_training_corpus(out, examples);
}

std::vector<TrainingExample> read_training_corpus(std::istream& in, const std::string& source_name) {
  std::vector<TrainingExample> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      json rec = json::parse(line);
      TrainingExample ex;
      ex.utterance_id = rec.at("id").get<std::string>();
      ex.variant = parse_mode(rec.at("variant").get<std::string>());
      for (const auto& r : rec.at("regions"))
        ex.regions.push_back({parse_role(r.at("role").get<std::string>()), r.at("text").get<std::string>()});
      if (rec.contains("query_source"))
        ex.query_source = parse_query_source(rec["query_source"].get<std::string>());
      out.push_back(std::move(ex));
    } catch (const json::exception& e) {
      throw ParseError(source_name, lineno, e.what());
    } catch (const Error& e) {
      throw ParseError(source_name, lineno, e.what());
    }
  }
  return out;
}

}  // namespace phonctx
