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

#include "phonctx/pipeline.h"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <exception>
#include <mutex>
#include <set>
#include <thread>
#include <utility>

#include "phonctx/metrics.h"

namespace phonctx {
namespace {

std::string call_decoder(Decoder& decoder, const DecoderRequest& request, const char* stage) {
  try {
    return decoder.decode(request);
  } catch (const std::exception& e) {
    throw PipelineError(stage, e.what());
  }
}

// Decoder output is untrusted: malformed tags degrade to plain text.
TaggedHypothesis parse_output(const std::string& raw, const std::set<EntityClass>& classes,
                              std::vector<std::string>& notes, const char* stage) {
  try {
    return parse_tagged(raw, classes);
  } catch (const TagParseError& e) {
    notes.push_back(std::string(stage) + ": " + e.what() + "; spans dropped");
    TaggedHypothesis h;
    h.raw = raw;
    h.text = strip_tags(raw, classes);
    return h;
  }
}

void retrieve_spans(PipelineTrace& trace, const EntityDatabase& db, const Lexicon& lex,
                    const PipelineOptions& opts) {
  trace.retrieval_skipped = trace.detection.spans.empty();
  for (const auto& span : trace.detection.spans) {
    SpanTrace st;
    st.span = span;
    st.result.query_surface = span.surface;
    st.result.query_class = span.cls;
    try {
      st.query_prons = pronounce(lex, span.surface);
    } catch (const InvalidInput& e) {
      trace.notes.push_back("query '" + span.surface + "' not pronounceable: " + e.what());
    }
    if (!st.query_prons.empty())
      st.result = retrieve(db, st.query_prons, span.cls, opts.retrieval, span.surface);
    trace.spans.push_back(std::move(st));
  }
}

std::string union_prompt(const PipelineTrace& trace, const PipelineOptions& opts) {
  std::vector<RetrievalResult> results;
  results.reserve(trace.spans.size());
  for (const auto& st : trace.spans) results.push_back(st.result);
  return build_prompt(interleave_candidates(results, opts.retrieval.max_candidates), opts.prompt);
}

}  // namespace

std::string_view to_string(PipelineMode mode) {
  switch (mode) {
    case PipelineMode::kFullFull: return "full-full";
    case PipelineMode::kNeFull: return "ne-full";
    case PipelineMode::kFullNe: return "full-ne";
    case PipelineMode::kSimpleReplacement: return "simple";
  }
  return "unknown";
}

PipelineMode parse_mode(std::string_view name) {
  std::string n;
  for (char c : name) n += c == '_' ? '-' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (n == "full-full") return PipelineMode::kFullFull;
  if (n == "ne-full") return PipelineMode::kNeFull;
  if (n == "full-ne") return PipelineMode::kFullNe;
  if (n == "simple" || n == "simple-replacement") return PipelineMode::kSimpleReplacement;
  throw ConfigError("unknown pipeline mode '" + std::string(name) + "'");
}

std::vector<std::string> interleave_candidates(std::span<const RetrievalResult> results,
                                               std::size_t cap) {
  std::vector<std::string> out;
  std::set<std::pair<EntityClass, std::string>> taken;
  for (std::size_t rank = 0; out.size() < cap; ++rank) {
    bool any = false;
    for (const auto& r : results) {
      if (rank >= r.candidates.size()) continue;
      any = true;
      const auto& e = r.candidates[rank].entity;
      if (!taken.emplace(e.cls, e.id).second) continue;
      out.push_back(e.surface);
      if (out.size() == cap) break;
    }
    if (!any) break;
  }
  return out;
}

TaggedHypothesis replace_spans(const TaggedHypothesis& hyp,
                               std::span<const std::string> replacements) {
  if (replacements.size() != hyp.spans.size())
    throw InvalidInput("replace_spans: span count mismatch");
  std::string text;
  std::vector<EntitySpan> spans;
  auto append = [&](std::string_view piece) {
    std::string c = collapse_whitespace(piece);
    if (c.empty()) return;
    if (!text.empty()) text += ' ';
    text += c;
  };
  std::size_t pos = 0;
  for (std::size_t i = 0; i < hyp.spans.size(); ++i) {
    const auto& s = hyp.spans[i];
    append(std::string_view(hyp.text).substr(pos, s.begin - pos));
    std::string repl = collapse_whitespace(replacements[i]);
    if (repl.empty()) repl = s.surface;
    if (!text.empty()) text += ' ';
    std::size_t begin = text.size();
    text += repl;
    spans.push_back({s.cls, repl, begin, text.size(), s.auto_closed});
    pos = s.end;
  }
  append(std::string_view(hyp.text).substr(pos));
  return make_tagged(text, std::move(spans));
}

PipelineOutcome run(PipelineMode mode, const Utterance& utterance, const EntityDatabase& db,
                    const Lexicon& lex, Decoder& detector, Decoder& generator,
                    const PipelineOptions& opts) {
  opts.retrieval.validate();
  PipelineOutcome out;
  out.utterance_id = utterance.id;
  out.mode = mode;
  PipelineTrace& trace = out.trace;

  DecoderRequest detect{utterance, std::nullopt,
                        mode == PipelineMode::kNeFull ? DecodeTask::kNeOnlyDetection
                                                      : DecodeTask::kFullAsr};
  trace.detection_raw = call_decoder(detector, detect, "detection");
  trace.detection = parse_output(trace.detection_raw, opts.classes, trace.notes, "detection");

  if (trace.detection.spans.empty() && mode != PipelineMode::kNeFull) {
    out.final_hypothesis = trace.detection;
    return out;
  }
  retrieve_spans(trace, db, lex, opts);

  switch (mode) {
    case PipelineMode::kFullFull:
    case PipelineMode::kNeFull: {
      trace.prompt = trace.retrieval_skipped ? build_prompt(std::span<const std::string>{}, opts.prompt)
                                             : union_prompt(trace, opts);
      trace.generation_run = true;
      trace.generation_raw = call_decoder(
          generator, DecoderRequest{utterance, trace.prompt, DecodeTask::kFullAsr}, "generation");
      out.final_hypothesis = parse_output(trace.generation_raw, opts.classes, trace.notes, "generation");
      break;
    }
    case PipelineMode::kFullNe: {
      trace.prompt = union_prompt(trace, opts);
      trace.generation_run = true;
      trace.generation_raw = call_decoder(
          generator, DecoderRequest{utterance, trace.prompt, DecodeTask::kNeOnlyGeneration},
          "generation");
      TaggedHypothesis gen = parse_output(trace.generation_raw, opts.classes, trace.notes, "generation");
      if (gen.spans.size() != trace.detection.spans.size()) {
        trace.notes.push_back("generation produced " + std::to_string(gen.spans.size()) +
                              " entities for " + std::to_string(trace.detection.spans.size()) +
                              " spans; detection spans kept");
        out.final_hypothesis = trace.detection;
      } else {
        std::vector<std::string> surfaces;
        for (const auto& s : gen.spans) surfaces.push_back(s.surface);
        out.final_hypothesis = replace_spans(trace.detection, surfaces);
      }
      break;
    }
    case PipelineMode::kSimpleReplacement: {
      std::vector<std::string> surfaces;
      for (const auto& st : trace.spans)
        surfaces.push_back(st.result.candidates.empty() ? st.span.surface
                                                        : st.result.candidates.front().entity.surface);
      out.final_hypothesis = replace_spans(trace.detection, surfaces);
      break;
    }
  }
  return out;
}

std::vector<PipelineOutcome> run_corpus(PipelineMode mode, std::span<const CorpusItem> items,
                                        const Lexicon& lex, Decoder& detector, Decoder& generator,
                                        const PipelineOptions& opts, std::size_t jobs) {
  std::vector<PipelineOutcome> outcomes(items.size());
  auto run_one = [&](std::size_t i) {
    static const EntityDatabase kEmpty;
    const EntityDatabase& db = items[i].db ? *items[i].db : kEmpty;
    outcomes[i] = run(mode, items[i].utterance, db, lex, detector, generator, opts);
  };

  const bool parallel = jobs > 1 && items.size() > 1 && detector.thread_safe() && generator.thread_safe();
  if (!parallel) {
    for (std::size_t i = 0; i < items.size(); ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    std::vector<std::thread> workers;
    for (std::size_t t = 0; t < std::min(jobs, items.size()); ++t) {
      workers.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < items.size();) {
          try {
            run_one(i);
          } catch (...) {
            std::lock_guard lock(failure_mu);
            if (!failure) failure = std::current_exception();
            next = items.size();
          }
        }
      });
    }
    for (auto& w : workers) w.join();
    if (failure) std::rethrow_exception(failure);
  }
  std::stable_sort(outcomes.begin(), outcomes.end(),
                   [](const PipelineOutcome& a, const PipelineOutcome& b) {
                     return a.utterance_id < b.utterance_id;
                   });
  return outcomes;
}

std::vector<SweepRow> sweep_context_size(PipelineMode mode, std::span<const CorpusItem> items,
                                         std::span<const std::size_t> sizes, const Lexicon& lex,
                                         Decoder& detector, Decoder& generator,
                                         const PipelineOptions& opts, std::size_t jobs) {
  std::vector<SweepRow> rows;
  if (items.empty()) return rows;
  for (std::size_t size : sizes) {
    if (size < 1) throw ConfigError("context sizes must be >= 1");
    PipelineOptions o = opts;
    o.retrieval.max_candidates = size;
    o.retrieval.selection = Selection::kTopK;
    auto outcomes = run_corpus(mode, items, lex, detector, generator, o, jobs);

    std::vector<ScoredPair> pairs;
    pairs.reserve(items.size());
    std::vector<const CorpusItem*> by_id;
    for (const auto& it : items) by_id.push_back(&it);
    std::stable_sort(by_id.begin(), by_id.end(), [](const CorpusItem* a, const CorpusItem* b) {
      return a->utterance.id < b->utterance.id;
    });
    for (std::size_t i = 0; i < outcomes.size(); ++i)
      pairs.push_back({by_id[i]->utterance.transcript, outcomes[i].final_hypothesis.raw, ""});
    auto report = corpus_report(pairs, opts.classes);
    SweepRow row;
    row.size = size;
    row.wer = report.front().wer.wer;
    row.ner = report.front().ner.ner;
    row.ref_words = report.front().wer.ref_words;
    row.word_errors = report.front().wer.errors();
    row.ref_entities = report.front().ner.ref_entities;
    row.entity_errors = report.front().ner.entity_errors;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace phonctx
