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

#include "phonctx/metrics.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

#include <json.hpp>

#include "phonctx/phoneme.h"

namespace phonctx {
namespace {

double ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(num) / static_cast<double>(den);
}

TaggedHypothesis parse_lenient(std::string_view raw, const std::set<EntityClass>& classes) {
  try {
    return parse_tagged(raw, classes);
  } catch (const TagParseError&) {
    TaggedHypothesis h;
    h.raw = std::string(raw);
    h.text = strip_tags(raw, classes);
    return h;
  }
}

}  // namespace

WerReport align_words(std::span<const std::string> ref, std::span<const std::string> hyp) {
  const std::size_t n = ref.size();
  const std::size_t m = hyp.size();
  std::vector<std::size_t> d((n + 1) * (m + 1));
  auto at = [&](std::size_t i, std::size_t j) -> std::size_t& { return d[i * (m + 1) + j]; };
  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = i;
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = j;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= m; ++j)
      at(i, j) = std::min({at(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0 : 1), at(i, j - 1) + 1,
                           at(i - 1, j) + 1});

  WerReport r;
  r.ref_words = n;
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const bool same = ref[i - 1] == hyp[j - 1];
      if (at(i, j) == at(i - 1, j - 1) + (same ? 0 : 1)) {
        if (!same) ++r.substitutions;
        --i;
        --j;
        continue;
      }
    }
    if (j > 0 && at(i, j) == at(i, j - 1) + 1) {
      ++r.insertions;
      --j;
    } else {
      ++r.deletions;
      --i;
    }
  }
  r.wer = n == 0 ? 0.0 : static_cast<double>(r.errors()) / static_cast<double>(n);
  return r;
}

std::vector<std::string> scoring_words(std::string_view text, const std::set<EntityClass>& classes) {
  std::string stripped = strip_tags(text, classes);
  for (auto& c : stripped) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return split_tokens(stripped);
}

WerReport wer(std::string_view reference, std::string_view hypothesis,
              const std::set<EntityClass>& classes) {
  auto ref = scoring_words(reference, classes);
  if (ref.empty()) throw InvalidInput("wer: reference has no words");
  return align_words(ref, scoring_words(hypothesis, classes));
}

NerReport ner(const TaggedHypothesis& reference, const TaggedHypothesis& hypothesis) {
  // Longest common subsequence over (class, normalized surface).
  auto key = [](const EntitySpan& s) { return s.cls + '\x1f' + normalize_surface(s.surface); };
  std::vector<std::string> ref;
  std::vector<std::string> hyp;
  for (const auto& s : reference.spans) ref.push_back(key(s));
  for (const auto& s : hypothesis.spans) hyp.push_back(key(s));
  const std::size_t n = ref.size();
  const std::size_t m = hyp.size();
  std::vector<std::size_t> prev(m + 1, 0);
  std::vector<std::size_t> cur(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j)
      cur[j] = ref[i - 1] == hyp[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    std::swap(prev, cur);
  }
  const std::size_t correct = prev[m];

  NerReport r;
  r.ref_entities = n;
  r.entity_errors = n - correct;
  r.false_positives = m - correct;
  r.ner = ratio(r.entity_errors, n);
  return r;
}

std::vector<ModeScore> corpus_report(std::span<const ScoredPair> pairs,
                                     const std::set<EntityClass>& classes) {
  std::vector<ModeScore> rows;
  std::map<std::string, std::size_t> index;
  for (const auto& p : pairs) {
    auto [it, inserted] = index.emplace(p.mode, rows.size());
    if (inserted) rows.push_back(ModeScore{p.mode, 0, {}, {}});
    ModeScore& row = rows[it->second];
    ++row.utterances;
    WerReport w = align_words(scoring_words(p.reference, classes), scoring_words(p.hypothesis, classes));
    row.wer.substitutions += w.substitutions;
    row.wer.insertions += w.insertions;
    row.wer.deletions += w.deletions;
    row.wer.ref_words += w.ref_words;
    NerReport e = ner(parse_lenient(p.reference, classes), parse_lenient(p.hypothesis, classes));
    row.ner.ref_entities += e.ref_entities;
    row.ner.entity_errors += e.entity_errors;
    row.ner.false_positives += e.false_positives;
  }
  for (auto& row : rows) {
    row.wer.wer = ratio(row.wer.errors(), row.wer.ref_words);
    row.ner.ner = ratio(row.ner.entity_errors, row.ner.ref_entities);
  }
  return rows;
}

void write_report_jsonl(std::ostream& out, std::span<const ModeScore> rows) {
  auto num = [](double v) { return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v); };
  for (const auto& r : rows) {
    nlohmann::json rec{{"mode", r.mode},
                       {"utterances", r.utterances},
                       {"ref_words", r.wer.ref_words},
                       {"substitutions", r.wer.substitutions},
                       {"insertions", r.wer.insertions},
                       {"deletions", r.wer.deletions},
                       {"wer", num(r.wer.wer)},
                       {"ref_entities", r.ner.ref_entities},
                       {"entity_errors", r.ner.entity_errors},
                       {"false_positives", r.ner.false_positives},
                       {"ner", num(r.ner.ner)}};
    out << rec.dump() << '\n';
  }
}

void write_report_table(std::ostream& out, std::span<const ModeScore> rows) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-14s %8s %8s %8s %8s\n", "mode", "utts", "WER%", "NER%", "#NE");
  out << buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-14s %8zu %8.2f %8.2f %8zu\n", r.mode.c_str(), r.utterances,
                  100.0 * r.wer.wer, 100.0 * r.ner.ner, r.ner.ref_entities);
    out << buf;
  }
}

}  // namespace phonctx
