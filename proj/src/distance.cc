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

#include "phonctx/distance.h"

#include "phonctx/error.h"

namespace phonctx {

std::size_t phoneme_edit_distance(const Pronunciation& a, const Pronunciation& b) {
  return edit_distance(a.phonemes(), b.phonemes());
}

bool npd_less(const NpdScore& a, const NpdScore& b) {
  if (a.value != b.value) return a.value < b.value;
  if (a.edit_distance != b.edit_distance) return a.edit_distance < b.edit_distance;
  return a.query_len < b.query_len;
}

NpdScore make_npd(std::size_t edit_distance, std::size_t query_len) {
  return NpdScore{static_cast<double>(edit_distance) / static_cast<double>(query_len), query_len,
                  edit_distance};
}

NpdScore npd(const Pronunciation& query, const Pronunciation& entry) {
  if (query.empty()) throw InvalidInput("npd: empty query pronunciation");
  return make_npd(phoneme_edit_distance(query, entry), query.size());
}

NpdScore npd_multi(std::span<const Pronunciation> queries, std::span<const Pronunciation> entries) {
  if (queries.empty() || entries.empty())
    throw InvalidInput("npd_multi: empty pronunciation list");
  NpdScore best;
  bool have = false;
  for (const auto& q : queries) {
    for (const auto& e : entries) {
      NpdScore s = npd(q, e);
      if (!have || npd_less(s, best)) {
        best = s;
        have = true;
      }
    }
  }
  return best;
}

std::optional<NpdScore> npd_multi_bounded(std::span<const Pronunciation> queries,
                                          std::span<const Pronunciation> entries,
                                          std::span<const std::size_t> max_edits) {
  if (queries.empty() || entries.empty())
    throw InvalidInput("npd_multi: empty pronunciation list");
  std::optional<NpdScore> best;
  for (std::size_t qi = 0; qi < queries.size(); ++qi) {
    const auto& q = queries[qi];
    if (q.empty()) throw InvalidInput("npd: empty query pronunciation");
    for (const auto& e : entries) {
      auto d = edit_distance_bounded(q.phonemes(), e.phonemes(), max_edits[qi]);
      if (!d) continue;
      NpdScore s = make_npd(*d, q.size());
      if (!best || npd_less(s, *best)) best = s;
    }
  }
  return best;
}

}  // namespace phonctx
