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

#ifndef PHONCTX_DISTANCE_H_
#define PHONCTX_DISTANCE_H_

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "phonctx/phoneme.h"

namespace phonctx {

// Unit-cost Levenshtein distance over any equality-comparable symbols.
// Two rolling rows sized by the shorter input.
template <typename T>
std::size_t edit_distance(std::span<const T> a, std::span<const T> b) {
  if (a.size() < b.size()) std::swap(a, b);
  if (b.empty()) return a.size();
  std::vector<std::size_t> prev(b.size() + 1);
  std::vector<std::size_t> cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

// Exact distance if it is <= bound, nullopt otherwise. Stops as soon as the
// row minimum exceeds the bound; the row minimum never decreases.
template <typename T>
std::optional<std::size_t> edit_distance_bounded(std::span<const T> a, std::span<const T> b,
                                                 std::size_t bound) {
  if (a.size() < b.size()) std::swap(a, b);
  if (a.size() - b.size() > bound) return std::nullopt;
  if (b.empty()) return a.size();
  std::vector<std::size_t> prev(b.size() + 1);
  std::vector<std::size_t> cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    std::size_t row_min = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
      row_min = std::min(row_min, cur[j]);
    }
    if (row_min > bound) return std::nullopt;
    std::swap(prev, cur);
  }
  if (prev[b.size()] > bound) return std::nullopt;
  return prev[b.size()];
}

std::size_t phoneme_edit_distance(const Pronunciation& a, const Pronunciation& b);

// Normalized phonetic distance: edit distance divided by the query length.
struct NpdScore {
  double value = 0.0;
  std::size_t query_len = 0;
  std::size_t edit_distance = 0;

  friend bool operator==(const NpdScore&, const NpdScore&) = default;
};

// Strict weak order used wherever scores compete: value, then edit
// distance, then query length.
bool npd_less(const NpdScore& a, const NpdScore& b);

NpdScore make_npd(std::size_t edit_distance, std::size_t query_len);

// Not symmetric: the query length is the denominator. Throws InvalidInput on
// an empty query.
NpdScore npd(const Pronunciation& query, const Pronunciation& entry);

// Minimum over the cross product of query and entry pronunciations.
NpdScore npd_multi(std::span<const Pronunciation> queries, std::span<const Pronunciation> entries);

// As npd_multi, but pairs whose edit distance exceeds max_edits[query index]
// are skipped. Returns nullopt when every pair was skipped.
std::optional<NpdScore> npd_multi_bounded(std::span<const Pronunciation> queries,
                                          std::span<const Pronunciation> entries,
                                          std::span<const std::size_t> max_edits);

}  // namespace phonctx

#endif  // PHONCTX_DISTANCE_H_
