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

#ifndef PHONCTX_RETRIEVAL_H_
#define PHONCTX_RETRIEVAL_H_

#include <cstddef>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "phonctx/distance.h"
#include "phonctx/phoneme.h"

namespace phonctx {

// Entity class label: lowercase, non-empty, no whitespace.
using EntityClass = std::string;

// Lowercases and validates a class label; throws InvalidInput otherwise.
EntityClass normalize_class(std::string_view label);

// Classes known out of the box.
const std::set<EntityClass>& default_classes();

struct NamedEntity {
  std::string id;
  std::string surface;
  std::string normalized;  // normalize_surface(surface)
  EntityClass cls;
  std::vector<Pronunciation> pronunciations;
};

class EntityDatabase {
 public:
  // Throws InvalidInput on an empty pronunciation list, an empty
  // pronunciation, or an id already used within the class.
  void add(NamedEntity entity);

  std::span<const NamedEntity> partition(const EntityClass& cls) const;
  bool contains_surface(const EntityClass& cls, std::string_view surface) const;
  std::set<EntityClass> classes() const;
  std::size_t size() const;

 private:
  std::map<EntityClass, std::vector<NamedEntity>, std::less<>> partitions_;
};

// Line-delimited JSON records {"id", "surface", "class", "prons"?}. Entities
// without "prons" are pronounced through `lex` with rule-based fallback.
EntityDatabase read_database(std::istream& in, const std::string& source_name, const Lexicon& lex);
EntityDatabase load_database(const std::string& path, const Lexicon& lex);
void write_database(std::ostream& out, const EntityDatabase& db, bool with_prons);

enum class Selection {
  kRule,  // NPD <= relative_factor * best, or NPD < absolute_floor; then cap
  kTopK,  // exactly min(max_candidates, |partition|) best candidates
};

struct RetrievalConfig {
  double relative_factor = 1.2;
  double absolute_floor = 0.2;
  std::size_t max_candidates = 10;
  Selection selection = Selection::kRule;

  void validate() const;
};

struct Candidate {
  NamedEntity entity;
  NpdScore score;
};

struct RetrievalResult {
  std::string query_surface;
  EntityClass query_class;
  std::vector<Candidate> candidates;  // ascending NPD
};

// Candidate order: NPD value, edit distance, normalized surface, id.
bool candidate_less(const NamedEntity& a, const NpdScore& sa, const NamedEntity& b,
                    const NpdScore& sb);

RetrievalResult retrieve(const EntityDatabase& db, std::span<const Pronunciation> query_prons,
                         const EntityClass& cls, const RetrievalConfig& cfg = {},
                         std::string_view query_surface = {});

struct PromptTemplate {
  std::string open = "<s>";
  std::string close = "</s>";
  std::string separator = " ; ";
};

std::string build_prompt(const RetrievalResult& result, const PromptTemplate& tmpl = {});
std::string build_prompt(std::span<const std::string> surfaces, const PromptTemplate& tmpl = {});

// Candidate surfaces of a prompt built by build_prompt. Text outside the
// delimiters is ignored.
std::vector<std::string> parse_prompt(std::string_view prompt, const PromptTemplate& tmpl = {});

}  // namespace phonctx

#endif  // PHONCTX_RETRIEVAL_H_
