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

#include "phonctx/retrieval.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "phonctx/error.h"

namespace phonctx {
namespace {

using json = nlohmann::json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::size_t max_edits_for(double threshold, std::size_t query_len) {
  if (!std::isfinite(threshold)) return std::numeric_limits<std::size_t>::max();
  // One extra edit of slack; admission is decided on exact values afterwards.
  return static_cast<std::size_t>(std::floor(threshold * static_cast<double>(query_len))) + 1;
}

}  // namespace

EntityClass normalize_class(std::string_view label) {
  EntityClass out;
  for (char c : trim(label)) {
    char l = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (!std::isalnum(static_cast<unsigned char>(l)) && l != '_' && l != '-')
      throw InvalidInput("entity class '" + std::string(label) + "' has invalid character");
    out += l;
  }
  if (out.empty()) throw InvalidInput("empty entity class");
  if (out == "s")
    throw InvalidInput("'" + out + "' is reserved for region delimiters");
  return out;
}

const std::set<EntityClass>& default_classes() {
  static const std::set<EntityClass> classes{"app", "contact", "playlist"};
  return classes;
}

void EntityDatabase::add(NamedEntity entity) {
  if (entity.pronunciations.empty())
    throw InvalidInput("entity '" + entity.surface + "' has no pronunciation");
  for (const auto& p : entity.pronunciations)
    if (p.empty()) throw InvalidInput("entity '" + entity.surface + "' has an empty pronunciation");
  entity.cls = normalize_class(entity.cls);
  entity.normalized = normalize_surface(entity.surface);
  auto& part = partitions_[entity.cls];
  for (const auto& other : part)
    if (other.id == entity.id)
      throw InvalidInput("duplicate id '" + entity.id + "' in class '" + entity.cls + "'");
  part.push_back(std::move(entity));
}

std::span<const NamedEntity> EntityDatabase::partition(const EntityClass& cls) const {
  auto it = partitions_.find(cls);
  if (it == partitions_.end()) return {};
  return it->second;
}

bool EntityDatabase::contains_surface(const EntityClass& cls, std::string_view surface) const {
  const std::string norm = normalize_surface(surface);
  auto part = partition(cls);
  return std::any_of(part.begin(), part.end(),
                     [&](const NamedEntity& e) { return e.normalized == norm; });
}

std::set<EntityClass> EntityDatabase::classes() const {
  std::set<EntityClass> out;
  for (const auto& [cls, part] : partitions_)
    if (!part.empty()) out.insert(cls);
  return out;
}

std::size_t EntityDatabase::size() const {
  std::size_t n = 0;
  for (const auto& [cls, part] : partitions_) n += part.size();
  return n;
}

EntityDatabase read_database(std::istream& in, const std::string& source_name, const Lexicon& lex) {
  EntityDatabase db;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(source_name, lineno, std::string("invalid JSON: ") + e.what());
    }
    if (!rec.is_object()) throw ParseError(source_name, lineno, "record is not an object");
    auto field = [&](const char* name) -> std::string {
      auto it = rec.find(name);
      if (it == rec.end() || !it->is_string() || trim(it->get<std::string>()).empty())
        throw ParseError(source_name, lineno, std::string("missing field '") + name + "'");
      return it->get<std::string>();
    };
    NamedEntity e;
    e.surface = field("surface");
    try {
      e.cls = normalize_class(field("class"));
    } catch (const InvalidInput& err) {
      throw ParseError(source_name, lineno, err.what());
    }
    e.id = rec.contains("id") ? field("id") : "L" + std::to_string(lineno);
    if (auto it = rec.find("prons"); it != rec.end()) {
      if (!it->is_array()) throw ParseError(source_name, lineno, "'prons' must be a list");
      for (const auto& p : *it) {
        if (!p.is_string()) throw ParseError(source_name, lineno, "'prons' entries must be strings");
        Pronunciation pron = Pronunciation::parse(p.get<std::string>());
        if (pron.empty()) throw ParseError(source_name, lineno, "empty pronunciation");
        e.pronunciations.push_back(std::move(pron));
      }
    }
    if (e.pronunciations.empty()) {
      try {
        e.pronunciations = pronounce(lex, e.surface);
      } catch (const InvalidInput& err) {
        throw InvalidInput("cannot pronounce entity '" + e.surface + "': " + err.what());
      }
    }
    try {
      db.add(std::move(e));
    } catch (const InvalidInput& err) {
      throw ParseError(source_name, lineno, err.what());
    }
  }
  return db;
}

EntityDatabase load_database(const std::string& path, const Lexicon& lex) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open database '" + path + "'");
  return read_database(in, path, lex);
}

void write_database(std::ostream& out, const EntityDatabase& db, bool with_prons) {
  for (const auto& cls : db.classes()) {
    for (const auto& e : db.partition(cls)) {
      json rec{{"id", e.id}, {"surface", e.surface}, {"class", e.cls}};
      if (with_prons) {
        json prons = json::array();
        for (const auto& p : e.pronunciations) prons.push_back(p.str());
        rec["prons"] = std::move(prons);
      }
      out << rec.dump() << '\n';
    }
  }
}

void RetrievalConfig::validate() const {
  if (max_candidates < 1) throw ConfigError("max_candidates must be >= 1");
  if (!(relative_factor > 0.0)) throw ConfigError("relative_factor must be > 0");
  if (!(absolute_floor >= 0.0)) throw ConfigError("absolute_floor must be >= 0");
}

bool candidate_less(const NamedEntity& a, const NpdScore& sa, const NamedEntity& b,
                    const NpdScore& sb) {
  if (sa.value != sb.value) return sa.value < sb.value;
  if (sa.edit_distance != sb.edit_distance) return sa.edit_distance < sb.edit_distance;
  if (a.normalized != b.normalized) return a.normalized < b.normalized;
  return a.id < b.id;
}

RetrievalResult retrieve(const EntityDatabase& db, std::span<const Pronunciation> query_prons,
                         const EntityClass& cls, const RetrievalConfig& cfg,
                         std::string_view query_surface) {
  cfg.validate();
  if (query_prons.empty()) throw InvalidInput("retrieve: empty query pronunciation list");
  for (const auto& q : query_prons)
    if (q.empty()) throw InvalidInput("retrieve: empty query pronunciation");

  RetrievalResult result;
  result.query_surface = std::string(query_surface);
  result.query_class = cls;
  auto part = db.partition(cls);
  if (part.empty()) return result;

  struct Scored {
    std::size_t index;
    NpdScore score;
  };
  std::vector<Scored> scored;
  scored.reserve(part.size());

  if (cfg.selection == Selection::kTopK) {
    for (std::size_t i = 0; i < part.size(); ++i)
      scored.push_back({i, npd_multi(query_prons, part[i].pronunciations)});
  } else {
    // Entities above max(best, factor * best, floor) can neither become the
    // best nor pass the rule, so their distances only need to be bounded.
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> max_edits(query_prons.size(), std::numeric_limits<std::size_t>::max());
    for (std::size_t i = 0; i < part.size(); ++i) {
      auto s = npd_multi_bounded(query_prons, part[i].pronunciations, max_edits);
      if (!s) continue;
      scored.push_back({i, *s});
      if (s->value < best) {
        best = s->value;
        double threshold = std::max({best, cfg.relative_factor * best, cfg.absolute_floor});
        for (std::size_t q = 0; q < query_prons.size(); ++q)
          max_edits[q] = max_edits_for(threshold, query_prons[q].size());
      }
    }
    std::erase_if(scored, [&](const Scored& s) {
      return !(s.score.value <= cfg.relative_factor * best || s.score.value < cfg.absolute_floor);
    });
  }

  auto less = [&](const Scored& a, const Scored& b) {
    return candidate_less(part[a.index], a.score, part[b.index], b.score);
  };
  const std::size_t keep = std::min(cfg.max_candidates, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep), scored.end(),
                    less);
  scored.resize(keep);

  result.candidates.reserve(keep);
  for (const auto& s : scored) result.candidates.push_back({part[s.index], s.score});
  return result;
}

std::string build_prompt(std::span<const std::string> surfaces, const PromptTemplate& tmpl) {
  std::string out = tmpl.open + " ";
  for (std::size_t i = 0; i < surfaces.size(); ++i) {
    if (i) out += tmpl.separator;
    out += surfaces[i];
  }
  if (!surfaces.empty()) out += " ";
  out += tmpl.close;
  return out;
}

std::string build_prompt(const RetrievalResult& result, const PromptTemplate& tmpl) {
  std::vector<std::string> surfaces;
  surfaces.reserve(result.candidates.size());
  for (const auto& c : result.candidates) surfaces.push_back(c.entity.surface);
  return build_prompt(surfaces, tmpl);
}

std::vector<std::string> parse_prompt(std::string_view prompt, const PromptTemplate& tmpl) {
  std::vector<std::string> out;
  auto open = prompt.find(tmpl.open);
  if (open == std::string_view::npos) return out;
  auto body_start = open + tmpl.open.size();
  auto close = prompt.find(tmpl.close, body_start);
  std::string_view body =
      prompt.substr(body_start, close == std::string_view::npos ? std::string_view::npos
                                                                : close - body_start);
  std::string_view sep = trim(tmpl.separator);
  if (sep.empty()) sep = tmpl.separator;
  std::size_t pos = 0;
  while (pos <= body.size()) {
    auto next = body.find(sep, pos);
    std::string_view item = trim(body.substr(pos, next == std::string_view::npos ? std::string_view::npos
                                                                                 : next - pos));
    if (!item.empty()) out.emplace_back(item);
    if (next == std::string_view::npos) break;
    pos = next + sep.size();
  }
  return out;
}

}  // namespace phonctx
