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

#include "phonctx/synthdb.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "phonctx/error.h"
#include "phonctx/rng.h"

namespace phonctx {
namespace {

bool blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; });
}

// Splits "class value... number" into its three parts.
bool split_record(const std::string& line, std::string& cls, std::string& value, std::string& number) {
  auto toks = split_tokens(line);
  if (toks.size() < 3) return false;
  cls = toks.front();
  number = toks.back();
  value.clear();
  for (std::size_t i = 1; i + 1 < toks.size(); ++i) {
    if (!value.empty()) value += ' ';
    value += toks[i];
  }
  return true;
}

double parse_number(const std::string& s, const std::string& source, std::size_t lineno) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(source, lineno, "invalid number '" + s + "'");
  }
}

std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

const std::vector<WeightedSurface> kNoSurfaces;
const std::map<std::size_t, double> kNoSizes;

}  // namespace

void EntityPool::add(const EntityClass& cls, const std::string& surface, double weight) {
  if (!(weight > 0.0)) throw InvalidInput("pool weight for '" + surface + "' must be positive");
  const EntityClass c = normalize_class(cls);
  const std::string norm = normalize_surface(surface);
  if (norm.empty()) throw InvalidInput("empty pool surface");
  auto& list = pool_[c];
  auto [it, inserted] = index_[c].emplace(norm, list.size());
  if (inserted) {
    list.push_back({surface, weight});
  } else {
    list[it->second].weight += weight;
  }
}

const std::vector<WeightedSurface>& EntityPool::surfaces(const EntityClass& cls) const {
  auto it = pool_.find(cls);
  return it == pool_.end() ? kNoSurfaces : it->second;
}

std::vector<EntityClass> EntityPool::classes() const {
  std::vector<EntityClass> out;
  for (const auto& [cls, list] : pool_) out.push_back(cls);
  return out;
}

void SizeDistribution::set(const EntityClass& cls, std::map<std::size_t, double> probs) {
  dist_[normalize_class(cls)] = std::move(probs);
}

const std::map<std::size_t, double>& SizeDistribution::probs(const EntityClass& cls) const {
  auto it = dist_.find(cls);
  return it == dist_.end() ? kNoSizes : it->second;
}

std::vector<EntityClass> SizeDistribution::classes() const {
  std::vector<EntityClass> out;
  for (const auto& [cls, d] : dist_) out.push_back(cls);
  return out;
}

void SizeDistribution::validate() const {
  for (const auto& [cls, d] : dist_) {
    double total = 0.0;
    for (const auto& [n, p] : d) {
      if (!(p >= 0.0)) throw ConfigError("negative size probability for class '" + cls + "'");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-9)
      throw ConfigError("size distribution for class '" + cls + "' sums to " + std::to_string(total));
  }
}

EntityPool read_pool(std::istream& in, const std::string& source_name) {
  EntityPool pool;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line) || line.front() == '#') continue;
    std::string cls, value, number;
    if (!split_record(line, cls, value, number))
      throw ParseError(source_name, lineno, "expected 'class value weight'");
    try {
      pool.add(cls, value, parse_number(number, source_name, lineno));
    } catch (const InvalidInput& e) {
      throw ParseError(source_name, lineno, e.what());
    }
  }
  return pool;
}

EntityPool load_pool(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open pool '" + path + "'");
  return read_pool(in, path);
}

void write_pool(std::ostream& out, const EntityPool& pool) {
  for (const auto& cls : pool.classes())
    for (const auto& ws : pool.surfaces(cls)) out << cls << ' ' << ws.surface << ' ' << format_number(ws.weight) << '\n';
}

SizeDistribution read_sizes(std::istream& in, const std::string& source_name) {
  std::map<EntityClass, std::map<std::size_t, double>> acc;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line) || line.front() == '#') continue;
    auto toks = split_tokens(line);
    if (toks.size() != 3) throw ParseError(source_name, lineno, "expected 'class n probability'");
    double n = parse_number(toks[1], source_name, lineno);
    if (n < 0 || n != std::floor(n)) throw ParseError(source_name, lineno, "n must be a non-negative integer");
    EntityClass cls;
    try {
      cls = normalize_class(toks[0]);
    } catch (const InvalidInput& e) {
      throw ParseError(source_name, lineno, e.what());
    }
    acc[cls][static_cast<std::size_t>(n)] += parse_number(toks[2], source_name, lineno);
  }
  SizeDistribution sizes;
  for (auto& [cls, d] : acc) sizes.set(cls, std::move(d));
  sizes.validate();
  return sizes;
}

SizeDistribution load_sizes(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open size distribution '" + path + "'");
  return read_sizes(in, path);
}

void write_sizes(std::ostream& out, const SizeDistribution& sizes) {
  for (const auto& cls : sizes.classes())
    for (const auto& [n, p] : sizes.probs(cls)) out << cls << ' ' << n << ' ' << format_number(p) << '\n';
}

std::vector<std::size_t> weighted_sample_without_replacement(std::span<const double> weights,
                                                             std::size_t k, std::uint64_t seed) {
  k = std::min(k, weights.size());
  Rng rng(seed);
  std::vector<std::pair<double, std::size_t>> keys;
  keys.reserve(weights.size());
  // log(u) / w ranks identically to u^(1/w).
  for (std::size_t i = 0; i < weights.size(); ++i)
    keys.emplace_back(std::log(rng.uniform_open()) / weights[i], i);
  std::partial_sort(keys.begin(), keys.begin() + static_cast<std::ptrdiff_t>(k), keys.end(),
                    [](const auto& a, const auto& b) {
                      return a.first != b.first ? a.first > b.first : a.second < b.second;
                    });
  std::vector<std::size_t> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(keys[i].second);
  return out;
}

SynthesisResult synthesize(const EntityPool& pool, const SizeDistribution& sizes,
                           std::span<const ReferenceEntity> references, std::uint64_t seed,
                           const Lexicon& lex, PoolSampling sampling) {
  sizes.validate();
  SynthesisResult result;
  auto add = [&](const EntityClass& cls, const std::string& surface, std::string id) {
    NamedEntity e;
    e.id = std::move(id);
    e.surface = surface;
    e.cls = cls;
    e.pronunciations = pronounce(lex, surface);
    result.db.add(std::move(e));
  };

  for (const auto& cls : sizes.classes()) {
    const auto& probs = sizes.probs(cls);
    const std::uint64_t class_seed = mix_seed(seed, stable_hash(cls));
    Rng rng(class_seed);
    double u = rng.uniform01();
    std::size_t n = probs.empty() ? 0 : probs.rbegin()->first;
    double acc = 0.0;
    for (const auto& [count, p] : probs) {
      acc += p;
      if (u < acc) {
        n = count;
        break;
      }
    }
    const auto& surfaces = pool.surfaces(cls);
    if (n > surfaces.size()) {
      result.warnings.push_back("class '" + cls + "': drew " + std::to_string(n) + " entities from a pool of " +
                                std::to_string(surfaces.size()) + "; clamped");
      n = surfaces.size();
    }
    std::vector<double> weights;
    weights.reserve(surfaces.size());
    for (const auto& ws : surfaces) weights.push_back(sampling == PoolSampling::kUniform ? 1.0 : ws.weight);
    std::size_t k = 0;
    for (std::size_t idx : weighted_sample_without_replacement(weights, n, splitmix64(class_seed)))
      add(cls, surfaces[idx].surface, cls + "-" + std::to_string(k++));
  }

  std::size_t r = 0;
  for (const auto& ref : references) {
    EntityClass cls = normalize_class(ref.cls);
    if (!result.db.contains_surface(cls, ref.surface)) add(cls, ref.surface, cls + "-ref-" + std::to_string(r));
    ++r;
  }
  return result;
}

EntityPool estimate_pool(std::span<const TaggedHypothesis> corpus) {
  EntityPool pool;
  for (const auto& hyp : corpus)
    for (const auto& s : hyp.spans) pool.add(s.cls, s.surface, 1.0);
  return pool;
}

}  // namespace phonctx
