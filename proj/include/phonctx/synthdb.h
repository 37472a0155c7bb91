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

#ifndef PHONCTX_SYNTHDB_H_
#define PHONCTX_SYNTHDB_H_

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "phonctx/phoneme.h"
#include "phonctx/retrieval.h"
#include "phonctx/tags.h"

namespace phonctx {

struct WeightedSurface {
  std::string surface;
  double weight = 1.0;
};

// Class-conditional entity pool with sampling weights.
class EntityPool {
 public:
  // Accumulates weight when the surface is already present.
  void add(const EntityClass& cls, const std::string& surface, double weight);

  const std::vector<WeightedSurface>& surfaces(const EntityClass& cls) const;
  std::vector<EntityClass> classes() const;
  bool empty() const { return pool_.empty(); }

 private:
  std::map<EntityClass, std::vector<WeightedSurface>> pool_;
  std::map<EntityClass, std::map<std::string, std::size_t>> index_;
};

// Per-class histogram over entity counts.
class SizeDistribution {
 public:
  void set(const EntityClass& cls, std::map<std::size_t, double> probs);
  const std::map<std::size_t, double>& probs(const EntityClass& cls) const;
  std::vector<EntityClass> classes() const;

  // Throws ConfigError unless every class sums to 1 within 1e-9.
  void validate() const;

 private:
  std::map<EntityClass, std::map<std::size_t, double>> dist_;
};

// "class value weight" lines; the value may contain spaces.
EntityPool read_pool(std::istream& in, const std::string& source_name);
EntityPool load_pool(const std::string& path);
void write_pool(std::ostream& out, const EntityPool& pool);

// "class n probability" lines.
SizeDistribution read_sizes(std::istream& in, const std::string& source_name);
SizeDistribution load_sizes(const std::string& path);
void write_sizes(std::ostream& out, const SizeDistribution& sizes);

struct ReferenceEntity {
  EntityClass cls;
  std::string surface;
};

enum class PoolSampling { kWeighted, kUniform };

struct SynthesisResult {
  EntityDatabase db;
  std::vector<std::string> warnings;
};

// Draws n(c) from the size distribution, samples n(c) distinct surfaces
// without replacement (Efraimidis-Spirakis keys), then adds any missing
// reference entity. Counts above the pool size are clamped with a warning.
SynthesisResult synthesize(const EntityPool& pool, const SizeDistribution& sizes,
                           std::span<const ReferenceEntity> references, std::uint64_t seed,
                           const Lexicon& lex, PoolSampling sampling = PoolSampling::kWeighted);

// Indices of `k` items drawn without replacement with probability
// proportional to weight at each draw.
std::vector<std::size_t> weighted_sample_without_replacement(std::span<const double> weights,
                                                             std::size_t k, std::uint64_t seed);

// Occurrence counts of tagged entities per class.
EntityPool estimate_pool(std::span<const TaggedHypothesis> corpus);

// Per-utterance seed.
inline std::uint64_t utterance_seed(std::uint64_t seed, std::size_t index) { return seed ^ index; }

}  // namespace phonctx

#endif  // PHONCTX_SYNTHDB_H_
