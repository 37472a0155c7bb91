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

#ifndef PHONCTX_BENCHMARK_H_
#define PHONCTX_BENCHMARK_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "phonctx/decoder.h"
#include "phonctx/pipeline.h"
#include "phonctx/synthdb.h"

namespace phonctx {

// Synthetic contact-recognition benchmark: a pool of invented contact names,
// voice-assistant style utterances that mention them, and a personal database
// per utterance synthesized from the pool.
struct BenchmarkConfig {
  std::size_t utterances = 1000;
  std::size_t pool_size = 4000;
  std::size_t contacts_per_db = 300;
  double two_contact_fraction = 0.1;
  double no_contact_fraction = 0.1;
  std::uint64_t seed = 7;
};

// Contact names with pairwise distinct rule-based pronunciations and
// Zipf-like weights. Roughly a third are two-word names.
EntityPool synthetic_name_pool(std::size_t size, std::uint64_t seed);

// Utterances with ids "utt-00000", ... whose tagged contacts are drawn from
// `pool` by weight.
std::vector<Utterance> synthetic_corpus(const EntityPool& pool, const BenchmarkConfig& cfg);

struct Benchmark {
  EntityPool pool;
  SizeDistribution sizes;
  std::vector<CorpusItem> items;
};

Benchmark make_benchmark(const BenchmarkConfig& cfg, const Lexicon& lex);

}  // namespace phonctx

#endif  // PHONCTX_BENCHMARK_H_
