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

#include "phonctx/benchmark.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <set>
#include <string>
#include <string_view>

#include "phonctx/rng.h"
#include "phonctx/tags.h"

namespace phonctx {
namespace {

constexpr std::array<std::string_view, 22> kOnsets = {
    "b", "d", "f", "g", "h", "j", "k", "l", "m", "n", "p",
    "r", "s", "t", "v", "w", "z", "sh", "ch", "th", "", ""};
constexpr std::array<std::string_view, 5> kVowels = {"a", "e", "i", "o", "u"};
constexpr std::array<std::string_view, 9> kCodas = {"", "", "", "n", "l", "r", "s", "m", "t"};

constexpr std::array<std::string_view, 6> kOneContact = {
    "call {0}", "text {0}", "send a message to {0}", "facetime {0}", "call {0} on mobile",
    "remind {0} about the meeting"};
constexpr std::array<std::string_view, 2> kTwoContacts = {"call {0} and {1}",
                                                          "start a group chat with {0} and {1}"};
constexpr std::array<std::string_view, 4> kNoContact = {"play some jazz", "what is the weather today",
                                                        "set a timer for ten minutes",
                                                        "turn on the kitchen lights"};

template <std::size_t N>
std::string_view pick(Rng& rng, const std::array<std::string_view, N>& items) {
  return items[rng.uniform(N)];
}

std::string make_word(Rng& rng) {
  std::string w;
  const std::size_t syllables = 2 + rng.uniform(2);
  for (std::size_t i = 0; i < syllables; ++i) {
    w += pick(rng, kOnsets);
    w += pick(rng, kVowels);
    if (i + 1 == syllables || rng.bernoulli(0.3)) w += pick(rng, kCodas);
  }
  w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
  return w;
}

std::string fill(std::string_view tmpl, std::span<const std::string> tagged) {
  std::string out;
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    if (tmpl[i] == '{' && i + 2 < tmpl.size() && tmpl[i + 2] == '}') {
      out += tagged[static_cast<std::size_t>(tmpl[i + 1] - '0')];
      i += 2;
    } else {
      out += tmpl[i];
    }
  }
  return out;
}

std::string draw_contact(Rng& rng, const std::vector<WeightedSurface>& names, const std::vector<double>& cdf) {
  const double u = rng.uniform01() * cdf.back();
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  std::size_t i = std::min(static_cast<std::size_t>(it - cdf.begin()), names.size() - 1);
  return names[i].surface;
}

}  // namespace

EntityPool synthetic_name_pool(std::size_t size, std::uint64_t seed) {
  Rng rng(mix_seed(seed, stable_hash("name-pool")));
  const Lexicon empty;
  EntityPool pool;
  std::set<std::string> seen_prons;
  std::size_t rank = 0;
  while (rank < size) {
    std::string name = make_word(rng);
    if (rng.bernoulli(0.35)) name += " " + make_word(rng);
    std::string pron = pronounce(empty, name).front().str();
    if (!seen_prons.insert(pron).second) continue;
    pool.add("contact", name, 1.0 / std::pow(static_cast<double>(rank + 1), 0.6));
    ++rank;
  }
  return pool;
}

std::vector<Utterance> synthetic_corpus(const EntityPool& pool, const BenchmarkConfig& cfg) {
  Rng rng(mix_seed(cfg.seed, stable_hash("corpus")));
  const auto& names = pool.surfaces("contact");
  std::vector<double> cdf;
  double acc = 0.0;
  for (const auto& n : names) cdf.push_back(acc += n.weight);

  std::vector<Utterance> out;
  out.reserve(cfg.utterances);
  for (std::size_t i = 0; i < cfg.utterances; ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "utt-%05zu", i);
    const double u = rng.uniform01();
    std::string text;
    if (names.empty() || u < cfg.no_contact_fraction) {
      text = std::string(pick(rng, kNoContact));
    } else if (u < cfg.no_contact_fraction + cfg.two_contact_fraction) {
      std::string a = draw_contact(rng, names, cdf);
      std::string b;
      do {
        b = draw_contact(rng, names, cdf);
      } while (b == a && names.size() > 1);
      std::vector<std::string> tagged{"<contact> " + a + " </contact>", "<contact> " + b + " </contact>"};
      text = fill(pick(rng, kTwoContacts), tagged);
    } else {
      std::vector<std::string> tagged{"<contact> " + draw_contact(rng, names, cdf) + " </contact>"};
      text = fill(pick(rng, kOneContact), tagged);
    }
    out.push_back({id, text});
  }
  return out;
}

Benchmark make_benchmark(const BenchmarkConfig& cfg, const Lexicon& lex) {
  Benchmark b;
  b.pool = synthetic_name_pool(cfg.pool_size, cfg.seed);
  b.sizes.set("contact", {{cfg.contacts_per_db, 1.0}});
  auto corpus = synthetic_corpus(b.pool, cfg);
  b.items.reserve(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    std::vector<ReferenceEntity> refs;
    for (const auto& s : parse_tagged(corpus[i].transcript).spans) refs.push_back({s.cls, s.surface});
    auto synth = synthesize(b.pool, b.sizes, refs, utterance_seed(cfg.seed, i), lex);
    b.items.push_back({std::move(corpus[i]), std::make_shared<const EntityDatabase>(std::move(synth.db))});
  }
  return b;
}

}  // namespace phonctx
