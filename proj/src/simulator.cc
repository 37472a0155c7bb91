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

#include "phonctx/simulator.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>

#include "phonctx/distance.h"
#include "phonctx/rng.h"
#include "phonctx/tags.h"

namespace phonctx {
namespace {

// Inverts the G2P single-letter table where it can; other ARPAbet symbols get
// a common English spelling.
const std::map<std::string, std::string, std::less<>>& respelling_table() {
  static const std::map<std::string, std::string, std::less<>> table{
      {"AA", "o"},  {"AE", "a"},  {"AH", "u"},  {"AO", "aw"}, {"AW", "ow"}, {"AY", "ai"},
      {"B", "b"},   {"CH", "ch"}, {"D", "d"},   {"DH", "th"}, {"EH", "e"},  {"ER", "er"},
      {"EY", "ay"}, {"F", "f"},   {"G", "g"},   {"HH", "h"},  {"IH", "i"},  {"IY", "ee"},
      {"JH", "j"},  {"K", "k"},   {"L", "l"},   {"M", "m"},   {"N", "n"},   {"NG", "ng"},
      {"OW", "oh"}, {"OY", "oy"}, {"P", "p"},   {"R", "r"},   {"S", "s"},   {"SH", "sh"},
      {"T", "t"},   {"TH", "th"}, {"UH", "oo"}, {"UW", "oo"}, {"V", "v"},   {"W", "w"},
      {"Y", "y"},   {"Z", "z"},   {"ZH", "zh"},
  };
  return table;
}

std::string grapheme_for(const Phoneme& p) {
  const auto& table = respelling_table();
  if (auto it = table.find(p); it != table.end()) return it->second;
  std::string out;
  for (char c : p)
    if (std::isalpha(static_cast<unsigned char>(c)))
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

enum Stream : std::uint64_t { kEdits = 1, kTagDrop = 2 };

std::uint64_t entity_seed(std::uint64_t seed, std::string_view utterance_id, std::size_t index,
                          Stream stream) {
  return mix_seed(mix_seed(mix_seed(seed, stable_hash(utterance_id)), index), stream);
}

std::string respell_tokens(const std::vector<Phoneme>& phonemes, const std::vector<std::size_t>& token_of) {
  std::string out;
  std::string word;
  std::size_t current = token_of.empty() ? 0 : token_of.front();
  auto flush = [&] {
    if (word.empty()) return;
    word[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(word[0])));
    if (!out.empty()) out += ' ';
    out += word;
    word.clear();
  };
  for (std::size_t i = 0; i < phonemes.size(); ++i) {
    if (token_of[i] != current) {
      flush();
      current = token_of[i];
    }
    word += grapheme_for(phonemes[i]);
  }
  flush();
  return out;
}

}  // namespace

std::string_view to_string(DecodeTask task) {
  switch (task) {
    case DecodeTask::kFullAsr: return "full_asr";
    case DecodeTask::kNeOnlyDetection: return "ne_only_detection";
    case DecodeTask::kNeOnlyGeneration: return "ne_only_generation";
  }
  return "unknown";
}

void SimulatorConfig::validate() const {
  if (edit_probs.empty()) throw ConfigError("edit distribution is empty");
  double total = 0.0;
  for (double p : edit_probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw ConfigError("edit probabilities must be >= 0");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw ConfigError("edit probabilities sum to " + std::to_string(total) + ", expected 1");
  if (!(tag_drop >= 0.0 && tag_drop <= 1.0)) throw ConfigError("tag_drop must be in [0, 1]");
}

std::vector<double> parse_edit_probs(std::string_view spec) {
  std::vector<double> probs;
  std::size_t pos = 0;
  while (pos < spec.size()) {
    auto comma = spec.find(',', pos);
    std::string_view item = spec.substr(pos, comma == std::string_view::npos ? spec.size() - pos : comma - pos);
    auto colon = item.find(':');
    if (colon == std::string_view::npos)
      throw ConfigError("edit distribution item '" + std::string(item) + "' is not k:p");
    std::size_t k = 0;
    auto kstr = item.substr(0, colon);
    auto [kend, kerr] = std::from_chars(kstr.data(), kstr.data() + kstr.size(), k);
    if (kerr != std::errc{} || kend != kstr.data() + kstr.size() || k > 64)
      throw ConfigError("bad edit count in '" + std::string(item) + "'");
    double p = 0.0;
    try {
      std::size_t used = 0;
      std::string pstr(item.substr(colon + 1));
      p = std::stod(pstr, &used);
      if (used != pstr.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ConfigError("bad probability in '" + std::string(item) + "'");
    }
    if (probs.size() <= k) probs.resize(k + 1, 0.0);
    probs[k] += p;
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (probs.empty()) throw ConfigError("empty edit distribution");
  return probs;
}

std::string respell(const Pronunciation& pron) {
  std::vector<Phoneme> ph(pron.phonemes().begin(), pron.phonemes().end());
  return respell_tokens(ph, std::vector<std::size_t>(ph.size(), 0));
}

SimulatedDecoder::SimulatedDecoder(SimulatorConfig cfg, std::shared_ptr<const Lexicon> lexicon)
    : cfg_(std::move(cfg)), lexicon_(std::move(lexicon)) {
  cfg_.validate();
  if (!lexicon_) lexicon_ = std::make_shared<const Lexicon>();
  const auto& inv = cfg_.inventory.empty() ? g2p_inventory() : cfg_.inventory;
  inventory_.assign(inv.begin(), inv.end());
  if (inventory_.size() < 2) throw ConfigError("simulator inventory needs at least 2 symbols");
  double acc = 0.0;
  for (double p : cfg_.edit_probs) cdf_.push_back(acc += p);
}

HeardEntity SimulatedDecoder::hear(const Utterance& utterance, std::size_t index,
                                   const EntityClass& cls, const std::string& surface) const {
  HeardEntity h;
  h.cls = cls;
  h.truth = surface;
  h.truth_pron = pronounce(*lexicon_, surface).front();

  Rng drop(entity_seed(cfg_.seed, utterance.id, index, kTagDrop));
  h.detected = !drop.bernoulli(cfg_.tag_drop);

  Rng rng(entity_seed(cfg_.seed, utterance.id, index, kEdits));
  const double u = rng.uniform01() * cdf_.back();
  h.edits = static_cast<std::size_t>(std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
  h.edits = std::min(h.edits, cdf_.size() - 1);

  // Token index per phoneme so the respelling keeps word boundaries.
  std::vector<Phoneme> ph;
  std::vector<std::size_t> token_of;
  std::size_t token = 0;
  for (const auto& word : split_tokens(normalize_surface(surface))) {
    const Pronunciation word_pron = pronounce(*lexicon_, word).front();
    for (const auto& p : word_pron.phonemes()) {
      ph.push_back(p);
      token_of.push_back(token);
    }
    ++token;
  }

  for (std::size_t e = 0; e < h.edits; ++e) {
    enum { kSub, kIns, kDel };
    const int op = ph.size() > 1 ? static_cast<int>(rng.uniform(3)) : static_cast<int>(rng.uniform(2));
    if (op == kSub) {
      std::size_t pos = rng.uniform(ph.size());
      Phoneme repl;
      do {
        repl = inventory_[rng.uniform(inventory_.size())];
      } while (repl == ph[pos]);
      ph[pos] = repl;
    } else if (op == kIns) {
      std::size_t pos = rng.uniform(ph.size() + 1);
      std::size_t tok = pos > 0 ? token_of[pos - 1] : token_of[0];
      ph.insert(ph.begin() + static_cast<std::ptrdiff_t>(pos), inventory_[rng.uniform(inventory_.size())]);
      token_of.insert(token_of.begin() + static_cast<std::ptrdiff_t>(pos), tok);
    } else {
      std::size_t pos = rng.uniform(ph.size());
      ph.erase(ph.begin() + static_cast<std::ptrdiff_t>(pos));
      token_of.erase(token_of.begin() + static_cast<std::ptrdiff_t>(pos));
    }
  }
  h.heard_pron = Pronunciation(ph);
  if (h.heard_pron == h.truth_pron) {
    h.heard_text = surface;
  } else {
    h.heard_text = respell_tokens(ph, token_of);
  }
  return h;
}

std::vector<HeardEntity> SimulatedDecoder::channel(const Utterance& utterance) const {
  TaggedHypothesis ref = parse_tagged(utterance.transcript, cfg_.classes);
  std::vector<HeardEntity> out;
  out.reserve(ref.spans.size());
  for (std::size_t i = 0; i < ref.spans.size(); ++i)
    out.push_back(hear(utterance, i, ref.spans[i].cls, ref.spans[i].surface));
  return out;
}

std::string SimulatedDecoder::decode(const DecoderRequest& request) {
  TaggedHypothesis ref;
  try {
    ref = parse_tagged(request.utterance.transcript, cfg_.classes);
  } catch (const Error& e) {
    throw DecoderError("utterance '" + request.utterance.id + "': " + e.what());
  }
  const bool context_aware = request.context_prompt.has_value();
  if (request.task == DecodeTask::kNeOnlyGeneration && !context_aware)
    throw DecoderError("ne_only_generation requires a context prompt");
  if (request.task == DecodeTask::kNeOnlyDetection && context_aware)
    throw DecoderError("ne_only_detection is context-free");

  struct Candidate {
    std::string surface;
    std::vector<Pronunciation> prons;
  };
  std::vector<Candidate> candidates;
  if (context_aware) {
    for (auto& s : parse_prompt(*request.context_prompt)) {
      try {
        auto prons = pronounce(*lexicon_, s);
        candidates.push_back({std::move(s), std::move(prons)});
      } catch (const InvalidInput&) {
      }
    }
  }

  std::vector<EntitySpan> spans;
  std::string text;
  std::size_t pos = 0;
  auto append = [&](std::string_view piece) {
    std::string c = collapse_whitespace(piece);
    if (c.empty()) return;
    if (!text.empty()) text += ' ';
    text += c;
  };
  for (std::size_t i = 0; i < ref.spans.size(); ++i) {
    const auto& rs = ref.spans[i];
    HeardEntity h = hear(request.utterance, i, rs.cls, rs.surface);
    std::string emitted = h.heard_text;
    if (context_aware && h.detected && !candidates.empty()) {
      std::size_t best = 0;
      NpdScore best_score = npd_multi(std::span(&h.heard_pron, 1), candidates[0].prons);
      for (std::size_t c = 1; c < candidates.size(); ++c) {
        NpdScore s = npd_multi(std::span(&h.heard_pron, 1), candidates[c].prons);
        if (s.value < best_score.value) {
          best = c;
          best_score = s;
        }
      }
      emitted = candidates[best].surface;
    }
    append(std::string_view(ref.text).substr(pos, rs.begin - pos));
    if (!text.empty()) text += ' ';
    std::size_t begin = text.size();
    text += collapse_whitespace(emitted);
    if (h.detected) spans.push_back({rs.cls, text.substr(begin), begin, text.size(), false});
    pos = rs.end;
  }
  append(std::string_view(ref.text).substr(pos));

  TaggedHypothesis out = make_tagged(text, std::move(spans));
  if (request.task == DecodeTask::kFullAsr) return out.raw;
  return entities_only(out);
}

std::unique_ptr<Decoder> simulated_decoder(SimulatorConfig cfg,
                                           std::shared_ptr<const Lexicon> lexicon) {
  return std::make_unique<SimulatedDecoder>(std::move(cfg), std::move(lexicon));
}

}  // namespace phonctx
