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

#ifndef PHONCTX_SIMULATOR_H_
#define PHONCTX_SIMULATOR_H_

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "phonctx/decoder.h"
#include "phonctx/phoneme.h"
#include "phonctx/retrieval.h"

namespace phonctx {

struct SimulatorConfig {
  // edit_probs[k] is the probability of applying k phoneme edits to an entity.
  std::vector<double> edit_probs{0.0, 0.5, 0.5};
  double tag_drop = 0.0;
  std::uint64_t seed = 7;
  // Symbols used for substitutions and insertions; empty means the G2P
  // rule-table inventory.
  std::set<Phoneme> inventory;
  std::set<EntityClass> classes = default_classes();

  // Throws ConfigError on negative mass, mass not summing to 1 within 1e-9,
  // or tag_drop outside [0, 1].
  void validate() const;
};

// Parses "k:p,k:p" (e.g. "1:0.5,2:0.5") into edit_probs.
std::vector<double> parse_edit_probs(std::string_view spec);

// Phoneme-to-grapheme respelling of a phoneme sequence; one word per token.
std::string respell(const Pronunciation& pron);

// What the simulated acoustic channel produced for one ground-truth entity.
struct HeardEntity {
  EntityClass cls;
  std::string truth;
  Pronunciation truth_pron;
  Pronunciation heard_pron;
  std::string heard_text;
  std::size_t edits = 0;
  bool detected = true;
};

// Deterministic stand-in for the neural decoder. Context-free tasks corrupt
// each ground-truth entity by k sampled phoneme edits and respell it; tags are
// dropped with probability tag_drop. Context-aware tasks replace each detected
// entity by the prompt candidate with the lowest NPD to the heard
// pronunciation (ties: prompt order), or keep the heard text if the prompt is
// empty. All randomness is keyed on (seed, utterance id, entity index), so the
// same entity is heard identically in every stage.
class SimulatedDecoder : public Decoder {
 public:
  SimulatedDecoder(SimulatorConfig cfg, std::shared_ptr<const Lexicon> lexicon);

  std::string decode(const DecoderRequest& request) override;
  bool thread_safe() const override { return true; }

  std::vector<HeardEntity> channel(const Utterance& utterance) const;
  const SimulatorConfig& config() const { return cfg_; }

 private:
  HeardEntity hear(const Utterance& utterance, std::size_t index, const EntityClass& cls,
                   const std::string& surface) const;

  SimulatorConfig cfg_;
  std::shared_ptr<const Lexicon> lexicon_;
  std::vector<Phoneme> inventory_;
  std::vector<double> cdf_;
};

std::unique_ptr<Decoder> simulated_decoder(SimulatorConfig cfg,
                                           std::shared_ptr<const Lexicon> lexicon);

}  // namespace phonctx

#endif  // PHONCTX_SIMULATOR_H_
