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

#ifndef PHONCTX_PHONEME_H_
#define PHONCTX_PHONEME_H_

#include <cstddef>
#include <istream>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace phonctx {

// ARPAbet-style symbol with stress digits removed, e.g. "AA", "TH".
using Phoneme = std::string;

// Ordered phoneme sequence for one surface form.
class Pronunciation {
 public:
  Pronunciation() = default;
  explicit Pronunciation(std::vector<Phoneme> phonemes) : phonemes_(std::move(phonemes)) {}
  Pronunciation(std::initializer_list<Phoneme> phonemes) : phonemes_(phonemes) {}

  // Parses "T AA1 M" style text. Stress digits are stripped.
  static Pronunciation parse(std::string_view text);

  std::span<const Phoneme> phonemes() const& { return phonemes_; }
  // Owning copy for temporaries, so `for (auto& p : make().phonemes())` is safe.
  std::vector<Phoneme> phonemes() && { return std::move(phonemes_); }
  std::size_t size() const { return phonemes_.size(); }
  bool empty() const { return phonemes_.empty(); }
  const Phoneme& operator[](std::size_t i) const { return phonemes_[i]; }

  void append(const Pronunciation& other);

  // Space-joined symbols.
  std::string str() const;

  friend bool operator==(const Pronunciation&, const Pronunciation&) = default;
  friend auto operator<=>(const Pronunciation&, const Pronunciation&) = default;

 private:
  std::vector<Phoneme> phonemes_;
};

// Removes trailing stress digits and upper-cases the symbol.
Phoneme strip_stress(std::string_view symbol);

// Lowercase, trim, collapse internal whitespace, and strip leading/trailing
// punctuation of every token (apostrophes and hyphens are kept). Tokens that
// become empty are dropped.
std::string normalize_surface(std::string_view surface);

// Whitespace-separated tokens of an already normalized surface.
std::vector<std::string> split_tokens(std::string_view text);

enum class LexiconFormat {
  kTsv,      // SURFACE<TAB>PH1 PH2 ..., exactly one tab
  kCmudict,  // SURFACE<ws>PH1 PH2 ..., "WORD(2)" variant markers removed
};

LexiconFormat parse_lexicon_format(std::string_view id);

// Maximum number of pronunciation variants produced for a multi-token surface.
inline constexpr std::size_t kMaxPronunciationVariants = 4;

class Lexicon {
 public:
  Lexicon() = default;

  // Adds a pronunciation under the normalized form of `surface`.
  void add(std::string_view surface, Pronunciation pron);

  // Pronunciations for a normalized token, or nullptr.
  const std::vector<Pronunciation>* find(std::string_view normalized) const;

  const std::set<Phoneme>& inventory() const { return inventory_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

 private:
  std::map<std::string, std::vector<Pronunciation>, std::less<>> entries_;
  std::set<Phoneme> inventory_;
};

Lexicon load_lexicon(const std::string& path, LexiconFormat format = LexiconFormat::kTsv);
Lexicon read_lexicon(std::istream& in, const std::string& source_name,
                     LexiconFormat format = LexiconFormat::kTsv);

// Letter-to-sound rules for a single token. Throws InvalidInput when no
// character of the token is mappable.
Pronunciation g2p_fallback(std::string_view token);

// Symbols the rule table can emit.
const std::set<Phoneme>& g2p_inventory();

// Lexicon lookup per token with rule-based fallback for missing tokens; the
// cross product of token variants is capped at kMaxPronunciationVariants.
std::vector<Pronunciation> pronounce(const Lexicon& lex, std::string_view surface);

}  // namespace phonctx

#endif  // PHONCTX_PHONEME_H_
