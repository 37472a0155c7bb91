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

#include "phonctx/phoneme.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <sstream>
#include <utility>

#include "phonctx/error.h"

namespace phonctx {
namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool is_kept_punct(char c) { return c == '\'' || c == '-'; }

bool is_strippable(char c) {
  return std::ispunct(static_cast<unsigned char>(c)) != 0 && !is_kept_punct(c);
}

char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

bool is_vowel_letter(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

struct Digraph {
  std::string_view letters;
  std::array<std::string_view, 2> phonemes;
};

constexpr std::array<Digraph, 6> kDigraphs = {{
    {"th", {"TH", ""}},
    {"sh", {"SH", ""}},
    {"ch", {"CH", ""}},
    {"ph", {"F", ""}},
    {"ck", {"K", ""}},
    {"qu", {"K", "W"}},
}};

// Indexed by letter - 'a'. Second slot used only by 'x'.
constexpr std::array<std::array<std::string_view, 2>, 26> kLetters = {{
    {"AE", ""}, {"B", ""},  {"K", ""},  {"D", ""},  {"EH", ""}, {"F", ""},  {"G", ""},
    {"HH", ""}, {"IH", ""}, {"JH", ""}, {"K", ""},  {"L", ""},  {"M", ""},  {"N", ""},
    {"AA", ""}, {"P", ""},  {"K", ""},  {"R", ""},  {"S", ""},  {"T", ""},  {"AH", ""},
    {"V", ""},  {"W", ""},  {"K", "S"}, {"Y", ""},  {"Z", ""},
}};

void push_mapped(std::vector<Phoneme>& out, const std::array<std::string_view, 2>& ph) {
  for (auto p : ph) {
    if (!p.empty()) out.emplace_back(p);
  }
}

void parse_lexicon_line(Lexicon& lex, std::string_view line, LexiconFormat format,
                        const std::string& source, std::size_t lineno) {
  std::string_view surface;
  std::string_view prons;
  if (format == LexiconFormat::kTsv) {
    auto tab = line.find('\t');
    if (tab == std::string_view::npos) throw ParseError(source, lineno, "missing tab separator");
    if (line.find('\t', tab + 1) != std::string_view::npos)
      throw ParseError(source, lineno, "more than one tab separator");
    surface = line.substr(0, tab);
    prons = line.substr(tab + 1);
  } else {
    auto sep = std::find_if(line.begin(), line.end(), is_space);
    if (sep == line.end()) throw ParseError(source, lineno, "missing pronunciation");
    surface = line.substr(0, static_cast<std::size_t>(sep - line.begin()));
    prons = line.substr(static_cast<std::size_t>(sep - line.begin()));
    // CMUdict marks alternates as WORD(2).
    if (auto paren = surface.find('('); paren != std::string_view::npos && paren > 0 &&
                                        surface.back() == ')') {
      surface = surface.substr(0, paren);
    }
  }
  if (normalize_surface(surface).empty()) throw ParseError(source, lineno, "empty surface");
  Pronunciation pron = Pronunciation::parse(prons);
  if (pron.empty()) throw ParseError(source, lineno, "empty pronunciation");
  for (const auto& ph : pron.phonemes()) {
    bool ok = std::all_of(ph.begin(), ph.end(), [](char c) {
      return std::isupper(static_cast<unsigned char>(c)) != 0 || c == '_';
    });
    if (!ok) throw ParseError(source, lineno, "invalid phoneme symbol '" + ph + "'");
  }
  lex.add(surface, std::move(pron));
}

}  // namespace

Pronunciation Pronunciation::parse(std::string_view text) {
  std::vector<Phoneme> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) {
      Phoneme p = strip_stress(text.substr(start, i - start));
      if (!p.empty()) out.push_back(std::move(p));
    }
  }
  return Pronunciation(std::move(out));
}

void Pronunciation::append(const Pronunciation& other) {
  phonemes_.insert(phonemes_.end(), other.phonemes_.begin(), other.phonemes_.end());
}

std::string Pronunciation::str() const {
  std::string out;
  for (std::size_t i = 0; i < phonemes_.size(); ++i) {
    if (i) out += ' ';
    out += phonemes_[i];
  }
  return out;
}

Phoneme strip_stress(std::string_view symbol) {
  while (!symbol.empty() && (symbol.back() == '0' || symbol.back() == '1' || symbol.back() == '2'))
    symbol.remove_suffix(1);
  Phoneme out(symbol);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string normalize_surface(std::string_view surface) {
  std::string out;
  std::size_t i = 0;
  while (i < surface.size()) {
    while (i < surface.size() && is_space(surface[i])) ++i;
    std::size_t start = i;
    while (i < surface.size() && !is_space(surface[i])) ++i;
    std::string_view tok = surface.substr(start, i - start);
    while (!tok.empty() && is_strippable(tok.front())) tok.remove_prefix(1);
    while (!tok.empty() && is_strippable(tok.back())) tok.remove_suffix(1);
    if (tok.empty()) continue;
    if (!out.empty()) out += ' ';
    for (char c : tok) out += lower(c);
  }
  return out;
}

std::vector<std::string> split_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) out.emplace_back(text.substr(start, i - start));
  }
  return out;
}

LexiconFormat parse_lexicon_format(std::string_view id) {
  if (id == "tsv") return LexiconFormat::kTsv;
  if (id == "cmudict") return LexiconFormat::kCmudict;
  throw ConfigError("unknown lexicon format '" + std::string(id) + "' (expected tsv or cmudict)");
}

void Lexicon::add(std::string_view surface, Pronunciation pron) {
  for (const auto& ph : pron.phonemes()) inventory_.insert(ph);
  auto& prons = entries_[normalize_surface(surface)];
  if (std::find(prons.begin(), prons.end(), pron) == prons.end()) prons.push_back(std::move(pron));
}

const std::vector<Pronunciation>* Lexicon::find(std::string_view normalized) const {
  auto it = entries_.find(normalized);
  return it == entries_.end() ? nullptr : &it->second;
}

Lexicon read_lexicon(std::istream& in, const std::string& source_name, LexiconFormat format) {
  Lexicon lex;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind(";;;", 0) == 0) continue;
    if (std::all_of(line.begin(), line.end(), is_space)) continue;
    parse_lexicon_line(lex, line, format, source_name, lineno);
  }
  if (lex.empty()) throw ParseError(source_name, lineno, "lexicon contains no entries");
  return lex;
}

Lexicon load_lexicon(const std::string& path, LexiconFormat format) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open lexicon '" + path + "'");
  return read_lexicon(in, path, format);
}

Pronunciation g2p_fallback(std::string_view token) {
  std::string letters;
  for (char c : token) {
    char l = lower(c);
    if (l >= 'a' && l <= 'z') letters += l;
  }
  if (letters.empty())
    throw InvalidInput("no letters to pronounce in '" + std::string(token) + "'");
  // Silent final 'e' after a consonant.
  if (letters.size() >= 3 && letters.back() == 'e' && !is_vowel_letter(letters[letters.size() - 2]))
    letters.pop_back();

  std::vector<Phoneme> out;
  std::size_t i = 0;
  while (i < letters.size()) {
    if (i + 1 < letters.size()) {
      std::string_view pair(letters.data() + i, 2);
      auto dg = std::find_if(kDigraphs.begin(), kDigraphs.end(),
                             [&](const Digraph& d) { return d.letters == pair; });
      if (dg != kDigraphs.end()) {
        push_mapped(out, dg->phonemes);
        i += 2;
        continue;
      }
    }
    push_mapped(out, kLetters[static_cast<std::size_t>(letters[i] - 'a')]);
    ++i;
  }
  return Pronunciation(std::move(out));
}

const std::set<Phoneme>& g2p_inventory() {
  static const std::set<Phoneme> inventory = [] {
    std::set<Phoneme> s;
    for (const auto& d : kDigraphs)
      for (auto p : d.phonemes)
        if (!p.empty()) s.emplace(p);
    for (const auto& l : kLetters)
      for (auto p : l)
        if (!p.empty()) s.emplace(p);
    return s;
  }();
  return inventory;
}

std::vector<Pronunciation> pronounce(const Lexicon& lex, std::string_view surface) {
  const std::string norm = normalize_surface(surface);
  if (norm.empty()) throw InvalidInput("surface '" + std::string(surface) + "' is empty after normalization");

  std::vector<Pronunciation> variants{Pronunciation{}};
  for (const auto& token : split_tokens(norm)) {
    std::vector<Pronunciation> fallback;
    const std::vector<Pronunciation>* options = lex.find(token);
    if (options == nullptr) {
      fallback.push_back(g2p_fallback(token));
      options = &fallback;
    }
    std::vector<Pronunciation> next;
    for (const auto& prefix : variants) {
      for (const auto& option : *options) {
        if (next.size() == kMaxPronunciationVariants) break;
        Pronunciation joined = prefix;
        joined.append(option);
        next.push_back(std::move(joined));
      }
    }
    variants = std::move(next);
  }
  return variants;
}

}  // namespace phonctx
