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

#include "phonctx/tags.h"

#include <algorithm>
#include <cctype>
#include <optional>

namespace phonctx {
namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool is_label_char(char c) {
  return std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) ||
         c == '_' || c == '-';
}

enum class TokenKind { kWord, kOpen, kClose, kRegion };

struct Token {
  TokenKind kind;
  std::string text;  // word text or class label
  std::size_t offset;
};

// Matches "<label>" or "</label>" at `pos` when label is known or the region
// delimiter "s". Returns the tag length.
std::optional<std::size_t> match_tag(std::string_view raw, std::size_t pos,
                                     const std::set<EntityClass>& known, Token& tok) {
  if (raw[pos] != '<') return std::nullopt;
  std::size_t i = pos + 1;
  bool closing = i < raw.size() && raw[i] == '/';
  if (closing) ++i;
  std::size_t start = i;
  while (i < raw.size() && is_label_char(raw[i])) ++i;
  if (i == start || i >= raw.size() || raw[i] != '>') return std::nullopt;
  std::string label(raw.substr(start, i - start));
  if (label == "s") {
    tok = {TokenKind::kRegion, label, pos};
  } else if (known.contains(label)) {
    tok = {closing ? TokenKind::kClose : TokenKind::kOpen, label, pos};
  } else {
    return std::nullopt;
  }
  return i + 1 - pos;
}

std::vector<Token> tokenize(std::string_view raw, const std::set<EntityClass>& known) {
  std::vector<Token> tokens;
  std::string word;
  std::size_t word_start = 0;
  auto flush = [&] {
    if (!word.empty()) tokens.push_back({TokenKind::kWord, std::move(word), word_start});
    word.clear();
  };
  std::size_t i = 0;
  while (i < raw.size()) {
    if (is_space(raw[i])) {
      flush();
      ++i;
      continue;
    }
    Token tag;
    if (auto len = match_tag(raw, i, known, tag)) {
      flush();
      tokens.push_back(std::move(tag));
      i += *len;
      continue;
    }
    if (word.empty()) word_start = i;
    word += raw[i++];
  }
  flush();
  return tokens;
}

}  // namespace

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    std::size_t start = i;
    while (i < s.size() && !is_space(s[i])) ++i;
    if (i > start) {
      if (!out.empty()) out += ' ';
      out.append(s.substr(start, i - start));
    }
  }
  return out;
}

TaggedHypothesis parse_tagged(std::string_view raw, const std::set<EntityClass>& known) {
  struct WordSpan {
    EntityClass cls;
    std::size_t first_word;
    std::size_t end_word;
    bool auto_closed;
  };
  std::vector<std::string> words;
  std::vector<WordSpan> word_spans;
  std::optional<Token> open;
  std::size_t open_word = 0;

  for (auto& tok : tokenize(raw, known)) {
    switch (tok.kind) {
      case TokenKind::kWord:
        words.push_back(std::move(tok.text));
        break;
      case TokenKind::kRegion:
        break;
      case TokenKind::kOpen:
        if (open)
          throw TagParseError(tok.offset, "nested <" + tok.text + "> inside <" + open->text + ">");
        open = tok;
        open_word = words.size();
        break;
      case TokenKind::kClose:
        if (!open) throw TagParseError(tok.offset, "</" + tok.text + "> without open tag");
        if (open->text != tok.text)
          throw TagParseError(tok.offset, "</" + tok.text + "> closes <" + open->text + ">");
        word_spans.push_back({tok.text, open_word, words.size(), false});
        open.reset();
        break;
    }
  }
  if (open) word_spans.push_back({open->text, open_word, words.size(), true});

  TaggedHypothesis hyp;
  hyp.raw = std::string(raw);
  std::vector<std::size_t> word_begin;
  word_begin.reserve(words.size());
  for (const auto& w : words) {
    if (!hyp.text.empty()) hyp.text += ' ';
    word_begin.push_back(hyp.text.size());
    hyp.text += w;
  }
  for (const auto& ws : word_spans) {
    if (ws.first_word == ws.end_word) continue;
    EntitySpan span;
    span.cls = ws.cls;
    span.begin = word_begin[ws.first_word];
    span.end = word_begin[ws.end_word - 1] + words[ws.end_word - 1].size();
    span.surface = hyp.text.substr(span.begin, span.end - span.begin);
    span.auto_closed = ws.auto_closed;
    hyp.spans.push_back(std::move(span));
  }
  return hyp;
}

std::string serialize_tagged(std::string_view text, std::span<const EntitySpan> spans) {
  std::vector<const EntitySpan*> ordered;
  for (const auto& s : spans) ordered.push_back(&s);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const EntitySpan* a, const EntitySpan* b) { return a->begin < b->begin; });
  std::size_t last_end = 0;
  for (const auto* s : ordered) {
    if (s->begin >= s->end || s->end > text.size())
      throw InvalidInput("span [" + std::to_string(s->begin) + "," + std::to_string(s->end) +
                         ") is empty or out of range");
    if (s->begin < last_end) throw InvalidInput("overlapping entity spans");
    last_end = s->end;
  }

  std::string out;
  auto emit = [&](std::string_view piece) {
    std::string c = collapse_whitespace(piece);
    if (c.empty()) return;
    if (!out.empty()) out += ' ';
    out += c;
  };
  std::size_t pos = 0;
  for (const auto* s : ordered) {
    emit(text.substr(pos, s->begin - pos));
    emit("<" + s->cls + ">");
    emit(text.substr(s->begin, s->end - s->begin));
    emit("</" + s->cls + ">");
    pos = s->end;
  }
  emit(text.substr(pos));
  return out;
}

TaggedHypothesis make_tagged(std::string_view text, std::vector<EntitySpan> spans) {
  TaggedHypothesis hyp;
  hyp.raw = serialize_tagged(text, spans);
  hyp.text = std::string(text);
  for (auto& s : spans) s.surface = hyp.text.substr(s.begin, s.end - s.begin);
  std::stable_sort(spans.begin(), spans.end(),
                   [](const EntitySpan& a, const EntitySpan& b) { return a.begin < b.begin; });
  hyp.spans = std::move(spans);
  return hyp;
}

std::string strip_tags(std::string_view raw, const std::set<EntityClass>& known) {
  std::string out;
  for (const auto& tok : tokenize(raw, known)) {
    if (tok.kind != TokenKind::kWord) continue;
    if (!out.empty()) out += ' ';
    out += tok.text;
  }
  return out;
}

std::string entities_only(const TaggedHypothesis& hyp) {
  std::string out;
  for (const auto& s : hyp.spans) {
    if (!out.empty()) out += ' ';
    out += "<" + s.cls + "> " + s.surface + " </" + s.cls + ">";
  }
  return out;
}

}  // namespace phonctx
