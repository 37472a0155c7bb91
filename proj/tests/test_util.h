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
// Shared fixtures for tests.

#ifndef PHONCTX_TESTS_TEST_UTIL_H_
#define PHONCTX_TESTS_TEST_UTIL_H_

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "phonctx/decoder.h"
#include "phonctx/retrieval.h"

namespace phonctx::testing {

inline NamedEntity entity(std::string id, std::string surface, const Lexicon& lex,
                          EntityClass cls = "contact") {
  NamedEntity e;
  e.id = std::move(id);
  e.surface = std::move(surface);
  e.normalized = normalize_surface(e.surface);
  e.cls = std::move(cls);
  e.pronunciations = pronounce(lex, e.surface);
  return e;
}

inline EntityDatabase contacts(const std::vector<std::string>& names, const Lexicon& lex) {
  EntityDatabase db;
  for (std::size_t i = 0; i < names.size(); ++i) db.add(entity("c" + std::to_string(i), names[i], lex));
  return db;
}

// Decoder whose output is computed by a callback; records every request.
class ScriptedDecoder : public Decoder {
 public:
  explicit ScriptedDecoder(std::function<std::string(const DecoderRequest&)> fn) : fn_(std::move(fn)) {}
  std::string decode(const DecoderRequest& request) override {
    requests.push_back(request);
    return fn_(request);
  }
  std::vector<DecoderRequest> requests;

 private:
  std::function<std::string(const DecoderRequest&)> fn_;
};

}  // namespace phonctx::testing

#endif  // PHONCTX_TESTS_TEST_UTIL_H_
