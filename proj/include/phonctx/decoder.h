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

#ifndef PHONCTX_DECODER_H_
#define PHONCTX_DECODER_H_

#include <optional>
#include <string>
#include <string_view>

#include "phonctx/error.h"

namespace phonctx {

// An utterance as the harness knows it. Real backends would resolve `id` to
// audio; the simulator reads the tagged ground-truth `transcript`.
struct Utterance {
  std::string id;
  std::string transcript;
};

enum class DecodeTask {
  kFullAsr,            // full transcript with tagged entities
  kNeOnlyDetection,    // tagged entities only, context-free
  kNeOnlyGeneration,   // tagged entities only, context-aware
};

std::string_view to_string(DecodeTask task);

struct DecoderRequest {
  Utterance utterance;
  // Present iff the decode is context-aware.
  std::optional<std::string> context_prompt;
  DecodeTask task = DecodeTask::kFullAsr;
};

class DecoderError : public Error {
 public:
  using Error::Error;
};

// Synchronous request/response decoder. Returns raw tagged text.
class Decoder {
 public:
  virtual ~Decoder() = default;
  virtual std::string decode(const DecoderRequest& request) = 0;
  // True if decode may be called concurrently from several threads.
  virtual bool thread_safe() const { return false; }
};

}  // namespace phonctx

#endif  // PHONCTX_DECODER_H_
