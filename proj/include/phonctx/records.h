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

#ifndef PHONCTX_RECORDS_H_
#define PHONCTX_RECORDS_H_

#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "phonctx/decoder.h"
#include "phonctx/pipeline.h"

namespace phonctx {

// Corpus file: one {"id", "transcript"} JSON record per line; the transcript
// is the tagged reference.
std::vector<Utterance> read_utterances(std::istream& in, const std::string& source_name);
std::vector<Utterance> load_utterances(const std::string& path);
void write_utterances(std::ostream& out, std::span<const Utterance> utterances);

// Results file record for one utterance: id, mode, stage-1 raw, prompt,
// final raw and per-span candidates with NPD values.
std::string outcome_record(const PipelineOutcome& outcome);

struct ResultRecord {
  std::string id;
  std::string mode;
  std::string final_raw;
};

// Reads results records ("final") or plain {"id", "hypothesis"} records.
std::vector<ResultRecord> read_results(std::istream& in, const std::string& source_name);

}  // namespace phonctx

#endif  // PHONCTX_RECORDS_H_
