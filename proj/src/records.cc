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

#include "phonctx/records.h"

#include <fstream>
#include <set>

#include <json.hpp>

#include "phonctx/error.h"

namespace phonctx {
namespace {

using json = nlohmann::json;

template <typename Fn>
void for_each_record(std::istream& in, const std::string& source_name, Fn&& fn) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      json rec = json::parse(line);
      if (!rec.is_object()) throw ParseError(source_name, lineno, "record is not an object");
      fn(rec);
    } catch (const json::exception& e) {
      throw ParseError(source_name, lineno, e.what());
    } catch (const InvalidInput& e) {
      throw ParseError(source_name, lineno, e.what());
    }
  }
}

}  // namespace

std::vector<Utterance> read_utterances(std::istream& in, const std::string& source_name) {
  std::vector<Utterance> out;
  std::set<std::string> seen;
  for_each_record(in, source_name, [&](const json& rec) {
    std::string id = rec.at("id").get<std::string>();
    if (!seen.insert(id).second) throw InvalidInput("duplicate utterance id '" + id + "'");
    out.push_back({std::move(id), rec.at("transcript").get<std::string>()});
  });
  return out;
}

std::vector<Utterance> load_utterances(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus '" + path + "'");
  return read_utterances(in, path);
}

void write_utterances(std::ostream& out, std::span<const Utterance> utterances) {
  for (const auto& u : utterances) out << json{{"id", u.id}, {"transcript", u.transcript}}.dump() << '\n';
}

std::string outcome_record(const PipelineOutcome& o) {
  json spans = json::array();
  for (const auto& st : o.trace.spans) {
    json cands = json::array();
    for (const auto& c : st.result.candidates)
      cands.push_back({{"id", c.entity.id},
                       {"surface", c.entity.surface},
                       {"npd", c.score.value},
                       {"edits", c.score.edit_distance}});
    spans.push_back({{"class", st.span.cls}, {"query", st.span.surface}, {"candidates", std::move(cands)}});
  }
  json rec{{"id", o.utterance_id},
           {"mode", to_string(o.mode)},
           {"stage1", o.trace.detection_raw},
           {"retrieval_skipped", o.trace.retrieval_skipped},
           {"prompt", o.trace.prompt},
           {"generation", o.trace.generation_raw},
           {"final", o.final_hypothesis.raw},
           {"spans", std::move(spans)}};
  if (!o.trace.notes.empty()) rec["notes"] = o.trace.notes;
  return rec.dump();
}

std::vector<ResultRecord> read_results(std::istream& in, const std::string& source_name) {
  std::vector<ResultRecord> out;
  for_each_record(in, source_name, [&](const json& rec) {
    ResultRecord r;
    r.id = rec.at("id").get<std::string>();
    r.mode = rec.value("mode", std::string("hyp"));
    r.final_raw = rec.contains("final") ? rec["final"].get<std::string>()
                                        : rec.at("hypothesis").get<std::string>();
    out.push_back(std::move(r));
  });
  return out;
}

}  // namespace phonctx
