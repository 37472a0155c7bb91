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

#include "cli.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "phonctx/benchmark.h"
#include "phonctx/error.h"
#include "phonctx/metrics.h"
#include "phonctx/pipeline.h"
#include "phonctx/records.h"
#include "phonctx/retrieval.h"
#include "phonctx/simulator.h"
#include "phonctx/synthdb.h"
#include "phonctx/traindata.h"

namespace phonctx::cli {
namespace {

namespace fs = std::filesystem;

constexpr std::uint64_t kDefaultSeed = 7;

struct Options {
  std::string lexicon;
  std::string lexicon_format = "tsv";
  std::string db;
  std::string corpus;
  std::string out;
  std::uint64_t seed = kDefaultSeed;
  RetrievalConfig retrieval;
  std::string edits = "1:0.5,2:0.5";
  double tag_drop = 0.0;
  std::size_t jobs = 1;
};

void add_lexicon_flags(CLI::App* app, Options& o) {
  app->add_option("--lexicon", o.lexicon, "Pronunciation lexicon (SURFACE<TAB>PHONEMES); rule-based G2P only if omitted");
  app->add_option("--lexicon-format", o.lexicon_format, "Lexicon format: tsv or cmudict")
      ->capture_default_str();
}

void add_retrieval_flags(CLI::App* app, Options& o) {
  app->add_option("--relative-factor", o.retrieval.relative_factor,
                  "Keep candidates with NPD <= factor * best NPD")
      ->capture_default_str();
  app->add_option("--absolute-floor", o.retrieval.absolute_floor, "Keep candidates with NPD < floor")
      ->capture_default_str();
  app->add_option("--max-candidates", o.retrieval.max_candidates, "Candidate cap per prompt")
      ->capture_default_str();
}

void add_simulator_flags(CLI::App* app, Options& o) {
  app->add_option("--seed", o.seed, "Seed for all randomness")->capture_default_str();
  app->add_option("--edits", o.edits, "Simulator entity corruption as k:prob list")->capture_default_str();
  app->add_option("--tag-drop", o.tag_drop, "Simulator probability of dropping an entity's tags")
      ->capture_default_str();
}

std::shared_ptr<const Lexicon> open_lexicon(const Options& o) {
  if (o.lexicon.empty()) return std::make_shared<const Lexicon>();
  return std::make_shared<const Lexicon>(load_lexicon(o.lexicon, parse_lexicon_format(o.lexicon_format)));
}

SimulatorConfig simulator_config(const Options& o) {
  SimulatorConfig cfg;
  cfg.edit_probs = parse_edit_probs(o.edits);
  cfg.tag_drop = o.tag_drop;
  cfg.seed = o.seed;
  cfg.validate();
  return cfg;
}

void check_id(const std::string& id) {
  if (id.empty() || id.find('/') != std::string::npos || id == "." || id == "..")
    throw InvalidInput("utterance id '" + id + "' cannot name a database file");
}

// --db is either one database shared by every utterance or a directory of
// <id>.jsonl files as written by `synthdb`.
std::vector<CorpusItem> load_items(const Options& o, const Lexicon& lex) {
  if (o.corpus.empty()) throw ConfigError("--corpus is required");
  if (o.db.empty()) throw ConfigError("--db is required");
  auto utts = load_utterances(o.corpus);
  std::vector<CorpusItem> items;
  items.reserve(utts.size());
  if (fs::is_directory(o.db)) {
    for (auto& u : utts) {
      check_id(u.id);
      auto db = std::make_shared<const EntityDatabase>(load_database((fs::path(o.db) / (u.id + ".jsonl")).string(), lex));
      items.push_back({std::move(u), std::move(db)});
    }
  } else {
    auto db = std::make_shared<const EntityDatabase>(load_database(o.db, lex));
    for (auto& u : utts) items.push_back({std::move(u), db});
  }
  return items;
}

// Writes to `path`, or to `fallback` when path is empty.
template <typename Fn>
void with_output(const std::string& path, std::ostream& fallback, Fn&& fn) {
  if (path.empty()) {
    fn(fallback);
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  fn(f);
  f.flush();
  if (!f) throw IoError("write to '" + path + "' failed");
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> sizes;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      long long v = std::stoll(item, &used);
      if (used != item.size() || v < 1) throw std::invalid_argument(item);
      sizes.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw ConfigError("--sizes entries must be positive integers, got '" + item + "'");
    }
  }
  if (sizes.empty()) throw ConfigError("--sizes is empty");
  return sizes;
}

int cmd_lexicon(const Options& o, const std::vector<std::string>& words, std::ostream& out) {
  auto lex = open_lexicon(o);
  if (words.empty()) {
    out << "entries\t" << lex->size() << "\n";
    out << "inventory\t" << lex->inventory().size() << "\t";
    bool first = true;
    for (const auto& p : lex->inventory()) {
      out << (first ? "" : " ") << p;
      first = false;
    }
    out << "\n";
    return 0;
  }
  for (const auto& w : words)
    for (const auto& p : pronounce(*lex, w)) out << w << '\t' << p.str() << '\n';
  return 0;
}

int cmd_retrieve(Options o, const std::string& query, const std::string& cls, std::size_t top_k,
                 bool print_prompt, std::ostream& out) {
  auto lex = open_lexicon(o);
  if (o.db.empty()) throw ConfigError("--db is required");
  auto db = load_database(o.db, *lex);
  if (top_k > 0) {
    o.retrieval.selection = Selection::kTopK;
    o.retrieval.max_candidates = top_k;
  }
  auto prons = pronounce(*lex, query);
  auto result = retrieve(db, prons, normalize_class(cls), o.retrieval, query);
  if (print_prompt) {
    out << build_prompt(result) << '\n';
    return 0;
  }
  out << "# rank\tid\tsurface\tnpd\tedits\n";
  for (std::size_t i = 0; i < result.candidates.size(); ++i) {
    const auto& c = result.candidates[i];
    out << i + 1 << '\t' << c.entity.id << '\t' << c.entity.surface << '\t' << fixed(c.score.value, 4)
        << '\t' << c.score.edit_distance << '\n';
  }
  return 0;
}

int cmd_run(const Options& o, const std::string& mode_name, std::ostream& out) {
  const PipelineMode mode = parse_mode(mode_name);
  o.retrieval.validate();
  auto lex = open_lexicon(o);
  auto items = load_items(o, *lex);
  SimulatedDecoder decoder(simulator_config(o), lex);
  PipelineOptions popts;
  popts.retrieval = o.retrieval;
  auto outcomes = run_corpus(mode, items, *lex, decoder, decoder, popts, o.jobs);
  with_output(o.out, out, [&](std::ostream& s) {
    for (const auto& oc : outcomes) s << outcome_record(oc) << '\n';
  });
  return 0;
}

int cmd_sweep(const Options& o, const std::string& mode_name, const std::string& sizes_text, bool json_out,
              std::ostream& out) {
  const PipelineMode mode = parse_mode(mode_name);
  const auto sizes = parse_sizes(sizes_text);
  auto lex = open_lexicon(o);
  auto items = load_items(o, *lex);
  SimulatedDecoder decoder(simulator_config(o), lex);
  PipelineOptions popts;
  popts.retrieval = o.retrieval;
  auto rows = sweep_context_size(mode, items, sizes, *lex, decoder, decoder, popts, o.jobs);
  with_output(o.out, out, [&](std::ostream& s) {
    if (json_out) {
      for (const auto& r : rows)
        s << nlohmann::json{{"mode", to_string(mode)}, {"size", r.size},       {"wer", r.wer},
                            {"ner", r.ner},            {"ref_words", r.ref_words},
                            {"word_errors", r.word_errors}, {"ref_entities", r.ref_entities},
                            {"entity_errors", r.entity_errors}}
                 .dump()
          << '\n';
      return;
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-8s %8s %8s\n", "#NEs", "WER%", "NER%");
    s << buf;
    for (const auto& r : rows) {
      std::snprintf(buf, sizeof buf, "%-8zu %8.2f %8.2f\n", r.size, 100.0 * r.wer, 100.0 * r.ner);
      s << buf;
    }
  });
  return 0;
}

int cmd_synthdb(const Options& o, const std::string& pool_path, const std::string& sizes_path,
                const std::string& estimate_path, bool uniform, bool with_prons, std::ostream& err) {
  if (o.corpus.empty()) throw ConfigError("--corpus is required");
  auto utts = load_utterances(o.corpus);
  if (!estimate_path.empty()) {
    std::vector<TaggedHypothesis> tagged;
    for (const auto& u : utts) tagged.push_back(parse_tagged(u.transcript));
    with_output(estimate_path, err, [&](std::ostream& s) { write_pool(s, estimate_pool(tagged)); });
    if (pool_path.empty()) return 0;
  }
  if (pool_path.empty() || sizes_path.empty()) throw ConfigError("--pool and --sizes are required");
  if (o.out.empty()) throw ConfigError("--out directory is required");
  auto lex = open_lexicon(o);
  auto pool = load_pool(pool_path);
  auto sizes = load_sizes(sizes_path);
  fs::create_directories(o.out);
  for (std::size_t i = 0; i < utts.size(); ++i) {
    check_id(utts[i].id);
    std::vector<ReferenceEntity> refs;
    for (const auto& s : parse_tagged(utts[i].transcript).spans) refs.push_back({s.cls, s.surface});
    auto synth = synthesize(pool, sizes, refs, utterance_seed(o.seed, i), *lex,
                            uniform ? PoolSampling::kUniform : PoolSampling::kWeighted);
    for (const auto& w : synth.warnings) err << "warning: " << utts[i].id << ": " << w << '\n';
    with_output((fs::path(o.out) / (utts[i].id + ".jsonl")).string(), err,
                [&](std::ostream& s) { write_database(s, synth.db, with_prons); });
  }
  return 0;
}

int cmd_traindata(const Options& o, const std::string& variant_name, bool teacher_inject, std::ostream& out) {
  const PipelineMode variant = parse_mode(variant_name);
  auto lex = open_lexicon(o);
  auto items = load_items(o, *lex);

  // Optional "detection" field per corpus record overrides the simulator.
  std::map<std::string, std::string> given;
  {
    std::ifstream in(o.corpus);
    std::string line;
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      auto rec = nlohmann::json::parse(line);
      if (rec.contains("detection")) given[rec.at("id").get<std::string>()] = rec["detection"].get<std::string>();
    }
  }

  SimulatedDecoder detector(simulator_config(o), lex);
  TrainDataOptions topts;
  topts.retrieval = o.retrieval;
  topts.teacher_inject = teacher_inject;
  const DecodeTask task = variant == PipelineMode::kNeFull ? DecodeTask::kNeOnlyDetection : DecodeTask::kFullAsr;

  std::vector<TrainingExample> examples;
  examples.reserve(items.size());
  for (const auto& item : items) {
    const auto& u = item.utterance;
    auto it = given.find(u.id);
    std::string det_raw = it != given.end() ? it->second : detector.decode({u, std::nullopt, task});
    examples.push_back(build_example(variant, u.id, parse_tagged(u.transcript), parse_tagged(det_raw), *item.db,
                                     *lex, topts));
  }
  std::stable_sort(examples.begin(), examples.end(), [](const TrainingExample& a, const TrainingExample& b) {
    return a.utterance_id < b.utterance_id;
  });
  if (o.out.empty()) {
    write_training_corpus(out, examples);
  } else {
    emit_corpus(examples, o.out);
  }
  return 0;
}

int cmd_score(const std::string& ref_path, const std::vector<std::string>& hyp_paths, const std::string& json_path,
              std::ostream& out) {
  auto refs = load_utterances(ref_path);
  std::map<std::string, std::string> by_id;
  for (const auto& u : refs) by_id[u.id] = u.transcript;
  std::vector<ScoredPair> pairs;
  for (const auto& path : hyp_paths) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open hypotheses '" + path + "'");
    for (auto& r : read_results(in, path)) {
      auto it = by_id.find(r.id);
      if (it == by_id.end()) throw InvalidInput("hypothesis id '" + r.id + "' has no reference");
      pairs.push_back({it->second, std::move(r.final_raw), std::move(r.mode)});
    }
  }
  auto rows = corpus_report(pairs);
  write_report_table(out, rows);
  if (!json_path.empty()) with_output(json_path, out, [&](std::ostream& s) { write_report_jsonl(s, rows); });
  return 0;
}

int cmd_gencorpus(const BenchmarkConfig& cfg, const std::string& dir) {
  if (dir.empty()) throw ConfigError("--out directory is required");
  fs::create_directories(dir);
  EntityPool pool = synthetic_name_pool(cfg.pool_size, cfg.seed);
  SizeDistribution sizes;
  sizes.set("contact", {{cfg.contacts_per_db, 1.0}});
  auto corpus = synthetic_corpus(pool, cfg);
  with_output((fs::path(dir) / "pool.txt").string(), std::cout, [&](std::ostream& s) { write_pool(s, pool); });
  with_output((fs::path(dir) / "sizes.txt").string(), std::cout, [&](std::ostream& s) { write_sizes(s, sizes); });
  with_output((fs::path(dir) / "corpus.jsonl").string(), std::cout,
              [&](std::ostream& s) { write_utterances(s, corpus); });
  return 0;
}

}  // namespace

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Phonetic retrieval-based contextualization toolkit", "phonctx"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  Options o;
  std::vector<std::string> words;
  std::string query, cls = "contact", mode = "full-full", sizes_text = "1,5,10,20", variant = "full-full";
  std::string pool_path, sizes_path, estimate_path, ref_path, json_path;
  std::vector<std::string> hyp_paths;
  std::size_t top_k = 0;
  bool print_prompt = false, json_out = false, uniform = false, with_prons = false, teacher_inject = false;
  BenchmarkConfig bench;

  auto* lexicon = app.add_subcommand("lexicon", "Inspect a lexicon or pronounce words");
  add_lexicon_flags(lexicon, o);
  lexicon->add_option("--word", words, "Word or name to pronounce (repeatable)");

  auto* retrieve_cmd = app.add_subcommand("retrieve", "Rank database entities by NPD to a query");
  add_lexicon_flags(retrieve_cmd, o);
  add_retrieval_flags(retrieve_cmd, o);
  retrieve_cmd->add_option("--db", o.db, "Entity database (JSON lines)")->required();
  retrieve_cmd->add_option("--query", query, "Query surface")->required();
  retrieve_cmd->add_option("--class", cls, "Entity class to search")->capture_default_str();
  retrieve_cmd->add_option("--top-k", top_k, "Return exactly the k best candidates, bypassing the selection rule");
  retrieve_cmd->add_flag("--prompt", print_prompt, "Print the context prompt instead of the ranking");

  auto* run_cmd = app.add_subcommand("run", "Run a decode pipeline over a corpus with the simulated decoder");
  add_lexicon_flags(run_cmd, o);
  add_retrieval_flags(run_cmd, o);
  add_simulator_flags(run_cmd, o);
  run_cmd->add_option("--mode", mode, "full-full, ne-full, full-ne or simple")->capture_default_str();
  run_cmd->add_option("--db", o.db, "Shared database file or directory of <id>.jsonl databases")->required();
  run_cmd->add_option("--corpus", o.corpus, "Corpus (JSON lines with id and tagged transcript)")->required();
  run_cmd->add_option("--out", o.out, "Results file (default: stdout)");
  run_cmd->add_option("--jobs", o.jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);

  auto* sweep_cmd = app.add_subcommand("sweep", "WER/NER as a function of the number of retrieved entities");
  add_lexicon_flags(sweep_cmd, o);
  add_simulator_flags(sweep_cmd, o);
  sweep_cmd->add_option("--mode", mode, "full-full, ne-full, full-ne or simple")->capture_default_str();
  sweep_cmd->add_option("--sizes", sizes_text, "Comma-separated candidate counts")->capture_default_str();
  sweep_cmd->add_option("--db", o.db, "Shared database file or directory of <id>.jsonl databases")->required();
  sweep_cmd->add_option("--corpus", o.corpus, "Corpus (JSON lines)")->required();
  sweep_cmd->add_option("--out", o.out, "Output file (default: stdout)");
  sweep_cmd->add_option("--jobs", o.jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  sweep_cmd->add_flag("--json", json_out, "Emit JSON lines instead of a table");

  auto* synth_cmd = app.add_subcommand("synthdb", "Synthesize a personal database per utterance");
  add_lexicon_flags(synth_cmd, o);
  synth_cmd->add_option("--pool", pool_path, "Entity pool ('class value weight' lines)");
  synth_cmd->add_option("--sizes", sizes_path, "Size distribution ('class n probability' lines)");
  synth_cmd->add_option("--corpus", o.corpus, "Corpus (JSON lines)")->required();
  synth_cmd->add_option("--seed", o.seed, "Seed; utterance i uses seed xor i")->capture_default_str();
  synth_cmd->add_option("--out", o.out, "Output directory for <id>.jsonl databases");
  synth_cmd->add_option("--estimate-pool", estimate_path, "Write the entity pool counted from the corpus here");
  synth_cmd->add_flag("--uniform", uniform, "Sample pool surfaces uniformly instead of by weight");
  synth_cmd->add_flag("--with-prons", with_prons, "Store pronunciations inline");

  auto* train_cmd = app.add_subcommand("traindata", "Build training source sequences");
  add_lexicon_flags(train_cmd, o);
  add_retrieval_flags(train_cmd, o);
  add_simulator_flags(train_cmd, o);
  train_cmd->add_option("--variant", variant, "full-full, ne-full or full-ne")->capture_default_str();
  train_cmd->add_option("--db", o.db, "Shared database file or directory of <id>.jsonl databases")->required();
  train_cmd->add_option("--corpus", o.corpus, "Corpus (JSON lines, optional 'detection' field)")->required();
  train_cmd->add_option("--out", o.out, "Training corpus file (default: stdout)");
  train_cmd->add_flag("--teacher-inject", teacher_inject, "Use reference entities as queries when detection missed them");

  auto* score_cmd = app.add_subcommand("score", "WER and NER of hypotheses against references");
  score_cmd->add_option("--ref", ref_path, "Reference corpus (JSON lines)")->required();
  score_cmd->add_option("--hyp", hyp_paths, "Results file(s) from `run` or {id, hypothesis} lines")->required();
  score_cmd->add_option("--json", json_path, "Also write per-mode JSON lines here");

  auto* gen_cmd = app.add_subcommand("gencorpus", "Write the synthetic contact benchmark (pool, sizes, corpus)");
  gen_cmd->add_option("--seed", bench.seed, "Seed")->capture_default_str();
  gen_cmd->add_option("--utterances", bench.utterances, "Number of utterances")->capture_default_str();
  gen_cmd->add_option("--pool-size", bench.pool_size, "Number of distinct contact names")->capture_default_str();
  gen_cmd->add_option("--contacts", bench.contacts_per_db, "Contacts sampled per database")->capture_default_str();
  gen_cmd->add_option("--out", o.out, "Output directory")->required();

  std::vector<const char*> argv{args.empty() ? "phonctx" : args.front().c_str()};
  for (std::size_t i = 1; i < args.size(); ++i) argv.push_back(args[i].c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*lexicon) return cmd_lexicon(o, words, out);
    if (*retrieve_cmd) return cmd_retrieve(o, query, cls, top_k, print_prompt, out);
    if (*run_cmd) return cmd_run(o, mode, out);
    if (*sweep_cmd) return cmd_sweep(o, mode, sizes_text, json_out, out);
    if (*synth_cmd) return cmd_synthdb(o, pool_path, sizes_path, estimate_path, uniform, with_prons, err);
    if (*train_cmd) return cmd_traindata(o, variant, teacher_inject, out);
    if (*score_cmd) return cmd_score(ref_path, hyp_paths, json_path, out);
    if (*gen_cmd) return cmd_gencorpus(bench, o.out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace phonctx::cli
