//
// Copyright 2026 The advtext Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Run configuration and the five pipeline commands behind the CLI. Every
// command validates the resolved configuration first, derives its seeds
// from the single global seed and writes the resolved configuration next to
// its outputs.

#ifndef ADVTEXT_PIPELINE_HPP_
#define ADVTEXT_PIPELINE_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "advtext/attacks.hpp"
#include "advtext/datagen.hpp"
#include "advtext/defense_abstain.hpp"
#include "advtext/defense_explicit.hpp"
#include "advtext/errors.hpp"
#include "advtext/evaluation.hpp"
#include "advtext/io.hpp"
#include "advtext/model.hpp"
#include "advtext/rng.hpp"

namespace advtext {

namespace fs = std::filesystem;

// The complete schema with the desk defaults. A user config may set any
// subset of these keys and nothing else.
inline json default_run_config() {
  const DataGenConfig d = desk_datagen_config();
  const ToyModelConfig m;
  const AttackConfig a;
  const DefenseThresholds t;
  const CharEmbedderTrainingConfig et;
  const AbstainConfig ab;
  return json{
      {"seed", 7},
      {"output_dir", "advtext-run"},
      {"workers", 1},
      {"data",
       {{"filler_vocab_size", d.filler_vocab_size},
        {"filler_min_length", d.filler_min_length},
        {"filler_max_length", d.filler_max_length},
        {"class_keywords", d.class_keywords},
        {"doc_min_tokens", d.doc_min_tokens},
        {"doc_max_tokens", d.doc_max_tokens},
        {"keywords_min", d.keywords_min},
        {"keywords_max", d.keywords_max},
        {"train_size", d.train_size},
        {"validation_size", d.validation_size},
        {"test_size", d.test_size},
        {"balanced", d.balanced},
        {"punctuation_rate", d.punctuation_rate}}},
      {"paths",
       {{"train", nullptr},
        {"validation", nullptr},
        {"test", nullptr},
        {"lexicon", nullptr},
        {"suffix_rules", nullptr},
        {"checkpoint", nullptr}}},
      {"model",
       {{"embed_dim", m.embed_dim},
        {"learning_rate", m.learning_rate},
        {"epochs", m.epochs},
        {"batch_size", m.batch_size}}},
      {"attack",
       {{"kind", "char"},
        {"split", "test"},
        {"max_tokens_attacked", a.max_tokens_attacked},
        {"candidates_per_position", a.candidates_per_position},
        {"query_budget", a.query_budget},
        {"cosine_threshold", a.cosine_threshold},
        {"max_char_edits_per_token", a.max_char_edits_per_token}}},
      {"defense",
       {{"kind", "none"},
        {"explicit",
         {{"dim", CharEmbedder::kDefaultDim},
          {"pairs", 4000},
          {"refine", true},
          {"epochs", et.epochs},
          {"learning_rate", et.learning_rate},
          {"negative_ratio", et.negative_ratio},
          {"accept_low", t.accept_low},
          {"accept_high", t.accept_high_exclusive},
          {"wordlist", nullptr}}},
        {"abstain",
         {{"mix_ratio", ab.mix_ratio},
          {"epochs", ab.epochs},
          {"learning_rate", ab.learning_rate},
          {"batch_size", ab.batch_size},
          {"warm_start", ab.warm_start},
          {"attack", "char"},
          {"eval_split", "test"}}}}}};
}

namespace detail {

inline bool compatible(const json& def, const json& val) {
  if (def.is_null()) return val.is_null() || val.is_string();
  if (def.is_number_unsigned()) return val.is_number_unsigned() || (val.is_number_integer() && val.get<std::int64_t>() >= 0);
  if (def.is_number_integer()) return val.is_number_integer();
  if (def.is_number_float()) return val.is_number();
  return def.type() == val.type();
}

inline void merge_checked(json& base, const json& user, const std::string& where) {
  if (!user.is_object()) throw Error(ErrorKind::kConfiguration, where + " must be an object");
  for (const auto& [key, val] : user.items()) {
    const std::string path = where.empty() ? key : where + "." + key;
    auto it = base.find(key);
    if (it == base.end()) throw Error(ErrorKind::kConfiguration, "unknown key '" + path + "'");
    if (it->is_object()) {
      merge_checked(*it, val, path);
    } else if (!compatible(*it, val)) {
      throw Error(ErrorKind::kConfiguration, "key '" + path + "' has the wrong type");
    } else {
      *it = val;
    }
  }
}

template <typename T>
T as(const json& j, const char* path) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorKind::kConfiguration, std::string("key '") + path + "' has the wrong type");
  }
}

}  // namespace detail

struct CliOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> attack;
  std::optional<std::string> defense;
};

// Typed view of a resolved configuration.
struct RunConfig {
  json resolved;
  std::uint64_t seed = 0;
  fs::path output_dir;
  std::size_t workers = 1;
  DataGenConfig data;
  ToyModelConfig model;
  AttackKind attack = AttackKind::kCharacter;
  std::string attack_split;
  AttackConfig attack_config;
  DefenseKind defense = DefenseKind::kNone;
  std::size_t explicit_pairs = 0;
  bool explicit_refine = true;
  std::size_t explicit_dim = CharEmbedder::kDefaultDim;
  CharEmbedderTrainingConfig explicit_training;
  DefenseThresholds thresholds;
  std::optional<fs::path> wordlist;
  AbstainConfig abstain;
  std::string abstain_eval_split;

  // Hashes of the configuration sections each artifact depends on.
  std::string data_hash() const { return config_hash({{"seed", seed}, {"data", resolved["data"]}}); }
  std::string model_hash() const {
    return config_hash({{"data", data_hash()}, {"seed", seed}, {"model", resolved["model"]}});
  }
  std::string explicit_hash() const {
    return config_hash({{"data", data_hash()}, {"seed", seed}, {"explicit", resolved["defense"]["explicit"]}});
  }
  std::string abstain_hash() const {
    json attack = resolved["attack"];
    attack.erase("kind");
    attack.erase("split");
    return config_hash({{"model", model_hash()}, {"abstain", resolved["defense"]["abstain"]}, {"attack", attack}});
  }
  std::string campaign_hash() const {
    std::string defense_hash = "none";
    if (defense == DefenseKind::kExplicit) defense_hash = explicit_hash();
    if (defense == DefenseKind::kAbstain) defense_hash = abstain_hash();
    return config_hash({{"model", model_hash()}, {"attack", resolved["attack"]}, {"defense", defense_hash}});
  }

  fs::path data_dir() const { return output_dir / "data"; }
  fs::path split_path(const std::string& split) const {
    const json& p = resolved["paths"][split];
    return p.is_null() ? data_dir() / (split + ".tsv") : fs::path(p.get<std::string>());
  }
  bool split_is_external(const std::string& split) const { return !resolved["paths"][split].is_null(); }
  fs::path lexicon_path() const {
    const json& p = resolved["paths"]["lexicon"];
    return p.is_null() ? data_dir() / "lexicon.tsv" : fs::path(p.get<std::string>());
  }
  fs::path suffix_rules_path() const {
    const json& p = resolved["paths"]["suffix_rules"];
    return p.is_null() ? data_dir() / "suffix_rules.tsv" : fs::path(p.get<std::string>());
  }
  bool checkpoint_is_external() const { return !resolved["paths"]["checkpoint"].is_null(); }
  fs::path checkpoint_path() const {
    const json& p = resolved["paths"]["checkpoint"];
    return p.is_null() ? output_dir / "model" / "checkpoint.json" : fs::path(p.get<std::string>());
  }
  fs::path explicit_dir() const { return output_dir / "defense" / "explicit"; }
  fs::path abstain_dir() const { return output_dir / "defense" / "abstain"; }
  fs::path campaign_dir() const {
    return output_dir / "attacks" / (std::string(attack_kind_name(attack)) + "-" + defense_kind_name(defense));
  }
};

inline void check_split_name(const std::string& s, const char* key) {
  if (s != "train" && s != "validation" && s != "test") {
    throw Error(ErrorKind::kConfiguration, std::string("key '") + key + "' must be train, validation or test");
  }
}

inline RunConfig resolve_config(const json& user, const CliOverrides& overrides = {}) {
  using detail::as;
  json merged = default_run_config();
  detail::merge_checked(merged, user, "");
  if (overrides.seed) merged["seed"] = *overrides.seed;
  if (overrides.out) merged["output_dir"] = *overrides.out;
  if (overrides.attack) merged["attack"]["kind"] = *overrides.attack;
  if (overrides.defense) merged["defense"]["kind"] = *overrides.defense;

  RunConfig rc;
  rc.resolved = merged;
  rc.seed = as<std::uint64_t>(merged["seed"], "seed");
  rc.output_dir = as<std::string>(merged["output_dir"], "output_dir");
  if (rc.output_dir.empty()) throw Error(ErrorKind::kConfiguration, "output_dir must not be empty");
  rc.workers = as<std::size_t>(merged["workers"], "workers");
  if (rc.workers == 0) throw Error(ErrorKind::kConfiguration, "workers must be >= 1");

  const json& d = merged["data"];
  rc.data.filler_vocab_size = as<std::size_t>(d["filler_vocab_size"], "data.filler_vocab_size");
  rc.data.filler_min_length = as<std::size_t>(d["filler_min_length"], "data.filler_min_length");
  rc.data.filler_max_length = as<std::size_t>(d["filler_max_length"], "data.filler_max_length");
  rc.data.class_keywords = as<std::vector<std::vector<std::string>>>(d["class_keywords"], "data.class_keywords");
  rc.data.doc_min_tokens = as<std::size_t>(d["doc_min_tokens"], "data.doc_min_tokens");
  rc.data.doc_max_tokens = as<std::size_t>(d["doc_max_tokens"], "data.doc_max_tokens");
  rc.data.keywords_min = as<std::size_t>(d["keywords_min"], "data.keywords_min");
  rc.data.keywords_max = as<std::size_t>(d["keywords_max"], "data.keywords_max");
  rc.data.train_size = as<std::size_t>(d["train_size"], "data.train_size");
  rc.data.validation_size = as<std::size_t>(d["validation_size"], "data.validation_size");
  rc.data.test_size = as<std::size_t>(d["test_size"], "data.test_size");
  rc.data.balanced = as<bool>(d["balanced"], "data.balanced");
  rc.data.punctuation_rate = as<double>(d["punctuation_rate"], "data.punctuation_rate");
  validate(rc.data);

  const json& m = merged["model"];
  rc.model.embed_dim = as<std::size_t>(m["embed_dim"], "model.embed_dim");
  rc.model.learning_rate = as<double>(m["learning_rate"], "model.learning_rate");
  rc.model.epochs = as<std::size_t>(m["epochs"], "model.epochs");
  rc.model.batch_size = as<std::size_t>(m["batch_size"], "model.batch_size");
  rc.model.num_classes = rc.data.class_keywords.size();
  rc.model.seed = derive_seed(rc.seed, "model");
  validate(rc.model);

  const json& a = merged["attack"];
  rc.attack = parse_attack_kind(as<std::string>(a["kind"], "attack.kind"));
  rc.attack_split = as<std::string>(a["split"], "attack.split");
  check_split_name(rc.attack_split, "attack.split");
  rc.attack_config.max_tokens_attacked = as<std::size_t>(a["max_tokens_attacked"], "attack.max_tokens_attacked");
  rc.attack_config.candidates_per_position =
      as<std::size_t>(a["candidates_per_position"], "attack.candidates_per_position");
  rc.attack_config.query_budget = as<std::size_t>(a["query_budget"], "attack.query_budget");
  rc.attack_config.cosine_threshold = as<double>(a["cosine_threshold"], "attack.cosine_threshold");
  rc.attack_config.max_char_edits_per_token =
      as<std::size_t>(a["max_char_edits_per_token"], "attack.max_char_edits_per_token");
  rc.attack_config.seed = derive_seed(rc.seed, "attack");
  validate(rc.attack_config);

  const json& def = merged["defense"];
  rc.defense = parse_defense_kind(as<std::string>(def["kind"], "defense.kind"));
  const json& ex = def["explicit"];
  rc.explicit_dim = as<std::size_t>(ex["dim"], "defense.explicit.dim");
  if (rc.explicit_dim == 0) throw Error(ErrorKind::kConfiguration, "defense.explicit.dim must be >= 1");
  rc.explicit_pairs = as<std::size_t>(ex["pairs"], "defense.explicit.pairs");
  rc.explicit_refine = as<bool>(ex["refine"], "defense.explicit.refine");
  if (rc.explicit_refine && rc.explicit_pairs == 0) {
    throw Error(ErrorKind::kConfiguration, "defense.explicit.pairs must be >= 1 when refine is on");
  }
  rc.explicit_training.epochs = as<std::size_t>(ex["epochs"], "defense.explicit.epochs");
  rc.explicit_training.learning_rate = as<double>(ex["learning_rate"], "defense.explicit.learning_rate");
  rc.explicit_training.negative_ratio = as<double>(ex["negative_ratio"], "defense.explicit.negative_ratio");
  rc.explicit_training.seed = derive_seed(rc.seed, "char-embedder");
  rc.thresholds.accept_low = as<double>(ex["accept_low"], "defense.explicit.accept_low");
  rc.thresholds.accept_high_exclusive = as<double>(ex["accept_high"], "defense.explicit.accept_high");
  validate(rc.thresholds);
  if (!ex["wordlist"].is_null()) rc.wordlist = fs::path(ex["wordlist"].get<std::string>());

  const json& ab = def["abstain"];
  rc.abstain.mix_ratio = as<double>(ab["mix_ratio"], "defense.abstain.mix_ratio");
  rc.abstain.epochs = as<std::size_t>(ab["epochs"], "defense.abstain.epochs");
  rc.abstain.learning_rate = as<double>(ab["learning_rate"], "defense.abstain.learning_rate");
  rc.abstain.batch_size = as<std::size_t>(ab["batch_size"], "defense.abstain.batch_size");
  rc.abstain.warm_start = as<bool>(ab["warm_start"], "defense.abstain.warm_start");
  rc.abstain.attack = parse_attack_kind(as<std::string>(ab["attack"], "defense.abstain.attack"));
  rc.abstain.attack_config = rc.attack_config;
  rc.abstain.seed = derive_seed(rc.seed, "abstain");
  rc.abstain_eval_split = as<std::string>(ab["eval_split"], "defense.abstain.eval_split");
  check_split_name(rc.abstain_eval_split, "defense.abstain.eval_split");
  validate(rc.abstain);
  return rc;
}

inline RunConfig load_run_config(const fs::path& path, const CliOverrides& overrides = {}) {
  json user;
  try {
    user = read_json(path);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kParse) throw Error(ErrorKind::kConfiguration, e.detail());
    throw;
  }
  return resolve_config(user, overrides);
}

// ---------------------------------------------------------------------------
// Shared loaders

inline void write_resolved_config(const fs::path& dir, const std::string& command, const RunConfig& rc) {
  write_json(dir / (command + ".config.json"), rc.resolved);
}

inline std::vector<Document> load_split(const RunConfig& rc, const std::string& split) {
  const fs::path path = rc.split_path(split);
  if (rc.split_is_external(split)) {
    // External datasets need no metadata sidecar.
    if (!fs::exists(meta_path(path))) return parse_dataset(read_file(path)).documents;
    return load_dataset(path).documents;
  }
  return load_dataset(path, rc.data_hash()).documents;
}

inline ToyModel load_undefended(const RunConfig& rc) {
  return load_model(rc.checkpoint_path(),
                    rc.checkpoint_is_external() ? std::nullopt : std::optional<std::string>(rc.model_hash()));
}

inline PosLexicon load_run_lexicon(const RunConfig& rc) { return load_lexicon(rc.lexicon_path(), rc.suffix_rules_path()); }

// V_train: the training-set token set, or the configured word list.
inline std::vector<std::string> defense_vocabulary(const RunConfig& rc, const std::vector<Document>& train) {
  if (rc.wordlist) return load_wordlist(*rc.wordlist);
  std::set<std::string> vocab;
  for (const auto& d : train) {
    for (const auto& t : d.tokens) vocab.insert(t.text);
  }
  return {vocab.begin(), vocab.end()};
}

struct CampaignFiles {
  fs::path jsonl;
  fs::path report;
};

// Writes records.jsonl, the report recomputed from the written JSONL and the
// CSV exports.
inline CampaignFiles write_campaign(const fs::path& dir, const json& campaign_header_line,
                                    const std::vector<CampaignRecord>& records) {
  CampaignFiles files{dir / "records.jsonl", dir / "report.json"};
  write_file_atomic(files.jsonl, serialize_jsonl(campaign_header_line, records));
  const ParsedCampaign parsed = parse_jsonl(read_file(files.jsonl));
  write_json(files.report, build_report(parsed, files.jsonl.filename().string()));
  write_file_atomic(dir / "length_queries.csv", length_queries_csv(parsed.records));
  write_file_atomic(dir / "distances.csv", distances_csv(parsed.records));
  write_file_atomic(dir / "levenshtein_histogram.csv", levenshtein_histogram_csv(parsed.records));
  return files;
}

// ---------------------------------------------------------------------------
// Commands

inline void cmd_gen_data(const RunConfig& rc, std::ostream& log = std::cout) {
  const SyntheticCorpus corpus = generate_corpus(rc.data, derive_seed(rc.seed, "data"));
  const std::string hash = rc.data_hash();
  const std::pair<const char*, const std::vector<Document>*> splits[] = {
      {"train", &corpus.train}, {"validation", &corpus.validation}, {"test", &corpus.test}};
  for (const auto& [name, docs] : splits) {
    const fs::path path = rc.data_dir() / (std::string(name) + ".tsv");
    save_dataset(path, DatasetFile{*docs, {}}, hash);
    log << "wrote " << path.string() << " (" << docs->size() << " documents)\n";
  }
  save_lexicon(rc.data_dir() / "lexicon.tsv", rc.data_dir() / "suffix_rules.tsv", corpus.lexicon);
  write_resolved_config(rc.data_dir(), "gen-data", rc);
}

inline void cmd_train(const RunConfig& rc, std::ostream& log = std::cout) {
  const auto train = load_split(rc, "train");
  const auto validation = load_split(rc, "validation");
  const auto test = load_split(rc, "test");
  TrainingHistory history;
  const ToyModel model = train_toy_classifier(train, rc.model, &history);
  const fs::path dir = rc.output_dir / "model";
  save_model(dir / "checkpoint.json", model, rc.model_hash());
  json metrics = header("train_metrics", rc.model_hash());
  metrics["epoch_loss"] = history.epoch_loss;
  metrics["train_accuracy"] = accuracy(model, train);
  metrics["validation_accuracy"] = accuracy(model, validation);
  metrics["test_accuracy"] = accuracy(model, test);
  metrics["vocab_size"] = model.vocab().size();
  write_json(dir / "train_metrics.json", metrics);
  write_resolved_config(dir, "train", rc);
  log << "trained toy model: test accuracy " << metrics["test_accuracy"].get<double>() << "\n";
}

inline CharEmbedder load_explicit_embedder(const RunConfig& rc) {
  return embedder_from_json(read_json(rc.explicit_dir() / "embedder.json"),
                            (rc.explicit_dir() / "embedder.json").string(), rc.explicit_hash());
}

struct ExplicitDefenseModel {
  CharEmbedder embedder;
  VocabularyEmbeddingIndex index;
};

// Hashes the vocabulary, optionally trains the refinement on generated
// misspellings, and indexes the vocabulary. Training statistics go to
// `metrics` when given.
inline ExplicitDefenseModel build_explicit_defense(const RunConfig& rc, const std::vector<std::string>& vocab,
                                                   json* metrics = nullptr) {
  CharEmbedder embedder(rc.explicit_dim, derive_seed(rc.seed, "char-hash"));
  if (rc.explicit_refine) {
    const auto pairs = generate_misspelling_pairs(std::set<std::string>(vocab.begin(), vocab.end()),
                                                  rc.explicit_pairs, derive_seed(rc.seed, "misspellings"));
    CharEmbedderFit fit = train_char_embedder(pairs, embedder, rc.explicit_training);
    if (metrics) {
      (*metrics)["pairs"] = pairs.size();
      (*metrics)["identity_loss"] = fit.identity_loss;
      (*metrics)["final_loss"] = fit.final_loss;
      (*metrics)["epoch_loss"] = fit.epoch_loss;
    }
    embedder = std::move(fit.embedder);
  }
  VocabularyEmbeddingIndex index = build_index(vocab, embedder);
  return {std::move(embedder), std::move(index)};
}

inline void cmd_defend_explicit(const RunConfig& rc, std::ostream& log) {
  const auto train = load_split(rc, "train");
  const auto vocab = defense_vocabulary(rc, train);
  json metrics = header("explicit_defense_metrics", rc.explicit_hash());
  metrics["vocabulary_size"] = vocab.size();
  const ExplicitDefenseModel defense = build_explicit_defense(rc, vocab, &metrics);
  const fs::path dir = rc.explicit_dir();
  write_json(dir / "embedder.json", embedder_to_json(defense.embedder, rc.explicit_hash()));
  write_json(dir / "index.json", index_to_json(defense.index, defense.embedder, rc.explicit_hash()));
  write_json(dir / "metrics.json", metrics);
  write_resolved_config(dir, "defend", rc);
  log << "built explicit defense: " << defense.index.size() << " vocabulary tokens\n";
}

inline void cmd_defend_abstain(const RunConfig& rc, std::ostream& log) {
  const ToyModel model = load_undefended(rc);
  const PosLexicon lexicon = load_run_lexicon(rc);
  const auto train = load_split(rc, "train");
  const auto eval = load_split(rc, rc.abstain_eval_split);
  const fs::path dir = rc.abstain_dir();
  const std::string hash = rc.abstain_hash();

  const AbstainDataset data =
      build_abstain_dataset(model, train, rc.abstain.attack, rc.abstain.attack_config, &lexicon);
  std::vector<CampaignRecord> generation;
  for (const auto& [i, r] : data.generation) {
    generation.push_back(CampaignRecord{i, r, r.success, r.final_class, std::nullopt, std::nullopt});
  }
  CampaignConfig gen_config{rc.abstain.attack, rc.abstain.attack_config, 1};
  Campaign gen_campaign{DefenseKind::kNone, std::nullopt, train.size(), generation};
  write_file_atomic(dir / "generation.jsonl",
                    serialize_jsonl(campaign_header(gen_campaign, gen_config, "train", hash), generation));
  save_dataset(dir / "abstain_dataset.tsv", DatasetFile{data.documents, data.origins}, hash);

  const DefendedModel defended = abstain_train(model, data, rc.abstain, rc.model_hash());
  json provenance{{"source_model", defended.source_model},
                  {"generation_attack", defended.generation_attack},
                  {"generation_attack_config", to_json(rc.abstain.attack_config)},
                  {"abstain_label", defended.abstain_label}};
  save_model(dir / "checkpoint.json", defended.model, hash, provenance);

  // Held-out adversarial examples made against the undefended model.
  CampaignConfig held_config{rc.abstain.attack, rc.abstain.attack_config, rc.workers};
  const Campaign held = run_campaign(model, eval, held_config, &lexicon);
  std::vector<AttackResult> held_results;
  for (const auto& r : held.records) held_results.push_back(r.result);
  const ReplayStats rep = replay(defended, held_results);
  std::size_t undefended_successes = 0;
  for (const auto& r : held.records) undefended_successes += r.success;

  json metrics = header("abstain_defense_metrics", hash);
  metrics["adversarial_examples"] = data.adversarial_count();
  metrics["clean_examples"] = data.documents.size() - data.adversarial_count();
  metrics["undefended_clean_accuracy"] = accuracy(model, eval);
  metrics["defended_clean_accuracy"] = accuracy(defended.model, eval);
  metrics["heldout_attempted"] = held.records.size();
  metrics["heldout_undefended_success_rate"] =
      static_cast<double>(undefended_successes) / static_cast<double>(held.records.size());
  metrics["replay_examples"] = rep.examples;
  metrics["replay_abstain_coverage"] = rep.coverage();
  metrics["replay_success_rate"] = rep.success_rate();
  write_json(dir / "metrics.json", metrics);
  write_resolved_config(dir, "defend", rc);
  log << "trained abstain defense: " << data.adversarial_count() << " adversarial examples, replay coverage "
      << rep.coverage() << "\n";
}

inline void cmd_defend(const RunConfig& rc, std::ostream& log = std::cout) {
  switch (rc.defense) {
    case DefenseKind::kExplicit: return cmd_defend_explicit(rc, log);
    case DefenseKind::kAbstain: return cmd_defend_abstain(rc, log);
    case DefenseKind::kNone: break;
  }
  throw Error(ErrorKind::kConfiguration, "defend needs defense.kind explicit or abstain (or --defense)");
}

inline CampaignFiles cmd_attack(const RunConfig& rc, std::ostream& log = std::cout) {
  const auto dataset = load_split(rc, rc.attack_split);
  const PosLexicon lexicon = load_run_lexicon(rc);
  const CampaignConfig config{rc.attack, rc.attack_config, rc.workers};
  Campaign campaign;
  if (rc.defense == DefenseKind::kAbstain) {
    const fs::path path = rc.abstain_dir() / "checkpoint.json";
    const json j = read_json(path);
    const ToyModel defended = model_from_json(j, path.string(), rc.abstain_hash());
    campaign = run_campaign(defended, dataset, config, &lexicon, nullptr, defended.num_classes() - 1);
  } else {
    const ToyModel model = load_undefended(rc);
    if (rc.defense == DefenseKind::kExplicit) {
      const CharEmbedder embedder = load_explicit_embedder(rc);
      const fs::path ipath = rc.explicit_dir() / "index.json";
      const VocabularyEmbeddingIndex index = index_from_json(read_json(ipath), embedder, ipath.string(), rc.explicit_hash());
      const ExplicitDefense defense{index, embedder, rc.thresholds};
      campaign = run_campaign(model, dataset, config, &lexicon, &defense);
    } else {
      campaign = run_campaign(model, dataset, config, &lexicon);
    }
  }
  const fs::path dir = rc.campaign_dir();
  const CampaignFiles files =
      write_campaign(dir, campaign_header(campaign, config, rc.attack_split, rc.campaign_hash()), campaign.records);
  write_resolved_config(dir, "attack", rc);
  const json report = read_json(files.report);
  log << attack_kind_name(rc.attack) << " attack (defense " << defense_kind_name(rc.defense)
      << "): success rate " << report["aggregates"]["success_rate"].get<double>() << " over "
      << report["aggregates"]["attempted"].get<std::size_t>() << " documents\n";
  return files;
}

// Recomputes the report from the campaign JSONL and checks it against the
// stored report byte for byte.
inline std::string cmd_report(const RunConfig& rc, std::ostream& log = std::cout) {
  const fs::path dir = rc.campaign_dir();
  const fs::path jsonl = dir / "records.jsonl";
  const ParsedCampaign parsed = parse_jsonl(read_file(jsonl));
  const std::string recomputed = build_report(parsed, jsonl.filename().string()).dump(2) + "\n";
  const std::string stored = read_file(dir / "report.json");
  if (recomputed != stored) {
    throw Error(ErrorKind::kMismatch, (dir / "report.json").string() + " differs from the aggregates of " +
                                          jsonl.string());
  }
  log << recomputed;
  return recomputed;
}

}  // namespace advtext

#endif  // ADVTEXT_PIPELINE_HPP_
