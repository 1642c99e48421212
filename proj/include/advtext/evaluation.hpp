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

// Attack campaigns over a dataset split, their per-document records, and the
// aggregate report recomputed from those records.

#ifndef ADVTEXT_EVALUATION_HPP_
#define ADVTEXT_EVALUATION_HPP_

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "advtext/attacks.hpp"
#include "advtext/defense_abstain.hpp"
#include "advtext/defense_explicit.hpp"
#include "advtext/errors.hpp"
#include "advtext/io.hpp"
#include "advtext/model.hpp"

namespace advtext {

enum class DefenseKind { kNone, kExplicit, kAbstain };

inline const char* defense_kind_name(DefenseKind k) {
  switch (k) {
    case DefenseKind::kNone: return "none";
    case DefenseKind::kExplicit: return "explicit";
    case DefenseKind::kAbstain: return "abstain";
  }
  return "?";
}

inline DefenseKind parse_defense_kind(std::string_view s) {
  if (s == "none") return DefenseKind::kNone;
  if (s == "explicit") return DefenseKind::kExplicit;
  if (s == "abstain") return DefenseKind::kAbstain;
  throw Error(ErrorKind::kConfiguration, "unknown defense '" + std::string(s) + "' (none, explicit, abstain)");
}

struct ExplicitDefense {
  const VocabularyEmbeddingIndex& index;
  const CharEmbedder& embedder;
  DefenseThresholds thresholds;

  Document apply(const Document& doc) const { return defend_document(doc, index, embedder, thresholds); }
};

struct CampaignConfig {
  AttackKind attack = AttackKind::kCharacter;
  AttackConfig attack_config;
  std::size_t workers = 1;
};

struct CampaignRecord {
  std::size_t doc_index = 0;
  AttackResult result;
  // Outcome after the defense (equal to the attack's own outcome without one).
  bool success = false;
  std::size_t final_class = 0;
  // Explicit defense only.
  std::optional<Document> defended;
  std::optional<double> jaccard_defended;

  bool operator==(const CampaignRecord&) const = default;
};

struct Campaign {
  DefenseKind defense = DefenseKind::kNone;
  std::optional<std::size_t> abstain_label;
  std::size_t dataset_size = 0;
  std::vector<CampaignRecord> records;  // ascending doc_index
};

namespace detail {

// Runs job(i) for i in [0, n) on `workers` threads; the first exception
// thrown by any job is rethrown here.
template <typename Job>
void parallel_for(std::size_t n, std::size_t workers, Job&& job) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> threads;
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace detail

// Attacks every document of `dataset` the (defended) pipeline classifies
// correctly. With an explicit defense the attack targets the bare model and
// the defense is applied to the perturbed text before the final prediction.
// With an abstain defense `model` is the defended model and ABSTAIN counts as
// a defense win.
inline Campaign run_campaign(const Classifier& model, std::span<const Document> dataset,
                             const CampaignConfig& config, const PosLexicon* lexicon,
                             const ExplicitDefense* explicit_defense = nullptr,
                             std::optional<std::size_t> abstain_label = std::nullopt) {
  validate(config.attack_config);
  if (dataset.empty()) throw Error(ErrorKind::kEmptyInput, "campaign dataset is empty");
  if (explicit_defense && abstain_label) throw Error(ErrorKind::kConfiguration, "at most one defense per campaign");
  if (abstain_label && *abstain_label + 1 != model.num_classes()) {
    throw Error(ErrorKind::kConfiguration, "abstain label must be the last class of the defended model");
  }
  Campaign campaign;
  campaign.defense = explicit_defense ? DefenseKind::kExplicit : abstain_label ? DefenseKind::kAbstain : DefenseKind::kNone;
  campaign.abstain_label = abstain_label;
  campaign.dataset_size = dataset.size();

  std::vector<std::size_t> population;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const Document& doc = dataset[i];
    if (!doc.label) throw Error(ErrorKind::kConfiguration, "campaign documents need gold labels");
    const Document seen = explicit_defense ? explicit_defense->apply(doc) : doc;
    if (!seen.tokens.empty() && argmax(model.predict(seen)) == *doc.label) population.push_back(i);
  }
  if (population.empty()) {
    throw Error(ErrorKind::kPrecondition, "the model classifies no document correctly; nothing to attack");
  }

  campaign.records.resize(population.size());
  detail::parallel_for(population.size(), config.workers, [&](std::size_t slot) {
    const std::size_t i = population[slot];
    CountingClassifier counter(model);
    CampaignRecord rec;
    rec.doc_index = i;
    rec.result = run_attack(config.attack, counter, dataset[i], config.attack_config, lexicon);
    if (counter.calls() != rec.result.queries) {
      throw Error(ErrorKind::kMismatch, "document " + std::to_string(i) + ": attack reported " +
                                            std::to_string(rec.result.queries) + " queries but made " +
                                            std::to_string(counter.calls()));
    }
    rec.final_class = rec.result.final_class;
    rec.success = rec.result.success;
    if (explicit_defense) {
      rec.defended = explicit_defense->apply(rec.result.perturbed);
      rec.final_class = argmax(model.predict(*rec.defended));
      rec.success = rec.final_class != rec.result.original_class;
      rec.jaccard_defended = jaccard(rec.result.original, *rec.defended);
    } else if (abstain_label) {
      rec.success = defended_attack_success(rec.result.original_class, rec.final_class, *abstain_label);
    }
    campaign.records[slot] = std::move(rec);
  });
  return campaign;
}

// ---------------------------------------------------------------------------
// Statistics

// Sample Pearson correlation; undefined for fewer than two points or a
// constant series.
inline double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorKind::kUndefined, "pearson: series lengths differ");
  if (x.size() < 2) throw Error(ErrorKind::kUndefined, "pearson: need at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw Error(ErrorKind::kUndefined, "pearson: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

inline double mean(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : (v[m - 1] + v[m]) / 2.0;
}

// ---------------------------------------------------------------------------
// JSONL: one header line, then one record per attacked document.

inline json campaign_header(const Campaign& c, const CampaignConfig& config, const std::string& split,
                            const std::string& hash) {
  json h = header("campaign", hash);
  h["attack"] = attack_kind_name(config.attack);
  h["attack_config"] = to_json(config.attack_config);
  h["defense"] = defense_kind_name(c.defense);
  h["abstain_label"] = c.abstain_label ? json(*c.abstain_label) : json(nullptr);
  h["split"] = split;
  h["dataset_size"] = c.dataset_size;
  return h;
}

inline json to_json(const CampaignRecord& r) {
  json j = to_json(r.result);
  j["doc_index"] = r.doc_index;
  j["campaign_success"] = r.success;
  j["campaign_final_class"] = r.final_class;
  if (r.defended) j["defended"] = to_json(*r.defended);
  if (r.jaccard_defended) j["jaccard_defended"] = *r.jaccard_defended;
  return j;
}

inline CampaignRecord campaign_record_from_json(const json& j, const std::string& where) {
  CampaignRecord r;
  r.result = attack_result_from_json(j, where);
  r.doc_index = get_field<std::size_t>(j, "doc_index", where);
  r.success = get_field<bool>(j, "campaign_success", where);
  r.final_class = get_field<std::size_t>(j, "campaign_final_class", where);
  if (j.contains("defended")) r.defended = document_from_json(j.at("defended"), where);
  if (j.contains("jaccard_defended")) r.jaccard_defended = get_field<double>(j, "jaccard_defended", where);
  return r;
}

inline std::string serialize_jsonl(const json& campaign_header_line, const std::vector<CampaignRecord>& records) {
  std::string out = campaign_header_line.dump() + "\n";
  for (const auto& r : records) out += to_json(r).dump() + "\n";
  return out;
}

struct ParsedCampaign {
  json header;
  std::vector<CampaignRecord> records;
};

inline ParsedCampaign parse_jsonl(std::string_view text) {
  ParsedCampaign out;
  std::size_t line_no = 0, pos = 0;
  std::set<std::size_t> seen;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    const std::string where = "line " + std::to_string(line_no);
    const json j = parse_json(line, where);
    if (line_no == 1) {
      check_header(j, "campaign", where);
      out.header = j;
      continue;
    }
    CampaignRecord r = campaign_record_from_json(j, where);
    if (!seen.insert(r.doc_index).second) {
      throw Error(ErrorKind::kParse, where + ": duplicate doc_index " + std::to_string(r.doc_index));
    }
    out.records.push_back(std::move(r));
  }
  if (line_no == 0) throw Error(ErrorKind::kParse, "line 1: missing campaign header");
  return out;
}

// ---------------------------------------------------------------------------
// Report

namespace detail {

inline json summary(const std::vector<const CampaignRecord*>& rs, bool with_defended) {
  std::vector<double> queries, lev, delta, jac, jac_def;
  for (const auto* r : rs) {
    queries.push_back(static_cast<double>(r->result.queries));
    lev.push_back(static_cast<double>(r->result.levenshtein_raw));
    delta.push_back(r->result.confidence_delta);
    jac.push_back(r->result.jaccard_tokens);
    if (with_defended) {
      if (!r->jaccard_defended) throw Error(ErrorKind::kParse, "explicit-defense record without jaccard_defended");
      jac_def.push_back(*r->jaccard_defended);
    }
  }
  json s{{"count", rs.size()},
         {"mean_queries", mean(queries)},
         {"median_queries", median(queries)},
         {"mean_levenshtein_raw", mean(lev)},
         {"mean_confidence_delta", mean(delta)},
         {"mean_jaccard_perturbed", mean(jac)}};
  if (with_defended) s["mean_jaccard_defended"] = mean(jac_def);
  return s;
}

}  // namespace detail

// Aggregates computed only from the campaign header and records. Record
// order does not matter; blocks without data are omitted, never zero-filled.
inline json aggregate(const json& campaign_header_line, std::vector<CampaignRecord> records) {
  if (records.empty()) throw Error(ErrorKind::kEmptyInput, "no campaign records to aggregate");
  std::sort(records.begin(), records.end(),
            [](const CampaignRecord& a, const CampaignRecord& b) { return a.doc_index < b.doc_index; });
  const std::string defense = get_field<std::string>(campaign_header_line, "defense", "campaign header");
  const bool with_defended = defense == "explicit";
  std::vector<const CampaignRecord*> all, ok;
  for (const auto& r : records) {
    all.push_back(&r);
    if (r.success) ok.push_back(&r);
  }
  json rep;
  rep["attempted"] = all.size();
  rep["successes"] = ok.size();
  rep["success_rate"] = static_cast<double>(ok.size()) / static_cast<double>(all.size());
  rep["all_attempts"] = detail::summary(all, with_defended);
  if (!ok.empty()) {
    rep["successful_attacks"] = detail::summary(ok, with_defended);
    std::vector<double> len, q;
    for (const auto* r : ok) {
      len.push_back(static_cast<double>(r->result.original.tokens.size()));
      q.push_back(static_cast<double>(r->result.queries));
    }
    try {
      rep["pearson_len_queries"] = pearson(len, q);
    } catch (const Error&) {
      // Undefined correlation stays absent.
    }
  }
  if (defense == "abstain") {
    const auto label = get_field<std::size_t>(campaign_header_line, "abstain_label", "campaign header");
    std::size_t abstained = 0;
    for (const auto* r : all) abstained += r->final_class == label;
    rep["abstain_rate"] = static_cast<double>(abstained) / static_cast<double>(all.size());
  }
  return rep;
}

inline json build_report(const ParsedCampaign& parsed, const std::string& jsonl_name) {
  json rep = header("campaign_report", get_field<std::string>(parsed.header, "config_hash", "campaign header"));
  for (const char* key : {"attack", "defense", "split", "dataset_size"}) rep[key] = parsed.header.at(key);
  rep["jsonl"] = jsonl_name;
  rep["aggregates"] = aggregate(parsed.header, parsed.records);
  return rep;
}

// ---------------------------------------------------------------------------
// Plot-ready CSV exports

inline std::string length_queries_csv(const std::vector<CampaignRecord>& records) {
  std::ostringstream out;
  out << "doc_index,length,queries,success\n";
  for (const auto& r : records) {
    out << r.doc_index << ',' << r.result.original.tokens.size() << ',' << r.result.queries << ','
        << (r.success ? 1 : 0) << '\n';
  }
  return out.str();
}

inline std::string distances_csv(const std::vector<CampaignRecord>& records) {
  std::ostringstream out;
  out.precision(17);
  out << "doc_index,success,levenshtein_raw,jaccard_perturbed,jaccard_defended,confidence_delta\n";
  for (const auto& r : records) {
    out << r.doc_index << ',' << (r.success ? 1 : 0) << ',' << r.result.levenshtein_raw << ','
        << r.result.jaccard_tokens << ',';
    if (r.jaccard_defended) out << *r.jaccard_defended;
    out << ',' << r.result.confidence_delta << '\n';
  }
  return out.str();
}

// Histogram of raw Levenshtein distances over successful attacks.
inline std::string levenshtein_histogram_csv(const std::vector<CampaignRecord>& records) {
  std::map<std::size_t, std::size_t> hist;
  for (const auto& r : records) {
    if (r.success) ++hist[r.result.levenshtein_raw];
  }
  std::ostringstream out;
  out << "levenshtein_raw,count\n";
  for (const auto& [d, n] : hist) out << d << ',' << n << '\n';
  return out.str();
}

}  // namespace advtext

#endif  // ADVTEXT_EVALUATION_HPP_
