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

// Abstain-based training: the classifier gains an extra ABSTAIN class and is
// retrained on clean data mixed with adversarial examples labelled ABSTAIN.

#ifndef ADVTEXT_DEFENSE_ABSTAIN_HPP_
#define ADVTEXT_DEFENSE_ABSTAIN_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "advtext/attacks.hpp"
#include "advtext/errors.hpp"
#include "advtext/model.hpp"
#include "advtext/rng.hpp"
#include "advtext/text_core.hpp"

namespace advtext {

struct AbstainConfig {
  // Adversarial examples per clean example in the retraining mix.
  double mix_ratio = 1.0;
  std::size_t epochs = 30;
  double learning_rate = 0.05;
  std::size_t batch_size = 8;
  // Start from the undefended parameters; false re-initializes everything.
  bool warm_start = true;
  AttackKind attack = AttackKind::kCharacter;
  AttackConfig attack_config;
  std::uint64_t seed = 0;
};

inline void validate(const AbstainConfig& c) {
  if (!(c.mix_ratio > 0.0) || !std::isfinite(c.mix_ratio)) {
    throw Error(ErrorKind::kConfiguration, "mix_ratio must be > 0");
  }
  if (c.epochs == 0) throw Error(ErrorKind::kConfiguration, "abstain epochs must be >= 1");
  if (!(c.learning_rate > 0.0)) throw Error(ErrorKind::kConfiguration, "abstain learning_rate must be > 0");
  validate(c.attack_config);
}

enum class ExampleOrigin { kClean, kAdversarial };

inline const char* origin_name(ExampleOrigin o) {
  return o == ExampleOrigin::kClean ? "clean" : "adversarial";
}

inline ExampleOrigin parse_origin(std::string_view s) {
  if (s == "clean") return ExampleOrigin::kClean;
  if (s == "adversarial") return ExampleOrigin::kAdversarial;
  throw Error(ErrorKind::kParse, "unknown example origin '" + std::string(s) + "'");
}

struct AbstainDataset {
  std::vector<Document> documents;
  std::vector<ExampleOrigin> origins;
  std::size_t abstain_label = 0;
  // One result per generation attempt, in train-set order.
  std::vector<std::pair<std::size_t, AttackResult>> generation;

  std::size_t adversarial_count() const {
    std::size_t n = 0;
    for (auto o : origins) n += o == ExampleOrigin::kAdversarial;
    return n;
  }
};

// Attacks every training document the model gets right and labels the
// successful perturbations ABSTAIN; the clean documents follow unchanged.
inline AbstainDataset build_abstain_dataset(const Classifier& model, std::span<const Document> train_set,
                                            AttackKind attack, const AttackConfig& attack_config,
                                            const PosLexicon* lexicon) {
  if (train_set.empty()) throw Error(ErrorKind::kEmptyInput, "abstain generation needs training documents");
  AbstainDataset out;
  out.abstain_label = model.num_classes();
  for (std::size_t i = 0; i < train_set.size(); ++i) {
    const Document& doc = train_set[i];
    if (!doc.label) throw Error(ErrorKind::kConfiguration, "training document without a label");
    if (argmax(model.predict(doc)) != *doc.label) continue;
    AttackResult r = run_attack(attack, model, doc, attack_config, lexicon);
    if (r.success) {
      Document adv = r.perturbed;
      adv.label = out.abstain_label;
      out.documents.push_back(std::move(adv));
      out.origins.push_back(ExampleOrigin::kAdversarial);
    }
    out.generation.emplace_back(i, std::move(r));
  }
  if (out.documents.empty()) {
    throw Error(ErrorKind::kBudget,
                "the generation attack produced no adversarial examples; use a stronger attack or a larger "
                "query budget");
  }
  for (const auto& doc : train_set) {
    out.documents.push_back(doc);
    out.origins.push_back(ExampleOrigin::kClean);
  }
  return out;
}

struct DefendedModel {
  ToyModel model;
  std::size_t abstain_label = 0;
  // Identifies the undefended model and the attack used for generation.
  std::string source_model;
  std::string generation_attack;

  std::size_t num_classes() const { return model.num_classes(); }
};

// Same parameters as `model` with one extra, all-zero output row.
inline ToyModel extend_with_abstain(const ToyModel& model) {
  ToyModelConfig config = model.config();
  config.num_classes += 1;
  ToyParameters p = model.params();
  Matrix output(config.num_classes, p.output.cols);
  std::copy(p.output.data.begin(), p.output.data.end(), output.data.begin());
  p.output = std::move(output);
  p.bias.push_back(0.0);
  return ToyModel(model.vocab(), config, std::move(p));
}

// The retraining set: every clean example plus the adversarial examples
// cycled or truncated to mix_ratio times the clean count, shuffled.
inline std::vector<Document> abstain_training_mix(const AbstainDataset& data, const AbstainConfig& config) {
  std::vector<Document> clean, adversarial;
  for (std::size_t i = 0; i < data.documents.size(); ++i) {
    (data.origins[i] == ExampleOrigin::kClean ? clean : adversarial).push_back(data.documents[i]);
  }
  Rng rng(derive_seed(config.seed, "abstain-mix"));
  rng.shuffle(adversarial);
  const auto wanted = static_cast<std::size_t>(std::llround(config.mix_ratio * static_cast<double>(clean.size())));
  std::vector<Document> mix = std::move(clean);
  for (std::size_t i = 0; i < std::max<std::size_t>(wanted, 1); ++i) {
    mix.push_back(adversarial[i % adversarial.size()]);
  }
  rng.shuffle(mix);
  return mix;
}

inline DefendedModel abstain_train(const ToyModel& undefended, const AbstainDataset& data,
                                   const AbstainConfig& config, std::string source_model = {}) {
  validate(config);
  if (data.abstain_label != undefended.num_classes()) {
    throw Error(ErrorKind::kConfiguration, "abstain label must equal the undefended class count");
  }
  std::vector<bool> seen(undefended.num_classes() + 1, false);
  for (std::size_t i = 0; i < data.documents.size(); ++i) {
    const auto& label = data.documents[i].label;
    if (!label || *label > data.abstain_label) {
      throw Error(ErrorKind::kConfiguration, "abstain dataset label out of range");
    }
    seen[*label] = true;
  }
  for (bool s : seen) {
    if (!s) {
      throw Error(ErrorKind::kConfiguration,
                  "abstain training needs an adversarial example and a clean example of every class");
    }
  }

  ToyModel model = extend_with_abstain(undefended);
  if (!config.warm_start) {
    ToyModelConfig fresh = model.config();
    fresh.seed = derive_seed(config.seed, "abstain-cold-start");
    model = ToyModel(undefended.vocab(), fresh);
  }
  const auto mix = abstain_training_mix(data, config);
  fit(model, mix, config.learning_rate, config.epochs, config.batch_size);
  return DefendedModel{std::move(model), data.abstain_label, std::move(source_model),
                       attack_kind_name(config.attack)};
}

// An attack beats the abstaining model only by moving it to another real
// class; ABSTAIN counts as detection.
inline bool defended_attack_success(std::size_t original_class, std::size_t final_class,
                                    std::size_t abstain_label) {
  return final_class != original_class && final_class != abstain_label;
}

inline double defended_attack_success_rate(const std::vector<AttackResult>& results, std::size_t abstain_label) {
  if (results.empty()) throw Error(ErrorKind::kEmptyInput, "no attack results");
  std::size_t wins = 0;
  for (const auto& r : results) wins += defended_attack_success(r.original_class, r.final_class, abstain_label);
  return static_cast<double>(wins) / static_cast<double>(results.size());
}

struct ReplayStats {
  std::size_t examples = 0;
  std::size_t abstained = 0;
  std::size_t fooled = 0;  // neither the original class nor ABSTAIN

  double coverage() const { return examples ? static_cast<double>(abstained) / examples : 0.0; }
  double success_rate() const { return examples ? static_cast<double>(fooled) / examples : 0.0; }
};

// Feeds adversarial examples made against the undefended model to the
// defended one.
inline ReplayStats replay(const DefendedModel& defended, const std::vector<AttackResult>& undefended_results) {
  ReplayStats s;
  for (const auto& r : undefended_results) {
    if (!r.success) continue;
    const std::size_t cls = argmax(defended.model.predict(r.perturbed));
    ++s.examples;
    s.abstained += cls == defended.abstain_label;
    s.fooled += defended_attack_success(r.original_class, cls, defended.abstain_label);
  }
  return s;
}

}  // namespace advtext

#endif  // ADVTEXT_DEFENSE_ABSTAIN_HPP_
