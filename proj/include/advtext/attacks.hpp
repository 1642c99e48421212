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

// White-box attacks: attention-ranked baseline word attack, constrained word
// attack and greedy character attack.

#ifndef ADVTEXT_ATTACKS_HPP_
#define ADVTEXT_ATTACKS_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "advtext/errors.hpp"
#include "advtext/model.hpp"
#include "advtext/text_core.hpp"

namespace advtext {

enum class AttackKind { kBaselineWord, kConstrainedWord, kCharacter };

inline const char* attack_kind_name(AttackKind k) {
  switch (k) {
    case AttackKind::kBaselineWord: return "baseline";
    case AttackKind::kConstrainedWord: return "constrained";
    case AttackKind::kCharacter: return "char";
  }
  return "?";
}

inline AttackKind parse_attack_kind(std::string_view name) {
  if (name == "baseline") return AttackKind::kBaselineWord;
  if (name == "constrained") return AttackKind::kConstrainedWord;
  if (name == "char") return AttackKind::kCharacter;
  throw Error(ErrorKind::kConfiguration,
              "unknown attack '" + std::string(name) + "' (expected baseline|constrained|char)");
}

struct AttackConfig {
  std::size_t max_tokens_attacked = 5;
  std::size_t candidates_per_position = 10;
  std::size_t query_budget = 2000;
  double cosine_threshold = 0.9363;
  std::size_t max_char_edits_per_token = 2;
  std::uint64_t seed = 0;

  bool operator==(const AttackConfig&) const = default;
};

inline void validate(const AttackConfig& c) {
  if (c.max_tokens_attacked == 0 || c.candidates_per_position == 0 || c.query_budget == 0 ||
      c.max_char_edits_per_token == 0) {
    throw Error(ErrorKind::kConfiguration, "attack counts must all be >= 1");
  }
  if (!(c.cosine_threshold > 0.0 && c.cosine_threshold <= 1.0)) {
    throw Error(ErrorKind::kConfiguration, "cosine_threshold must lie in (0, 1]");
  }
}

enum class WordEditKind { kReplace, kInsertLeft, kInsertRight };

inline const char* word_edit_kind_name(WordEditKind k) {
  switch (k) {
    case WordEditKind::kReplace: return "replace";
    case WordEditKind::kInsertLeft: return "insert_left";
    case WordEditKind::kInsertRight: return "insert_right";
  }
  return "?";
}

// `position` indexes the document as it was when the edit was applied.
struct WordEditOp {
  WordEditKind kind = WordEditKind::kReplace;
  std::size_t position = 0;
  std::string new_token;

  bool operator==(const WordEditOp&) const = default;
};

struct CharEdit {
  std::size_t token_index = 0;
  CharEditOp op;

  bool operator==(const CharEdit&) const = default;
};

using EditRecord = std::variant<WordEditOp, CharEdit>;

inline Document apply_word_edit(const Document& doc, const WordEditOp& e) {
  switch (e.kind) {
    case WordEditKind::kReplace: return replace_token(doc, e.position, e.new_token);
    case WordEditKind::kInsertLeft: return insert_token(doc, e.position, e.new_token);
    case WordEditKind::kInsertRight: return insert_token(doc, e.position + 1, e.new_token);
  }
  return doc;
}

inline Document apply_edit(const Document& doc, const EditRecord& e) {
  if (const auto* w = std::get_if<WordEditOp>(&e)) return apply_word_edit(doc, *w);
  const auto& c = std::get<CharEdit>(e);
  return replace_token(doc, c.token_index, apply_char_edit(doc.tokens.at(c.token_index).text, c.op));
}

struct AttackResult {
  Document original;
  Document perturbed;
  bool success = false;
  std::size_t queries = 0;
  std::vector<EditRecord> edits;
  double original_confidence = 0.0;
  double final_confidence = 0.0;
  double confidence_delta = 0.0;
  std::size_t levenshtein_raw = 0;
  double jaccard_tokens = 1.0;
  // Argmax on the original and on the perturbed document.
  std::size_t original_class = 0;
  std::size_t final_class = 0;

  bool operator==(const AttackResult&) const = default;
};

// ---------------------------------------------------------------------------

// Token indices by descending attention importance; ties go to the lower
// index and punctuation-only tokens are moved to the end.
inline std::vector<std::size_t> rank_tokens(const Classifier& model, const Document& doc) {
  if (doc.tokens.empty()) throw Error(ErrorKind::kEmptyInput, "cannot rank an empty document");
  const auto importance = model.attention_importance(doc);
  std::vector<std::size_t> order(doc.tokens.size());
  std::vector<bool> punct(doc.tokens.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    order[i] = i;
    punct[i] = is_punctuation_only(doc.tokens[i].text);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (punct[a] != punct[b]) return !punct[a];
    return importance[a] > importance[b];
  });
  return order;
}

namespace detail {

// Wraps the target model and refuses to go past the query budget. Inputs
// the model reports as identical to an earlier query are answered from a
// cache and cost nothing.
class BudgetedOracle {
 public:
  BudgetedOracle(const Classifier& model, std::size_t budget) : model_(model), budget_(budget) {}

  std::optional<Probabilities> predict(const Document& doc) {
    std::optional<std::string> key = model_.input_key(doc);
    if (key) {
      auto it = cache_.find(*key);
      if (it != cache_.end()) return it->second;
    }
    if (used_ >= budget_) return std::nullopt;
    ++used_;
    Probabilities probs = model_.predict(doc);
    if (key) cache_.emplace(std::move(*key), probs);
    return probs;
  }

  std::size_t used() const { return used_; }

 private:
  const Classifier& model_;
  std::size_t budget_;
  std::size_t used_ = 0;
  std::unordered_map<std::string, Probabilities> cache_;
};

struct AttackState {
  Document current;
  Probabilities probs;
  std::size_t target_class = 0;
  std::vector<EditRecord> edits;

  double confidence() const { return probs[target_class]; }
  bool flipped() const { return argmax(probs) != target_class; }
};

// Queries the original, checks the precondition and seeds the greedy state.
inline AttackState begin_attack(const Document& doc, BudgetedOracle& oracle) {
  if (doc.tokens.empty()) throw Error(ErrorKind::kEmptyInput, "cannot attack an empty document");
  AttackState s;
  s.current = doc;
  s.probs = *oracle.predict(doc);
  s.target_class = argmax(s.probs);
  if (doc.label && *doc.label != s.target_class) {
    throw Error(ErrorKind::kPrecondition,
                "model already misclassifies the document (gold " + std::to_string(*doc.label) +
                    ", predicted " + std::to_string(s.target_class) + ")");
  }
  return s;
}

inline AttackResult finish_attack(const Document& original, double original_confidence,
                                  const AttackState& s, std::size_t queries) {
  AttackResult r;
  r.original = original;
  r.perturbed = s.current;
  r.success = s.flipped();
  r.queries = queries;
  r.edits = s.edits;
  r.original_confidence = original_confidence;
  r.final_confidence = s.confidence();
  r.confidence_delta = r.original_confidence - r.final_confidence;
  r.levenshtein_raw = levenshtein(original.raw, s.current.raw);
  r.jaccard_tokens = jaccard(original, s.current);
  r.original_class = s.target_class;
  r.final_class = argmax(s.probs);
  return r;
}

// Copy of `doc` with a [MASK] token spliced into the token list at `gap`.
// The raw text is untouched; only the model reads the result.
inline Document with_virtual_mask(const Document& doc, std::size_t gap) {
  Document out = doc;
  const std::size_t at = gap < doc.tokens.size() ? doc.tokens[gap].start
                                                 : (doc.tokens.empty() ? 0 : doc.tokens.back().end);
  out.tokens.insert(out.tokens.begin() + static_cast<std::ptrdiff_t>(gap),
                    Token{std::string(Vocabulary::kMaskText), at, at});
  return out;
}

// Shared driver of the baseline and constrained word attacks. `admissible`
// filters candidate edits before they are queried.
template <typename Admissible>
AttackResult word_attack(const Classifier& model, const Document& doc, const AttackConfig& config,
                         Admissible&& admissible) {
  validate(config);
  BudgetedOracle oracle(model, config.query_budget);
  AttackState s = begin_attack(doc, oracle);
  const double original_confidence = s.confidence();
  const auto order = rank_tokens(model, doc);
  // Current index of every original token; insertions shift them.
  std::vector<std::size_t> where(doc.tokens.size());
  for (std::size_t i = 0; i < where.size(); ++i) where[i] = i;

  const std::size_t positions = std::min(config.max_tokens_attacked, order.size());
  for (std::size_t r = 0; r < positions; ++r) {
    const std::size_t pos = where[order[r]];
    std::optional<WordEditOp> best;
    Probabilities best_probs;
    for (WordEditKind kind :
         {WordEditKind::kReplace, WordEditKind::kInsertLeft, WordEditKind::kInsertRight}) {
      std::vector<std::string> candidates;
      if (kind == WordEditKind::kReplace) {
        candidates = model.mask_candidates(s.current, pos, config.candidates_per_position);
      } else {
        // Insertion candidates come from masking a virtual slot at the gap.
        const std::size_t gap = kind == WordEditKind::kInsertLeft ? pos : pos + 1;
        const Document slotted = with_virtual_mask(s.current, gap);
        candidates = model.mask_candidates(slotted, gap, config.candidates_per_position);
      }
      for (auto& cand : candidates) {
        WordEditOp op{kind, pos, std::move(cand)};
        Document trial = apply_word_edit(s.current, op);
        if (!admissible(s.current, op, trial)) continue;
        auto probs = oracle.predict(trial);
        if (!probs) return finish_attack(doc, original_confidence, s, oracle.used());
        if (!best || (*probs)[s.target_class] < best_probs[s.target_class]) {
          best = std::move(op);
          best_probs = std::move(*probs);
        }
      }
    }
    if (!best || !(best_probs[s.target_class] < s.confidence())) continue;
    s.current = apply_word_edit(s.current, *best);
    s.probs = std::move(best_probs);
    if (best->kind != WordEditKind::kReplace) {
      const std::size_t gap = best->kind == WordEditKind::kInsertLeft ? pos : pos + 1;
      for (auto& w : where) {
        if (w >= gap) ++w;
      }
    }
    s.edits.emplace_back(std::move(*best));
    if (s.flipped()) break;
  }
  return finish_attack(doc, original_confidence, s, oracle.used());
}

}  // namespace detail

inline AttackResult baseline_word_attack(const Classifier& model, const Document& doc,
                                         const AttackConfig& config) {
  return detail::word_attack(model, doc, config,
                             [](const Document&, const WordEditOp&, const Document&) { return true; });
}

// Admissibility rule of the constrained attack, exposed for post-hoc checks.
// `before` is the document the edit is applied to.
inline bool constrained_edit_admissible(const Classifier& model, const std::vector<double>& original_embedding,
                                        const PosLexicon& lexicon, double threshold,
                                        const Document& before, const WordEditOp& op,
                                        const Document& after) {
  if (op.kind == WordEditKind::kReplace &&
      pos_tag(lexicon, op.new_token) != pos_tag(lexicon, before.tokens.at(op.position).text)) {
    return false;
  }
  return cosine(original_embedding, model.doc_embedding(after)) >= threshold;
}

inline AttackResult constrained_word_attack(const Classifier& model, const Document& doc,
                                            const AttackConfig& config, const PosLexicon& lexicon) {
  if (doc.tokens.empty()) throw Error(ErrorKind::kEmptyInput, "cannot attack an empty document");
  const auto original_embedding = model.doc_embedding(doc);
  return detail::word_attack(
      model, doc, config, [&](const Document& before, const WordEditOp& op, const Document& after) {
        return constrained_edit_admissible(model, original_embedding, lexicon,
                                           config.cosine_threshold, before, op, after);
      });
}

// Every character edit of `text` in enumeration order: swaps, inserts,
// deletes, substitutions; then by position; then by inventory character.
// No-op edits, edits that would empty the token and edits whose result
// would no longer read back as one identical token are skipped, as are
// edits reproducing an earlier result.
inline std::vector<std::pair<CharEditOp, std::string>> enumerate_char_edits(const std::string& text) {
  const std::u32string cps = utf8_decode(text);
  const auto& inventory = character_inventory();
  std::vector<CharEditOp> ops;
  for (std::size_t p = 0; p + 1 < cps.size(); ++p) ops.push_back({CharEditKind::kSwap, p, std::nullopt});
  for (std::size_t p = 0; p <= cps.size(); ++p) {
    for (char32_t c : inventory) ops.push_back({CharEditKind::kInsert, p, c});
  }
  if (cps.size() > 1) {
    for (std::size_t p = 0; p < cps.size(); ++p) ops.push_back({CharEditKind::kDelete, p, std::nullopt});
  }
  for (std::size_t p = 0; p < cps.size(); ++p) {
    for (char32_t c : inventory) ops.push_back({CharEditKind::kSubstitute, p, c});
  }
  std::vector<std::pair<CharEditOp, std::string>> out;
  std::set<std::u32string> seen{cps};
  for (const auto& op : ops) {
    std::u32string edited = apply_char_edit(cps, op);
    if (!seen.insert(edited).second) continue;
    std::string encoded = utf8_encode(edited);
    const auto retok = tokenize(encoded);
    if (retok.size() != 1 || retok[0].text != encoded) continue;
    out.emplace_back(op, std::move(encoded));
  }
  return out;
}

inline AttackResult char_attack(const Classifier& model, const Document& doc, const AttackConfig& config) {
  validate(config);
  detail::BudgetedOracle oracle(model, config.query_budget);
  detail::AttackState s = detail::begin_attack(doc, oracle);
  const double original_confidence = s.confidence();
  const auto order = rank_tokens(model, doc);
  const std::size_t positions = std::min(config.max_tokens_attacked, order.size());
  for (std::size_t r = 0; r < positions && !s.flipped(); ++r) {
    const std::size_t pos = order[r];
    for (std::size_t e = 0; e < config.max_char_edits_per_token; ++e) {
      std::optional<CharEditOp> best;
      Document best_doc;
      Probabilities best_probs;
      for (auto& [op, edited] : enumerate_char_edits(s.current.tokens[pos].text)) {
        Document trial = replace_token(s.current, pos, edited);
        auto probs = oracle.predict(trial);
        if (!probs) return detail::finish_attack(doc, original_confidence, s, oracle.used());
        if (!best || (*probs)[s.target_class] < best_probs[s.target_class]) {
          best = op;
          best_doc = std::move(trial);
          best_probs = std::move(*probs);
        }
      }
      if (!best || !(best_probs[s.target_class] < s.confidence())) break;
      s.current = std::move(best_doc);
      s.probs = std::move(best_probs);
      s.edits.emplace_back(CharEdit{pos, *best});
      if (s.flipped()) break;
    }
  }
  return detail::finish_attack(doc, original_confidence, s, oracle.used());
}

inline AttackResult run_attack(AttackKind kind, const Classifier& model, const Document& doc,
                               const AttackConfig& config, const PosLexicon* lexicon) {
  switch (kind) {
    case AttackKind::kBaselineWord: return baseline_word_attack(model, doc, config);
    case AttackKind::kConstrainedWord:
      if (!lexicon) throw Error(ErrorKind::kConfiguration, "constrained attack needs a POS lexicon");
      return constrained_word_attack(model, doc, config, *lexicon);
    case AttackKind::kCharacter: return char_attack(model, doc, config);
  }
  throw Error(ErrorKind::kConfiguration, "unknown attack kind");
}

}  // namespace advtext

#endif  // ADVTEXT_ATTACKS_HPP_
