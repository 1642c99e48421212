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

#include "advtext/attacks.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace advtext {
namespace {

using testing::desk;

std::vector<Document> sample(std::size_t n) {
  const auto& test = desk().corpus.test;
  std::vector<Document> out;
  for (std::size_t i = 0; i < test.size() && out.size() < n; i += 7) {
    if (argmax(desk().model.predict(test[i])) == *test[i].label) out.push_back(test[i]);
  }
  return out;
}

AttackResult run(AttackKind kind, const Classifier& model, const Document& doc,
                 const AttackConfig& config = {}) {
  return run_attack(kind, model, doc, config, &desk().corpus.lexicon);
}

constexpr AttackKind kAllKinds[] = {AttackKind::kBaselineWord, AttackKind::kConstrainedWord,
                                    AttackKind::kCharacter};

TEST(AttackKindTest, Names) {
  for (AttackKind k : kAllKinds) EXPECT_EQ(parse_attack_kind(attack_kind_name(k)), k);
  EXPECT_THROW(parse_attack_kind("word"), Error);
}

TEST(AttackConfigTest, Validation) {
  AttackConfig c;
  c.cosine_threshold = 0.0;
  EXPECT_THROW(validate(c), Error);
  c.cosine_threshold = 1.5;
  EXPECT_THROW(validate(c), Error);
  c = AttackConfig{};
  c.query_budget = 0;
  EXPECT_THROW(validate(c), Error);
  EXPECT_DOUBLE_EQ(AttackConfig{}.cosine_threshold, 0.9363);
}

TEST(RankTokensTest, MatchesSortOracle) {
  const auto& m = desk().model;
  for (const auto& doc : sample(30)) {
    const auto imp = m.attention_importance(doc);
    std::vector<std::size_t> expected;
    // Words by importance, then punctuation, each group stable by index.
    for (int pass = 0; pass < 2; ++pass) {
      std::vector<std::size_t> group;
      for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
        if (is_punctuation_only(doc.tokens[i].text) == (pass == 1)) group.push_back(i);
      }
      for (std::size_t a = 0; a < group.size(); ++a) {
        for (std::size_t b = a + 1; b < group.size(); ++b) {
          if (imp[group[b]] > imp[group[a]] ||
              (imp[group[b]] == imp[group[a]] && group[b] < group[a])) {
            std::swap(group[a], group[b]);
          }
        }
      }
      expected.insert(expected.end(), group.begin(), group.end());
    }
    EXPECT_EQ(rank_tokens(m, doc), expected) << doc.raw;
  }
}

TEST(AttackTest, PreconditionsAndErrors) {
  const auto& m = desk().model;
  Document doc = sample(1)[0];
  doc.label = 1 - *doc.label;
  for (AttackKind k : kAllKinds) {
    try {
      run(k, m, doc);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kPrecondition);
    }
    try {
      run(k, m, make_document("  "));
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kEmptyInput);
    }
  }
  EXPECT_THROW(run_attack(AttackKind::kConstrainedWord, m, sample(1)[0], {}, nullptr), Error);
}

TEST(AttackTest, UnlabelledDocumentAttacksPredictedClass) {
  Document doc = sample(1)[0];
  const std::size_t predicted = *doc.label;
  doc.label.reset();
  const auto r = run(AttackKind::kCharacter, desk().model, doc);
  EXPECT_EQ(r.original_class, predicted);
}

TEST(AttackTest, BudgetOfOneQuery) {
  AttackConfig c;
  c.query_budget = 1;
  for (AttackKind k : kAllKinds) {
    const auto r = run(k, desk().model, sample(1)[0], c);
    EXPECT_FALSE(r.success);
    EXPECT_EQ(r.queries, 1u);
    EXPECT_TRUE(r.edits.empty());
    EXPECT_EQ(r.perturbed, r.original);
  }
}

TEST(AttackTest, BudgetNeverExceeded) {
  AttackConfig c;
  c.query_budget = 25;
  for (AttackKind k : kAllKinds) {
    for (const auto& doc : sample(5)) {
      CountingClassifier counter(desk().model);
      const auto r = run(k, counter, doc, c);
      EXPECT_LE(r.queries, 25u);
      EXPECT_EQ(counter.calls(), r.queries);
    }
  }
}

// Properties every result must satisfy, checked against fresh model calls.
void check_result(AttackKind kind, const AttackResult& r, const AttackConfig& c) {
  const auto& m = desk().model;
  SCOPED_TRACE(std::string(attack_kind_name(kind)) + ": " + r.original.raw);
  const auto p0 = m.predict(r.original);
  EXPECT_EQ(r.original_class, argmax(p0));
  EXPECT_DOUBLE_EQ(r.original_confidence, p0[r.original_class]);
  const auto p1 = m.predict(r.perturbed);
  EXPECT_EQ(r.final_class, argmax(p1));
  EXPECT_DOUBLE_EQ(r.final_confidence, p1[r.original_class]);
  EXPECT_DOUBLE_EQ(r.confidence_delta, r.original_confidence - r.final_confidence);
  EXPECT_EQ(r.success, r.final_class != r.original_class);
  EXPECT_EQ(r.levenshtein_raw, levenshtein(r.original.raw, r.perturbed.raw));
  EXPECT_DOUBLE_EQ(r.jaccard_tokens, jaccard(r.original, r.perturbed));
  EXPECT_EQ(r.perturbed.tokens, tokenize(r.perturbed.raw));
  EXPECT_LE(r.queries, c.query_budget);
  if (r.edits.empty()) {
    EXPECT_EQ(r.perturbed.raw, r.original.raw);
  }

  // Replaying the edits reproduces the output, and every committed edit
  // strictly lowers the confidence in the original class.
  Document cur = r.original;
  double conf = r.original_confidence;
  const auto emb0 = m.doc_embedding(r.original);
  std::vector<std::size_t> per_token(r.original.tokens.size(), 0);
  for (const auto& e : r.edits) {
    const Document next = apply_edit(cur, e);
    const double next_conf = m.predict(next)[r.original_class];
    EXPECT_LT(next_conf, conf);
    if (kind == AttackKind::kCharacter) {
      const auto& ce = std::get<CharEdit>(e);
      EXPECT_EQ(next.tokens.size(), cur.tokens.size());
      ++per_token.at(ce.token_index);
      if (ce.op.kind == CharEditKind::kDelete) {
        EXPECT_GT(utf8_length(cur.tokens[ce.token_index].text), 1u);
      }
    } else {
      const auto& we = std::get<WordEditOp>(e);
      EXPECT_EQ(next.tokens.size(), cur.tokens.size() + (we.kind == WordEditKind::kReplace ? 0 : 1));
      if (kind == AttackKind::kConstrainedWord) {
        EXPECT_TRUE(constrained_edit_admissible(m, emb0, desk().corpus.lexicon, c.cosine_threshold,
                                                cur, we, next));
        EXPECT_GE(cosine(emb0, m.doc_embedding(next)), c.cosine_threshold);
        if (we.kind == WordEditKind::kReplace) {
          EXPECT_EQ(pos_tag(desk().corpus.lexicon, we.new_token),
                    pos_tag(desk().corpus.lexicon, cur.tokens[we.position].text));
        }
      }
    }
    cur = next;
    conf = next_conf;
  }
  EXPECT_EQ(cur.raw, r.perturbed.raw);
  for (std::size_t n : per_token) EXPECT_LE(n, c.max_char_edits_per_token);
  if (kind == AttackKind::kCharacter) {
    EXPECT_EQ(r.perturbed.tokens.size(), r.original.tokens.size());
  }
  if (kind != AttackKind::kCharacter) {
    std::size_t positions = 0;
    for (const auto& e : r.edits) positions += std::holds_alternative<WordEditOp>(e) ? 1 : 0;
    EXPECT_LE(positions, c.max_tokens_attacked);
  }
}

TEST(AttackTest, ResultInvariants) {
  const AttackConfig c;
  std::size_t successes[3] = {0, 0, 0};
  for (const auto& doc : sample(12)) {
    for (std::size_t k = 0; k < 3; ++k) {
      CountingClassifier counter(desk().model);
      const auto r = run(kAllKinds[k], counter, doc, c);
      EXPECT_EQ(counter.calls(), r.queries);
      check_result(kAllKinds[k], r, c);
      successes[k] += r.success;
    }
  }
  // The sample must exercise committed edits, not only no-op results.
  EXPECT_GT(successes[0], 0u);
  EXPECT_GT(successes[2], 0u);
}

TEST(AttackTest, Deterministic) {
  for (AttackKind k : kAllKinds) {
    const auto doc = sample(2)[1];
    const auto a = run(k, desk().model, doc);
    const auto b = run(k, desk().model, doc);
    EXPECT_EQ(a.perturbed, b.perturbed);
    EXPECT_EQ(a.edits, b.edits);
    EXPECT_EQ(a.queries, b.queries);
  }
}

TEST(ConstrainedAttackTest, ThresholdOneAdmitsOnlyEmbeddingPreservingEdits) {
  AttackConfig c;
  c.cosine_threshold = 1.0;
  for (const auto& doc : sample(8)) {
    const auto r = run(AttackKind::kConstrainedWord, desk().model, doc, c);
    const auto emb0 = desk().model.doc_embedding(doc);
    EXPECT_GE(cosine(emb0, desk().model.doc_embedding(r.perturbed)), 1.0 - 1e-12);
    if (r.edits.empty()) {
      EXPECT_FALSE(r.success);
      EXPECT_EQ(r.queries, 1u);
    }
  }
}

// ---------------------------------------------------------------------------
// Character attack against an independent exhaustive re-enumeration.

struct RefEdit {
  int kind;  // 0 swap, 1 insert, 2 delete, 3 substitute
  std::size_t pos;
  char ch;
  std::string result;
};

std::vector<RefEdit> reference_edits(const std::string& w) {
  const std::string inv = "abcdefghijklmnopqrstuvwxyz0123456789";
  std::vector<RefEdit> all;
  for (std::size_t p = 0; p + 1 < w.size(); ++p) {
    std::string s = w;
    std::swap(s[p], s[p + 1]);
    all.push_back({0, p, 0, s});
  }
  for (std::size_t p = 0; p <= w.size(); ++p) {
    for (char c : inv) all.push_back({1, p, c, w.substr(0, p) + c + w.substr(p)});
  }
  for (std::size_t p = 0; w.size() > 1 && p < w.size(); ++p) all.push_back({2, p, 0, w.substr(0, p) + w.substr(p + 1)});
  for (std::size_t p = 0; p < w.size(); ++p) {
    for (char c : inv) {
      std::string s = w;
      s[p] = c;
      all.push_back({3, p, c, s});
    }
  }
  std::vector<RefEdit> out;
  std::set<std::string> seen{w};
  for (auto& e : all) {
    const auto toks = tokenize(e.result);
    if (toks.size() != 1 || toks[0].text != e.result) continue;
    if (seen.insert(e.result).second) out.push_back(e);
  }
  return out;
}

TEST(CharAttackTest, EnumerationMatchesReference) {
  for (std::string w : {"a", "ab", "aa", "haus", "abschaum", "x9", "."}) {
    const auto got = enumerate_char_edits(w);
    const auto want = reference_edits(w);
    ASSERT_EQ(got.size(), want.size()) << w;
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_EQ(static_cast<int>(got[i].first.kind), want[i].kind);
      EXPECT_EQ(got[i].first.position, want[i].pos);
      EXPECT_EQ(got[i].second, want[i].result);
    }
  }
  // A single character token can be swapped or deleted into nothing valid.
  for (const auto& [op, s] : enumerate_char_edits("a")) {
    EXPECT_NE(op.kind, CharEditKind::kDelete);
    EXPECT_NE(op.kind, CharEditKind::kSwap);
  }
  // Inserting "a" before or after "a" gives the same string.
  EXPECT_EQ(enumerate_char_edits("a").size(), 2u * 36u - 1u + 35u);
}

TEST(CharAttackTest, MatchesExhaustiveGreedyReference) {
  const auto& m = desk().model;
  const AttackConfig c;
  for (const auto& doc : sample(10)) {
    // Reference: plain greedy search, no budget, no cache.
    const auto p0 = m.predict(doc);
    const std::size_t target = argmax(p0);
    Document cur = doc;
    double conf = p0[target];
    std::set<std::vector<std::size_t>> distinct_inputs{m.encode(doc)};
    std::vector<std::pair<std::size_t, std::string>> steps;
    const auto order = rank_tokens(m, doc);
    bool flipped = false;
    for (std::size_t r = 0; r < std::min(c.max_tokens_attacked, order.size()) && !flipped; ++r) {
      const std::size_t pos = order[r];
      for (std::size_t e = 0; e < c.max_char_edits_per_token; ++e) {
        double best = 2.0;
        Document best_doc;
        std::vector<double> best_p;
        for (const auto& ref : reference_edits(cur.tokens[pos].text)) {
          Document trial = replace_token(cur, pos, ref.result);
          distinct_inputs.insert(m.encode(trial));
          const auto p = m.predict(trial);
          if (p[target] < best) {
            best = p[target];
            best_doc = trial;
            best_p = p;
          }
        }
        if (!(best < conf)) break;
        cur = best_doc;
        conf = best;
        steps.emplace_back(pos, cur.tokens[pos].text);
        flipped = argmax(best_p) != target;
        if (flipped) break;
      }
    }
    const auto r = char_attack(m, doc, c);
    EXPECT_EQ(r.perturbed.raw, cur.raw);
    EXPECT_EQ(r.success, flipped);
    ASSERT_EQ(r.edits.size(), steps.size());
    Document replay = doc;
    for (std::size_t i = 0; i < steps.size(); ++i) {
      replay = apply_edit(replay, r.edits[i]);
      EXPECT_EQ(std::get<CharEdit>(r.edits[i]).token_index, steps[i].first);
      EXPECT_EQ(replay.tokens[steps[i].first].text, steps[i].second);
    }
    // Each distinct model input is paid for once.
    EXPECT_EQ(r.queries, distinct_inputs.size());
  }
}

}  // namespace
}  // namespace advtext
