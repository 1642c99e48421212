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

#include "advtext/model.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace advtext {
namespace {

using testing::desk;
using testing::tiny_dataset;
using testing::tiny_model;

TEST(VocabularyTest, SpecialTokensFirstThenSorted) {
  const Vocabulary v({"zebra", "affe", "affe", "[UNK]"});
  ASSERT_EQ(v.size(), 4u);
  EXPECT_EQ(v.token(Vocabulary::kUnk), "[UNK]");
  EXPECT_EQ(v.token(Vocabulary::kMask), "[MASK]");
  EXPECT_EQ(v.token(2), "affe");
  EXPECT_EQ(v.token(3), "zebra");
  EXPECT_EQ(v.id("nope"), Vocabulary::kUnk);
}

TEST(ToyModelTest, ConfigValidation) {
  ToyModelConfig c;
  c.embed_dim = 3;
  EXPECT_THROW(validate(c), Error);
  c = ToyModelConfig{};
  c.num_classes = 1;
  EXPECT_THROW(validate(c), Error);
  c = ToyModelConfig{};
  c.learning_rate = 0.0;
  EXPECT_THROW(validate(c), Error);
}

TEST(ToyModelTest, PredictIsADistribution) {
  const ToyModel m = tiny_model();
  for (const auto& d : tiny_dataset()) {
    const auto p = m.predict(d);
    ASSERT_EQ(p.size(), 2u);
    EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-6);
    for (double x : p) EXPECT_GE(x, 0.0);
  }
}

TEST(ToyModelTest, EmptyDocumentRefused) {
  const ToyModel m = tiny_model();
  const Document empty = make_document("   ");
  for (auto call : {+[](const ToyModel& m, const Document& d) { m.predict(d); },
                    +[](const ToyModel& m, const Document& d) { m.attention_importance(d); },
                    +[](const ToyModel& m, const Document& d) { m.doc_embedding(d); }}) {
    try {
      call(m, empty);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kEmptyInput);
    }
  }
}

TEST(ToyModelTest, AllUnknownDocumentStillPredicts) {
  const ToyModel m = tiny_model();
  const auto p = m.predict(make_document("qqq zzz xxx"));
  EXPECT_NEAR(p[0] + p[1], 1.0, 1e-6);
}

TEST(ToyModelTest, PredictIgnoresMetadata) {
  const ToyModel m = tiny_model();
  const Document a = make_document("der gut weg", 0);
  const Document b = make_document("  DER   gut weg ", std::nullopt);
  EXPECT_EQ(m.predict(a), m.predict(b));
  EXPECT_EQ(m.input_key(a), m.input_key(b));
}

TEST(ToyModelTest, AttentionImportanceColumnSums) {
  const ToyModel m = tiny_model();
  EXPECT_EQ(m.attention_importance(make_document("gut")), std::vector<double>{1.0});
  const Document d = make_document("der haus gut baum weg das die");
  const auto imp = m.attention_importance(d);
  ASSERT_EQ(imp.size(), d.tokens.size());
  EXPECT_NEAR(std::accumulate(imp.begin(), imp.end(), 0.0), 7.0, 1e-4);
  const ForwardPass f = m.forward(m.encode(d));
  for (std::size_t r = 0; r < f.attn.rows; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < f.attn.cols; ++c) {
      EXPECT_GE(f.attn(r, c), 0.0);
      s += f.attn(r, c);
    }
    EXPECT_NEAR(s, 1.0, 1e-6);
  }
}

// Exhaustive ranking: every admissible vocabulary row scored against the
// masked contextual vector, fully sorted.
std::vector<std::string> brute_force_candidates(const ToyModel& m, const Document& doc, std::size_t pos,
                                                std::size_t k) {
  const ForwardPass f = m.forward(m.encode(doc), pos);
  std::vector<std::pair<double, std::size_t>> all;
  for (std::size_t id = 0; id < m.vocab().size(); ++id) {
    const std::string& w = m.vocab().token(id);
    if (id == Vocabulary::kUnk || id == Vocabulary::kMask || w == doc.tokens[pos].text) continue;
    double dot = 0, aa = 0, bb = 0;
    for (std::size_t c = 0; c < m.config().embed_dim; ++c) {
      const double a = f.hidden(pos, c), b = m.params().embeddings(id, c);
      dot += a * b;
      aa += a * a;
      bb += b * b;
    }
    all.emplace_back(dot / std::sqrt(aa * bb), id);
  }
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < std::min(k, all.size()); ++i) out.push_back(m.vocab().token(all[i].second));
  return out;
}

TEST(ToyModelTest, MaskCandidatesMatchExhaustiveRanking) {
  const auto& dk = desk();
  for (std::size_t i = 0; i < 20; ++i) {
    const Document& doc = dk.corpus.test[i];
    for (std::size_t pos = 0; pos < doc.tokens.size(); pos += 3) {
      EXPECT_EQ(dk.model.mask_candidates(doc, pos, 10), brute_force_candidates(dk.model, doc, pos, 10));
    }
  }
}

TEST(ToyModelTest, MaskCandidatesContract) {
  const ToyModel m = tiny_model();
  const Document d = make_document("der gut weg");
  const auto one = m.mask_candidates(d, 1, 1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_NE(one[0], "gut");
  EXPECT_NE(one[0], "[UNK]");
  EXPECT_NE(one[0], "[MASK]");
  const auto all = m.mask_candidates(d, 1, 1000);
  EXPECT_EQ(all.size(), m.vocab().size() - 3);
  EXPECT_EQ(std::count(all.begin(), all.end(), "gut"), 0);
  EXPECT_THROW(m.mask_candidates(d, 3, 1), Error);
  EXPECT_THROW(m.mask_candidates(d, 0, 0), Error);
}

TEST(ToyModelTest, DocEmbedding) {
  const ToyModel m = tiny_model();
  const Document one = make_document("gut");
  const ForwardPass f = m.forward(m.encode(one));
  const auto e = m.doc_embedding(one);
  for (std::size_t c = 0; c < e.size(); ++c) EXPECT_DOUBLE_EQ(e[c], f.hidden(0, c));
  const auto& dk = desk();
  const Document& doc = dk.corpus.test[0];
  const auto de = dk.model.doc_embedding(doc);
  EXPECT_NEAR(cosine(de, de), 1.0, 1e-6);
  const Document changed = replace_token(doc, 0, doc.tokens[0].text == "abschaum" ? "gesindel" : "abschaum");
  EXPECT_LT(cosine(de, dk.model.doc_embedding(changed)), 1.0);
}

TEST(ToyModelTest, GradientCheckTinyModel) {
  ToyModelConfig c;
  c.embed_dim = 8;
  c.seed = 21;
  ToyModel m(Vocabulary::from_documents(tiny_dataset()), c);
  auto docs = tiny_dataset();
  docs.resize(6);
  const auto check = testing::gradient_check(m, docs, 40, 5);
  EXPECT_EQ(check.checked, 40u);
  EXPECT_LE(check.max_relative_error, 1e-3);
}

TEST(TrainingTest, MemorizesSingleExample) {
  ToyModelConfig c;
  c.epochs = 50;
  const std::vector<Document> one = {make_document("ganz allein hier", 1)};
  const ToyModel m = train_toy_classifier(one, c);
  EXPECT_EQ(accuracy(m, one), 1.0);
}

TEST(TrainingTest, Deterministic) {
  ToyModelConfig c;
  c.embed_dim = 8;
  c.epochs = 5;
  const ToyModel a = train_toy_classifier(tiny_dataset(), c);
  const ToyModel b = train_toy_classifier(tiny_dataset(), c);
  EXPECT_EQ(a.params(), b.params());
}

TEST(TrainingTest, Errors) {
  ToyModelConfig c;
  EXPECT_THROW(train_toy_classifier(std::vector<Document>{}, c), Error);
  EXPECT_THROW(train_toy_classifier(std::vector<Document>{make_document("a b", 2)}, c), Error);
  EXPECT_THROW(train_toy_classifier(std::vector<Document>{make_document("a b")}, c), Error);
}

TEST(TrainingTest, DeskLossDecreasesOverFirstEpochs) {
  const auto& dk = desk();
  ToyModelConfig c = dk.config.model;
  c.epochs = 5;
  TrainingHistory h;
  const ToyModel m = train_toy_classifier(dk.corpus.train, c, &h);
  ASSERT_EQ(h.epoch_loss.size(), 5u);
  const ToyModel fresh(m.vocab(), c);
  std::vector<std::vector<std::size_t>> ids;
  std::vector<std::size_t> labels;
  for (const auto& d : dk.corpus.train) {
    ids.push_back(fresh.encode(d));
    labels.push_back(*d.label);
  }
  EXPECT_LT(h.epoch_loss[0], fresh.loss(ids, labels));
  for (std::size_t e = 1; e < 5; ++e) EXPECT_LT(h.epoch_loss[e], h.epoch_loss[e - 1]);
}

TEST(TrainingTest, DeskAccuracy) { EXPECT_GE(accuracy(desk().model, desk().corpus.test), 0.90); }

TEST(CountingClassifierTest, CountsPredictOnly) {
  const ToyModel m = tiny_model();
  CountingClassifier c(m);
  const Document d = make_document("der gut weg");
  c.predict(d);
  c.predict(d);
  c.attention_importance(d);
  c.doc_embedding(d);
  EXPECT_EQ(c.calls(), 2u);
  EXPECT_EQ(c.predict(d), m.predict(d));
}

TEST(PosTaggerTest, LookupSuffixDefault) {
  PosLexicon lex;
  lex.entries["laufen"] = PosTag::kVerb;
  lex.suffix_rules = {{"ung", PosTag::kNoun}};
  EXPECT_EQ(pos_tag(lex, "laufen"), PosTag::kVerb);
  EXPECT_EQ(pos_tag(lex, "meinung"), PosTag::kNoun);
  EXPECT_EQ(pos_tag(lex, "zzzz"), PosTag::kOther);
  EXPECT_EQ(pos_tag(lex, "ung"), PosTag::kOther);
  EXPECT_EQ(parse_pos_tag("ADJ"), PosTag::kAdj);
  EXPECT_EQ(parse_pos_tag("adj"), std::nullopt);
}

}  // namespace
}  // namespace advtext
