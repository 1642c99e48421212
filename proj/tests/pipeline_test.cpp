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

#include "advtext/pipeline.hpp"

#include <filesystem>
#include <functional>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <unistd.h>

namespace advtext {
namespace {

namespace fs = std::filesystem;

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no advtext::Error thrown";
  return ErrorKind::kIo;
}

TEST(ConfigTest, DefaultsResolve) {
  const RunConfig rc = resolve_config(json::object());
  EXPECT_EQ(rc.seed, 7u);
  EXPECT_EQ(rc.attack, AttackKind::kCharacter);
  EXPECT_EQ(rc.defense, DefenseKind::kNone);
  EXPECT_EQ(rc.data.train_size, 600u);
  EXPECT_EQ(rc.data.validation_size, 200u);
  EXPECT_EQ(rc.data.test_size, 200u);
  EXPECT_DOUBLE_EQ(rc.attack_config.cosine_threshold, 0.9363);
  EXPECT_DOUBLE_EQ(rc.thresholds.accept_low, 0.7);
  EXPECT_DOUBLE_EQ(rc.thresholds.accept_high_exclusive, 1.0);
  EXPECT_EQ(rc.resolved, default_run_config());
}

TEST(ConfigTest, UnknownKeysAndWrongTypesRejected) {
  EXPECT_EQ(kind_of([] { resolve_config(json{{"sed", 1}}); }), ErrorKind::kConfiguration);
  EXPECT_EQ(kind_of([] { resolve_config(json{{"model", {{"embed_dimension", 8}}}}); }), ErrorKind::kConfiguration);
  EXPECT_EQ(kind_of([] { resolve_config(json{{"model", {{"epochs", "ten"}}}}); }), ErrorKind::kConfiguration);
  EXPECT_EQ(kind_of([] { resolve_config(json{{"model", {{"epochs", -3}}}}); }), ErrorKind::kConfiguration);
  EXPECT_EQ(kind_of([] { resolve_config(json{{"attack", {{"kind", "word"}}}}); }), ErrorKind::kConfiguration);
  EXPECT_EQ(kind_of([] { resolve_config(json{{"attack", {{"cosine_threshold", 0}}}}); }),
            ErrorKind::kConfiguration);
  EXPECT_EQ(kind_of([] { resolve_config(json{{"attack", {{"split", "dev"}}}}); }), ErrorKind::kConfiguration);
  EXPECT_EQ(kind_of([] { resolve_config(json::array()); }), ErrorKind::kConfiguration);
  // Integers are accepted where reals are expected.
  EXPECT_DOUBLE_EQ(resolve_config(json{{"model", {{"learning_rate", 1}}}}).model.learning_rate, 1.0);
}

TEST(ConfigTest, OverlappingKeywordListsRejected) {
  json user{{"data", {{"class_keywords", {{"gut", "toll"}, {"schlecht", "gut"}}}}}};
  EXPECT_EQ(kind_of([&] { resolve_config(user); }), ErrorKind::kConfiguration);
}

TEST(ConfigTest, CommandLineOverridesWin) {
  CliOverrides o;
  o.seed = 99;
  o.out = "/tmp/x";
  o.attack = "baseline";
  o.defense = "explicit";
  const RunConfig rc = resolve_config(json{{"seed", 3}, {"attack", {{"kind", "constrained"}}}}, o);
  EXPECT_EQ(rc.seed, 99u);
  EXPECT_EQ(rc.output_dir, fs::path("/tmp/x"));
  EXPECT_EQ(rc.attack, AttackKind::kBaselineWord);
  EXPECT_EQ(rc.defense, DefenseKind::kExplicit);
  EXPECT_EQ(rc.campaign_dir(), fs::path("/tmp/x/attacks/baseline-explicit"));
  o.defense = "magic";
  EXPECT_EQ(kind_of([&] { resolve_config(json::object(), o); }), ErrorKind::kConfiguration);
}

TEST(ConfigTest, SectionHashesTrackTheirInputs) {
  const RunConfig a = resolve_config(json::object());
  const RunConfig b = resolve_config(json{{"model", {{"epochs", 5}}}});
  EXPECT_EQ(a.data_hash(), b.data_hash());
  EXPECT_NE(a.model_hash(), b.model_hash());
  EXPECT_EQ(a.explicit_hash(), b.explicit_hash());
  const RunConfig c = resolve_config(json{{"attack", {{"kind", "baseline"}}}});
  EXPECT_EQ(a.abstain_hash(), c.abstain_hash());
  EXPECT_NE(a.campaign_hash(), c.campaign_hash());
  EXPECT_NE(a.data_hash(), resolve_config(json{{"seed", 8}}).data_hash());
}

class PipelineTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("advtext_pipeline_test_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  RunConfig small(json extra = json::object()) const {
    json user{{"output_dir", dir_.string()},
              {"data", {{"train_size", 120}, {"validation_size", 40}, {"test_size", 40}}},
              {"model", {{"epochs", 60}}},
              {"defense", {{"explicit", {{"pairs", 500}, {"epochs", 3}}}}}};
    user.merge_patch(extra);
    return resolve_config(user);
  }

  fs::path dir_;
};

TEST_F(PipelineTest, GenDataSizesBalanceAndDeterminism) {
  RunConfig rc = resolve_config(json{{"output_dir", dir_.string()}});
  std::ostringstream log;
  cmd_gen_data(rc, log);
  const auto train = load_split(rc, "train");
  EXPECT_EQ(train.size(), 600u);
  EXPECT_EQ(load_split(rc, "validation").size(), 200u);
  EXPECT_EQ(load_split(rc, "test").size(), 200u);
  std::size_t ones = 0;
  for (const auto& d : train) ones += *d.label == 1u;
  const double share = static_cast<double>(ones) / static_cast<double>(train.size());
  EXPECT_GE(share, 0.45);
  EXPECT_LE(share, 0.55);
  const std::string first = read_file(rc.split_path("train"));
  cmd_gen_data(rc, log);
  EXPECT_EQ(read_file(rc.split_path("train")), first);
  EXPECT_TRUE(fs::exists(rc.data_dir() / "gen-data.config.json"));
  const PosLexicon lex = load_run_lexicon(rc);
  EXPECT_FALSE(lex.entries.empty());
}

TEST_F(PipelineTest, StaleArtifactsAreDetected) {
  std::ostringstream log;
  RunConfig rc = small();
  cmd_gen_data(rc, log);
  cmd_train(rc, log);
  EXPECT_NO_THROW(load_undefended(rc));
  // Same output directory, different model section: the checkpoint is stale.
  const RunConfig changed = small(json{{"model", {{"epochs", 61}}}});
  EXPECT_EQ(kind_of([&] { load_undefended(changed); }), ErrorKind::kMismatch);
  const RunConfig reseeded = small(json{{"seed", 8}});
  EXPECT_EQ(kind_of([&] { load_split(reseeded, "train"); }), ErrorKind::kMismatch);
}

TEST_F(PipelineTest, MissingCheckpoint) {
  std::ostringstream log;
  const RunConfig rc = small();
  cmd_gen_data(rc, log);
  EXPECT_EQ(kind_of([&] { cmd_attack(rc, log); }), ErrorKind::kFileNotFound);
}

TEST_F(PipelineTest, AttackDefendReport) {
  std::ostringstream log;
  RunConfig rc = small();
  cmd_gen_data(rc, log);
  cmd_train(rc, log);
  const json metrics = read_json(rc.output_dir / "model" / "train_metrics.json");
  EXPECT_GE(metrics["test_accuracy"].get<double>(), 0.8);

  for (const char* attack : {"baseline", "constrained", "char"}) {
    rc = small(json{{"attack", {{"kind", attack}}}});
    const CampaignFiles files = cmd_attack(rc, log);
    const std::string stored = read_file(files.report);
    EXPECT_EQ(cmd_report(rc, log), stored);
    // The success rate is a plain recount of the JSONL.
    const ParsedCampaign parsed = parse_jsonl(read_file(files.jsonl));
    std::size_t ok = 0;
    for (const auto& r : parsed.records) ok += r.success;
    EXPECT_EQ(read_json(files.report)["aggregates"]["success_rate"].get<double>(),
              static_cast<double>(ok) / static_cast<double>(parsed.records.size()));
    EXPECT_TRUE(fs::exists(rc.campaign_dir() / "length_queries.csv"));
  }

  rc = small(json{{"defense", {{"kind", "explicit"}}}});
  cmd_defend(rc, log);
  EXPECT_TRUE(fs::exists(rc.explicit_dir() / "index.json"));
  const CampaignFiles ex = cmd_attack(rc, log);
  EXPECT_EQ(read_json(ex.report)["defense"], "explicit");

  rc = small(json{{"defense", {{"kind", "abstain"}, {"abstain", {{"epochs", 15}}}}}});
  cmd_defend(rc, log);
  const json am = read_json(rc.abstain_dir() / "metrics.json");
  EXPECT_GT(am["adversarial_examples"].get<std::size_t>(), 0u);
  const DatasetFile mix = load_dataset(rc.abstain_dir() / "abstain_dataset.tsv", rc.abstain_hash());
  EXPECT_EQ(mix.origins.size(), mix.documents.size());
  const ParsedCampaign gen = parse_jsonl(read_file(rc.abstain_dir() / "generation.jsonl"));
  std::size_t gen_ok = 0;
  for (const auto& r : gen.records) gen_ok += r.success;
  EXPECT_EQ(gen_ok, am["adversarial_examples"].get<std::size_t>());
  const CampaignFiles ab = cmd_attack(rc, log);
  EXPECT_TRUE(read_json(ab.report)["aggregates"].contains("abstain_rate"));

  // Tampering with the stored report is caught.
  write_file_atomic(ab.report, read_file(ab.report) + " ");
  EXPECT_EQ(kind_of([&] { cmd_report(rc, log); }), ErrorKind::kMismatch);
  rc = small(json{{"defense", {{"kind", "none"}}}});
  EXPECT_EQ(kind_of([&] { cmd_defend(rc, log); }), ErrorKind::kConfiguration);
}

TEST_F(PipelineTest, ExternalDatasetWithoutMetadata) {
  fs::create_directories(dir_);
  write_file_atomic(dir_ / "ext.tsv", "text\tlabel\nDas ist gut\t0\nDas ist mies\t1\n");
  const RunConfig rc = small(json{{"paths", {{"train", (dir_ / "ext.tsv").string()}}}});
  const auto docs = load_split(rc, "train");
  ASSERT_EQ(docs.size(), 2u);
  EXPECT_EQ(docs[1].label, 1u);
}

TEST_F(PipelineTest, ConfigFileErrors) {
  fs::create_directories(dir_);
  write_file_atomic(dir_ / "bad.json", "{ not json");
  EXPECT_EQ(kind_of([&] { load_run_config(dir_ / "bad.json"); }), ErrorKind::kConfiguration);
  EXPECT_EQ(kind_of([&] { load_run_config(dir_ / "missing.json"); }), ErrorKind::kFileNotFound);
}

}  // namespace
}  // namespace advtext
