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

// advtext command-line front end: gen-data, train, attack, defend, report.

#include <cstdint>
#include <exception>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "advtext/errors.hpp"
#include "advtext/pipeline.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> attack;
  std::optional<std::string> defense;
};

void add_flags(CLI::App* cmd, Flags& flags) {
  cmd->add_option("--config", flags.config, "Run configuration (JSON)")->required();
  cmd->add_option("--seed", flags.seed, "Override the global seed");
  cmd->add_option("--out", flags.out, "Override the output directory");
  cmd->add_option("--attack", flags.attack, "Override attack.kind (baseline, constrained, char)");
  cmd->add_option("--defense", flags.defense, "Override defense.kind (none, explicit, abstain)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"White-box adversarial attacks and character-level defenses for text classifiers"};
  app.require_subcommand(1);
  Flags flags;

  const std::map<std::string, std::pair<std::string, std::function<void(const advtext::RunConfig&)>>> commands = {
      {"gen-data", {"Generate the synthetic train/validation/test splits",
                    [](const advtext::RunConfig& rc) { advtext::cmd_gen_data(rc); }}},
      {"train", {"Train the toy self-attention classifier",
                 [](const advtext::RunConfig& rc) { advtext::cmd_train(rc); }}},
      {"attack", {"Run an attack campaign and write records and report",
                  [](const advtext::RunConfig& rc) { advtext::cmd_attack(rc); }}},
      {"defend", {"Build the explicit or abstain defense",
                  [](const advtext::RunConfig& rc) { advtext::cmd_defend(rc); }}},
      {"report", {"Recompute a campaign report and check it against the stored one",
                  [](const advtext::RunConfig& rc) { advtext::cmd_report(rc); }}},
  };
  for (const auto& [name, entry] : commands) add_flags(app.add_subcommand(name, entry.first), flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    const advtext::CliOverrides overrides{flags.seed, flags.out, flags.attack, flags.defense};
    const advtext::RunConfig rc = advtext::load_run_config(flags.config, overrides);
    for (const auto* sub : app.get_subcommands()) commands.at(sub->get_name()).second(rc);
  } catch (const advtext::Error& e) {
    std::cerr << "advtext: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "advtext: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
