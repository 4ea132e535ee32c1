// Copyright 2026 The rlq Authors
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

// rlq: command-line harness for the random-parameter LQ experiments.
//
//   rlq qlearn   --preset eg1 [--seeds 1-20] [--steps 2000] [--out f.csv]
//   rlq riccati  --preset eg1 [--set discount=2.4]
//   rlq critical --preset eg1 [--set experiment.bracket=[1,4]]
//   rlq simulate --preset eg3 [--out f.csv]
//
// Exit codes: 0 success, 2 usage/config error, 3 ill-posed, 4 inconclusive.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rlq/config.hpp"
#include "rlq/experiments.hpp"

namespace {

struct CommonOptions {
  std::string preset;
  std::string model;
  std::string seeds;
  std::size_t steps = 0;
  std::string out;
  std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  auto* preset = cmd->add_option("--preset", o.preset, "Built-in experiment: eg1, eg2 or eg3");
  auto* model = cmd->add_option("--model", o.model, "Model/experiment JSON file")
                    ->check(CLI::ExistingFile);
  preset->excludes(model);
  cmd->add_option("--seeds", o.seeds, "Seed list, e.g. 1-20 or 1,5,9");
  cmd->add_option("--steps", o.steps, "Number of time steps");
  cmd->add_option("--out", o.out, "Output file (default: stdout, or $RLQ_OUT_DIR)");
  cmd->add_option("--set", o.sets, "Override a config field: key=value (repeatable)");
}

rlq::config::ExperimentConfig load(const CommonOptions& o) {
  std::vector<std::string> overrides = o.sets;
  if (!o.seeds.empty()) overrides.push_back("experiment.seeds=\"" + o.seeds + "\"");
  if (o.steps > 0) overrides.push_back("experiment.steps=" + std::to_string(o.steps));
  std::optional<std::string> preset, model;
  if (!o.preset.empty()) preset = o.preset;
  if (!o.model.empty()) model = o.model;
  return rlq::config::load_config(preset, model, overrides);
}

int emit(const rlq::experiments::CommandResult& r, const CommonOptions& o,
         const std::string& default_name) {
  for (const auto& m : r.messages) std::cerr << "rlq: " << m << '\n';
  std::string path = o.out;
  if (path.empty()) {
    if (const char* dir = std::getenv(rlq::config::kOutDirEnv); dir && *dir) {
      path = (std::filesystem::path(dir) / default_name).string();
    }
  }
  if (path.empty()) {
    std::cout << r.output;
  } else {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
      std::cerr << "rlq: cannot write " << path << '\n';
      return rlq::experiments::kUsage;
    }
    f << r.output;
  }
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Q-learning and Riccati tools for LQ control with random parameters"};
  app.require_subcommand(1);

  CommonOptions opts;
  struct Command {
    const char* name;
    const char* help;
    const char* ext;
    rlq::experiments::CommandResult (*run)(const rlq::config::ExperimentConfig&);
  };
  const std::vector<Command> commands{
      {"qlearn", "Q-learning error curves |Q_t - Q*|_1 (CSV)", "csv", rlq::experiments::cmd_qlearn},
      {"riccati", "Solve the Riccati fixed point and report well-posedness (JSON)", "json",
       rlq::experiments::cmd_riccati},
      {"critical", "Bisect for the critical discount rate (JSON)", "json",
       rlq::experiments::cmd_critical},
      {"simulate", "Closed-loop trajectories under zero/adaptive/fixed policies (CSV)", "csv",
       rlq::experiments::cmd_simulate},
  };
  std::vector<CLI::App*> subs;
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c.name, c.help);
    add_common(sub, opts);
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return rlq::experiments::kUsage;
  }

  for (std::size_t i = 0; i < commands.size(); ++i) {
    if (!subs[i]->parsed()) continue;
    try {
      const auto cfg = load(opts);
      const auto result = commands[i].run(cfg);
      return emit(result, opts, std::string(commands[i].name) + "_" + cfg.name() + "." +
                                    commands[i].ext);
    } catch (const rlq::ConfigError& e) {
      std::cerr << "rlq: " << e.what() << '\n';
      return rlq::experiments::kUsage;
    } catch (const rlq::config::Json::exception& e) {
      std::cerr << "rlq: bad configuration value: " << e.what() << '\n';
      return rlq::experiments::kUsage;
    } catch (const rlq::Error& e) {
      std::cerr << "rlq: " << e.what() << '\n';
      return 1;
    }
  }
  return rlq::experiments::kUsage;
}
