/*
 * Copyright 2026 The featrecon Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Command-line entry point: `featrecon run ...` and `featrecon gen ...`.

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "featrecon/error.h"
#include "featrecon/report.h"
#include "featrecon/synthetic.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitData = 2;
constexpr int kExitRuntime = 3;

std::string env_name(const std::string& flag) {
  std::string out = "INHR_";
  for (const char c : flag.substr(2)) {
    out += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return out;
}

template <typename T>
CLI::Option* add(CLI::App* app, const std::string& flag, T& target,
                 const std::string& help) {
  return app->add_option(flag, target, help)->envname(env_name(flag))->capture_default_str();
}

CLI::Option* add_switch(CLI::App* app, const std::string& flag, bool& target,
                        const std::string& help) {
  return app->add_flag(flag, target, help)->envname(env_name(flag));
}

// Value of `--config` after the subcommand, else INHR_CONFIG.
std::optional<std::string> config_path(const std::vector<std::string>& args, std::size_t from) {
  for (std::size_t i = from; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  if (const char* env = std::getenv("INHR_CONFIG"); env != nullptr && *env != '\0') return env;
  return std::nullopt;
}

// Turns the keys of a TOML/INI file into `--key=value` arguments of `sub`.
// Keys may sit at top level or under a section named after the subcommand.
std::vector<std::string> config_arguments(const std::string& path, const CLI::App& sub) {
  std::vector<std::string> out;
  for (const auto& item : CLI::ConfigTOML().from_file(path)) {
    if (item.name.empty()) continue;
    if (!item.parents.empty() &&
        (item.parents.size() != 1 || item.parents.front() != sub.get_name())) {
      throw CLI::ConversionError("config key '" + item.fullname() + "' is not in section [" +
                                 sub.get_name() + "]");
    }
    const std::string flag = "--" + item.name;
    if (item.name == "config" || sub.get_option_no_throw(flag) == nullptr) {
      throw CLI::ConversionError("unknown config key '" + item.name + "' in " + path);
    }
    if (item.inputs.size() != 1) {
      throw CLI::ConversionError("config key '" + item.name + "' needs exactly one value");
    }
    out.push_back(flag + "=" + item.inputs.front());
  }
  return out;
}

int exit_code_for(const featrecon::Error& e) {
  switch (featrecon::error_class(e.code())) {
    case featrecon::ErrorClass::kConfig: return kExitConfig;
    case featrecon::ErrorClass::kData: return kExitData;
    case featrecon::ErrorClass::kRuntime: return kExitRuntime;
  }
  return kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feature-space reconstruction with cooperating Q-learning agents"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  featrecon::RunConfig run_config;
  auto& engine = run_config.engine;
  std::string task = "classification";
  std::string model = "rf";
  std::string metric;
  std::string interaction = "h";

  CLI::App* run = app.add_subcommand("run", "Reconstruct the feature space of a CSV table");
  std::string config_file;
  add(run, "--config", config_file, "Read options from a TOML/INI file; flags take precedence");
  add(run, "--data", run_config.data_path, "Input CSV path");
  add(run, "--target", run_config.target, "Target column name")->required();
  add(run, "--task", task, "classification or regression");
  add(run, "--episodes", engine.episodes, "Episodes");
  add(run, "--steps", engine.steps_per_episode, "Steps per episode");
  add(run, "--seed", engine.seed, "Random seed");
  add(run, "--max-order", engine.max_order, "Maximum feature order");
  add(run, "--enlarge-factor", engine.enlargement_factor, "Feature-set size cap factor");
  add(run, "--cat-threshold", engine.cat_threshold,
      "Numeric columns with at most this many distinct values are categorical");
  add(run, "--model", model, "Downstream model: rf, knn or ridge");
  add(run, "--metric", metric, "f1 or rae (defaults by task)");
  add(run, "--interaction", interaction, "Interaction term: h, mi, pearson or cosine");
  add(run, "--n-trees", engine.model.forest.n_trees, "Forest size");
  add(run, "--max-depth", engine.model.forest.max_depth, "Tree depth limit");
  add(run, "--min-leaf", engine.model.forest.min_leaf, "Minimum rows per leaf");
  add(run, "--knn-k", engine.model.knn_k, "Neighbours for knn");
  add(run, "--ridge-lambda", engine.model.ridge_lambda, "Ridge penalty");
  add(run, "--sample-cap", engine.sample_cap, "Rows sampled for partial dependence");
  add(run, "--mi-bins", engine.mi_bins, "Bins for mutual information");
  add(run, "--u-invalid", engine.u_invalid, "Reward for an invalid feature choice");
  add(run, "--u-valid", engine.u_valid, "Reward for a valid feature choice");
  add(run, "--h-power", engine.h_power, "Exponent on the interaction term");
  add_switch(run, "--restart-from-original", engine.restart_from_original,
             "Start each episode from the original features");
  add_switch(run, "--freeze-agents", engine.freeze_agents, "Do not train the agents");
  add(run, "--epsilon-start", engine.epsilon_start, "Initial exploration rate");
  add(run, "--epsilon-end", engine.epsilon_end, "Final exploration rate");
  add(run, "--epsilon-decay", engine.epsilon_decay_fraction,
      "Share of steps over which exploration decays");
  add(run, "--hidden", engine.agent.hidden, "Hidden width of the Q networks");
  add(run, "--lr", engine.agent.learning_rate, "Adam learning rate");
  add(run, "--gamma", engine.agent.gamma, "Discount factor");
  add(run, "--replay", engine.agent.replay_capacity, "Replay capacity");
  add(run, "--batch", engine.agent.batch_size, "Training batch size");
  add(run, "--target-sync", engine.agent.target_sync_interval,
      "Target network sync interval (0 disables)");
  add(run, "--verbosity", run_config.verbosity, "0: summary only, 1: with trace");
  add(run, "--top-k", run_config.top_k, "Features listed by importance");
  add(run, "--out", run_config.out_path, "Report path (stdout when empty)");
  add(run, "--checkpoint", run_config.checkpoint_path, "Save agents here after the run");
  add(run, "--resume", run_config.resume_path, "Load agents from this checkpoint");
  run->get_option("--data")->required();

  std::string kind = "product_signal";
  std::size_t rows = 500;
  std::size_t noise = 5;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  CLI::App* gen = app.add_subcommand("gen", "Write a synthetic CSV dataset");
  add(gen, "--kind", kind, "product_signal, additive_signal or group_signal");
  add(gen, "--rows", rows, "Number of rows (>= 50)");
  add(gen, "--noise", noise, "Number of pure-noise columns");
  add(gen, "--seed", gen_seed, "Random seed");
  add(gen, "--out", gen_out, "Output CSV path (stdout when empty)");

  try {
    std::vector<std::string> args(argv, argv + argc);
    if (args.size() > 1 && args[1] == run->get_name()) {
      if (const auto path = config_path(args, 2)) {
        const auto injected = config_arguments(featrecon::expand_path(*path), *run);
        args.insert(args.begin() + 2, injected.begin(), injected.end());
      }
    }
    std::reverse(args.begin(), args.end());
    args.pop_back();
    app.parse(std::move(args));
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*run) {
      run_config.task = featrecon::parse_task(task);
      engine.model.kind = featrecon::parse_model_kind(model);
      if (!metric.empty()) engine.metric = featrecon::parse_metric(metric);
      engine.interaction_method = featrecon::parse_interaction_method(interaction);
      featrecon::run(run_config);
    } else {
      const auto synthetic_kind = featrecon::parse_synthetic_kind(kind);
      if (gen_out.empty()) {
        std::cout << featrecon::synthetic_csv(synthetic_kind, rows, noise, gen_seed);
      } else {
        featrecon::write_synthetic(featrecon::expand_path(gen_out), synthetic_kind, rows,
                                   noise, gen_seed);
      }
    }
  } catch (const featrecon::Error& e) {
    std::cerr << "featrecon: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "featrecon: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}
