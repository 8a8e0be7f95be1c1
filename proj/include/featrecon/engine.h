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

// The reconstruction loop: three cooperating agents pick an operator and two
// features, the crossed feature is validated, scored and added, and the set is
// pruned back to its size envelope.

#ifndef FEATRECON_ENGINE_H_
#define FEATRECON_ENGINE_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "featrecon/agents.h"
#include "featrecon/interaction.h"
#include "featrecon/learner.h"
#include "featrecon/tabular.h"

namespace featrecon {

struct EngineConfig {
  int episodes = 10;
  int steps_per_episode = 15;
  int max_order = 4;
  double enlargement_factor = 2.0;
  int cat_threshold = kDefaultCatThreshold;
  ModelSpec model;
  // Must agree with the task when set; defaults to F1 / 1-RAE by task.
  std::optional<Metric> metric;
  std::uint64_t seed = 0;
  std::size_t sample_cap = kDefaultSampleCap;
  double u_invalid = -1.0;
  double u_valid = 1.0;
  double h_power = 1.0;
  InteractionMethod interaction_method = InteractionMethod::kHStatistic;
  int mi_bins = kDefaultMiBins;
  bool restart_from_original = false;
  // Frozen agents neither store transitions nor train.
  bool freeze_agents = false;
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  // Share of the total step budget over which epsilon decays.
  double epsilon_decay_fraction = 0.8;
  AgentConfig agent;

  // Throws InvalidConfig naming the offending field.
  void validate() const;
  // Additionally checks metric and model against the task.
  void validate_for(Task task) const;
  int total_steps() const { return episodes * steps_per_episode; }
};

enum class StepOutcome {
  kGenerated,
  kInvalidPair,
  kDuplicate,
  kConstant,
  kNoCandidates,
};

std::string_view step_outcome_name(StepOutcome outcome);

struct IterationRecord {
  int episode = 0;
  int step = 0;
  double epsilon = 0.0;
  std::string op;
  std::string f1;
  std::string f2;
  // Operand actually transformed on the unary path; empty otherwise.
  std::string unary_target;
  StepOutcome outcome = StepOutcome::kNoCandidates;
  // Rendered lineage of the generated column; empty when none was kept.
  std::string new_feature;
  int new_order = 0;
  double u_f1 = 0.0;
  double u_f2 = 0.0;
  // Interaction term as it enters r_f2 (after h_power).
  double h = 0.0;
  double delta_v = 0.0;
  double r_op = 0.0;
  double r_f1 = 0.0;
  double r_f2 = 0.0;
  double v_at = 0.0;
  double v_opt = 0.0;
  std::size_t n_features = 0;
  std::vector<std::string> pruned;
  double loss_op = 0.0;
  double loss_f1 = 0.0;
  double loss_f2 = 0.0;
};

struct BestSet {
  std::shared_ptr<const FeatureTable> table;
  double v_opt = 0.0;
  // Global step that produced it; -1 for the original features.
  int iteration = -1;
};

struct ReconstructResult {
  BestSet best;
  std::vector<IterationRecord> trace;
  double baseline = 0.0;
  std::size_t original_count = 0;
};

using RecordObserver = std::function<void(const IterationRecord&)>;

// Downstream score of a table under the config's model and seed.
double evaluate_table(const FeatureTable& table, const EngineConfig& config);

// Fresh agents seeded from config.seed.
AgentBundle make_agents(const EngineConfig& config);

// Uses make_agents(config).
ReconstructResult reconstruct(const FeatureTable& table, const EngineConfig& config,
                              const RecordObserver& observer = nullptr);
// Uses (and, unless frozen, trains) the given agents.
ReconstructResult reconstruct(const FeatureTable& table, const EngineConfig& config,
                              AgentBundle& agents,
                              const RecordObserver& observer = nullptr);

// The operand more relevant to y by mutual information; ties go to f1.
const FeatureColumn& choose_unary_target(const FeatureColumn& f1,
                                         const FeatureColumn& f2,
                                         const TargetColumn& y,
                                         int bins = kDefaultMiBins);

// Keeps the k columns with highest MI(f, y) in their original order; ties
// favour the lower index.
FeatureTable select_k_best(const FeatureTable& table, std::size_t k,
                           int bins = kDefaultMiBins);

// floor(enlargement_factor * n_original), at least n_original.
std::size_t feature_cap(std::size_t n_original, double enlargement_factor);

}  // namespace featrecon

#endif  // FEATRECON_ENGINE_H_
