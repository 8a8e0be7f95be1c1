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

#include "featrecon/engine.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <utility>

#include "featrecon/error.h"
#include "featrecon/ops.h"
#include "featrecon/staterep.h"
#include "featrecon/stats.h"

namespace featrecon {
namespace {

// Independent random streams derived from the run seed.
constexpr std::uint64_t kAgentInitStream = 11;
constexpr std::uint64_t kSelectionStream = 12;
constexpr std::uint64_t kReplayStream = 13;
constexpr std::uint64_t kInteractionModelStream = 14;

void require(bool ok, const std::string& message) {
  if (!ok) fail(ErrorCode::kInvalidConfig, message);
}

std::string table_key(const FeatureTable& table) {
  std::string key;
  for (const auto& column : table.columns()) {
    key += column->name();
    key += '\n';
  }
  return key;
}

std::vector<double> concat(std::initializer_list<const std::vector<double>*> parts) {
  std::vector<double> out;
  for (const auto* part : parts) out.insert(out.end(), part->begin(), part->end());
  return out;
}

const std::vector<std::vector<double>>& operation_actions() {
  static const std::vector<std::vector<double>> actions = [] {
    std::vector<std::vector<double>> out;
    for (const auto& spec : operator_table()) out.push_back(one_hot(spec.id));
    return out;
  }();
  return actions;
}

// Columns that may still be crossed without exceeding max_order.
std::vector<std::size_t> candidate_mask(const FeatureTable& table, int max_order) {
  std::vector<std::size_t> mask;
  for (std::size_t i = 0; i < table.n_cols(); ++i) {
    if (table.column(i).order() < max_order) mask.push_back(i);
  }
  return mask;
}

std::vector<std::vector<double>> encode_candidates(
    const FeatureTable& table, const std::vector<std::size_t>& mask) {
  std::vector<std::vector<double>> out;
  out.reserve(mask.size());
  for (const auto i : mask) out.push_back(rep_feature(table.column(i)).values);
  return out;
}

class Scorer {
 public:
  explicit Scorer(const EngineConfig& config) : config_(config) {}

  double value(const FeatureTable& table) {
    const auto key = table_key(table);
    const auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const double v = evaluate_table(table, config_);
    cache_.emplace(key, v);
    return v;
  }

  // Interaction term for a crossed pair of columns of `table`.
  double interaction(const FeatureTable& table, std::size_t i1, std::size_t i2) {
    double raw = 0.0;
    if (config_.interaction_method == InteractionMethod::kHStatistic) {
      const auto key = table_key(table);
      if (key != model_key_ || model_ == nullptr) {
        model_ = make_predictor(config_.model,
                                derive_seed(config_.seed, kInteractionModelStream));
        model_->fit(table);
        model_key_ = key;
      }
      raw = h_statistic_with_parents(*model_, table, i1, i2, config_.sample_cap,
                                     config_.seed);
    } else {
      const FeatureColumn* pair[] = {&table.column(i1), &table.column(i2)};
      raw = ablation_utility(pair, table.target(), config_.interaction_method,
                             config_.mi_bins);
    }
    if (config_.h_power == 1.0) return raw;
    return std::copysign(std::pow(std::abs(raw), config_.h_power), raw);
  }

 private:
  const EngineConfig& config_;
  std::map<std::string, double> cache_;
  std::string model_key_;
  std::unique_ptr<Predictor> model_;
};

}  // namespace

void EngineConfig::validate() const {
  require(episodes >= 1, "episodes must be >= 1");
  require(steps_per_episode >= 1, "steps_per_episode must be >= 1");
  require(max_order >= 1, "max_order must be >= 1");
  require(enlargement_factor >= 1.0, "enlargement_factor must be >= 1");
  require(cat_threshold >= 0, "cat_threshold must be >= 0");
  require(sample_cap >= 2, "sample_cap must be >= 2");
  require(std::isfinite(u_invalid) && std::isfinite(u_valid),
          "validity rewards must be finite");
  require(h_power > 0 && std::isfinite(h_power), "h_power must be > 0");
  require(mi_bins >= 2, "mi_bins must be >= 2");
  require(epsilon_start >= 0 && epsilon_start <= 1, "epsilon_start must be in [0, 1]");
  require(epsilon_end >= 0 && epsilon_end <= 1, "epsilon_end must be in [0, 1]");
  require(epsilon_decay_fraction >= 0 && epsilon_decay_fraction <= 1,
          "epsilon_decay_fraction must be in [0, 1]");
  require(agent.hidden >= 1, "hidden must be >= 1");
  require(agent.learning_rate > 0, "learning_rate must be > 0");
  require(agent.gamma >= 0 && agent.gamma <= 1, "gamma must be in [0, 1]");
  require(agent.replay_capacity >= 1, "replay_capacity must be >= 1");
  require(agent.batch_size >= 1, "batch_size must be >= 1");
  require(model.forest.n_trees >= 1, "n_trees must be >= 1");
  require(model.forest.max_depth >= 1, "max_depth must be >= 1");
  require(model.forest.min_leaf >= 1, "min_leaf must be >= 1");
  require(model.forest.feature_fraction >= 0 && model.forest.feature_fraction <= 1,
          "feature_fraction must be in [0, 1]");
  require(model.knn_k >= 1, "knn_k must be >= 1");
  require(model.ridge_lambda >= 0, "ridge_lambda must be >= 0");
}

void EngineConfig::validate_for(Task task) const {
  validate();
  if (metric.has_value()) {
    require(*metric == metric_for(task),
            "metric " + std::string(metric_name(*metric)) + " does not apply to " +
                std::string(task_name(task)) + " targets");
  }
  require(!(model.kind == ModelKind::kRidge && task == Task::kClassification),
          "ridge supports regression targets only");
}

std::string_view step_outcome_name(StepOutcome outcome) {
  switch (outcome) {
    case StepOutcome::kGenerated: return "generated";
    case StepOutcome::kInvalidPair: return "invalid_pair";
    case StepOutcome::kDuplicate: return "duplicate";
    case StepOutcome::kConstant: return "constant";
    case StepOutcome::kNoCandidates: return "no_candidates";
  }
  return "unknown";
}

double evaluate_table(const FeatureTable& table, const EngineConfig& config) {
  return evaluate_cv(config.model, table, config.seed).value;
}

std::size_t feature_cap(std::size_t n_original, double enlargement_factor) {
  const auto cap = static_cast<std::size_t>(
      std::floor(enlargement_factor * static_cast<double>(n_original)));
  return std::max(cap, n_original);
}

const FeatureColumn& choose_unary_target(const FeatureColumn& f1,
                                         const FeatureColumn& f2,
                                         const TargetColumn& y, int bins) {
  return mutual_information(f1, y, bins) >= mutual_information(f2, y, bins) ? f1 : f2;
}

FeatureTable select_k_best(const FeatureTable& table, std::size_t k, int bins) {
  if (k == 0) fail(ErrorCode::kInvalidArgument, "K must be >= 1");
  if (k >= table.n_cols()) return table;
  std::vector<double> score(table.n_cols());
  for (std::size_t i = 0; i < table.n_cols(); ++i) {
    score[i] = mutual_information(table.column(i), table.target(), bins);
  }
  std::vector<std::size_t> order(table.n_cols());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
  order.resize(k);
  std::sort(order.begin(), order.end());
  return table.select(order);
}

AgentBundle make_agents(const EngineConfig& config) {
  return AgentBundle::create(config.agent, derive_seed(config.seed, kAgentInitStream));
}

ReconstructResult reconstruct(const FeatureTable& table, const EngineConfig& config,
                              const RecordObserver& observer) {
  auto agents = make_agents(config);
  return reconstruct(table, config, agents, observer);
}

ReconstructResult reconstruct(const FeatureTable& table, const EngineConfig& config,
                              AgentBundle& agents, const RecordObserver& observer) {
  config.validate_for(table.target().task());
  const auto original = std::make_shared<const FeatureTable>(table);
  const std::size_t cap = feature_cap(table.n_cols(), config.enlargement_factor);
  const auto& y = table.target();

  Scorer scorer(config);
  ReconstructResult result;
  result.original_count = table.n_cols();
  result.baseline = scorer.value(*original);
  result.best = BestSet{original, result.baseline, -1};

  const int total = config.total_steps();
  const ExplorationSchedule schedule{
      config.epsilon_start, config.epsilon_end,
      static_cast<std::size_t>(std::floor(config.epsilon_decay_fraction * total))};
  std::mt19937_64 select_rng(derive_seed(config.seed, kSelectionStream));
  std::mt19937_64 replay_rng(derive_seed(config.seed, kReplayStream));
  const auto& op_actions = operation_actions();

  std::shared_ptr<const FeatureTable> current = original;
  double v_prev = result.baseline;
  int global = 0;
  for (int episode = 0; episode < config.episodes; ++episode) {
    if (episode > 0) {
      current = config.restart_from_original ? original : result.best.table;
      v_prev = config.restart_from_original ? result.baseline : result.best.v_opt;
    }
    for (int s = 0; s < config.steps_per_episode; ++s, ++global) {
      const FeatureTable& f = *current;
      IterationRecord rec;
      rec.episode = episode;
      rec.step = global;
      rec.epsilon = schedule.epsilon(static_cast<std::size_t>(global));

      const auto mask = candidate_mask(f, config.max_order);
      if (mask.empty()) {
        rec.outcome = StepOutcome::kNoCandidates;
        rec.v_at = v_prev;
        rec.v_opt = result.best.v_opt;
        rec.n_features = f.n_cols();
        if (observer) observer(rec);
        result.trace.push_back(std::move(rec));
        continue;
      }

      const auto s_op = rep_featureset(f).values;
      const auto op_choice =
          agents.operation.select_action(s_op, op_actions, rec.epsilon, select_rng);
      const OpId op = operator_table()[op_choice].id;
      const auto& op_code = op_actions[op_choice];
      const auto candidates = encode_candidates(f, mask);
      const auto s_f1 = concat({&s_op, &op_code});
      const auto a1 = agents.feature1.select_action(s_f1, candidates, rec.epsilon,
                                                    select_rng);
      const auto s_f2 = concat({&s_op, &candidates[a1], &op_code});
      const auto a2 = agents.feature2.select_action(s_f2, candidates, rec.epsilon,
                                                    select_rng);
      const std::size_t i1 = mask[a1];
      const std::size_t i2 = mask[a2];
      const FeatureColumn& c1 = f.column(i1);
      const FeatureColumn& c2 = f.column(i2);
      const bool unary = is_unary(op);
      rec.op = std::string(op_name(op));
      rec.f1 = c1.name();
      rec.f2 = c2.name();

      const bool ok1 = argument_accepts(op, 0, c1.kind());
      const bool ok2 = argument_accepts(op, unary ? 0 : 1, c2.kind());
      rec.u_f1 = ok1 ? config.u_valid : config.u_invalid;
      rec.u_f2 = ok2 ? config.u_valid : config.u_invalid;
      rec.v_at = v_prev;
      auto next = current;

      if (!ok1 || !ok2) {
        rec.outcome = StepOutcome::kInvalidPair;
      } else {
        const FeatureColumn* operand = nullptr;
        if (unary) {
          operand = &choose_unary_target(c1, c2, y, config.mi_bins);
          rec.unary_target = operand->name();
        }
        auto generated = std::make_shared<const FeatureColumn>(
            unary ? apply(op, *operand) : apply(op, c1, &c2));
        if (f.find(generated->name()).has_value()) {
          rec.outcome = StepOutcome::kDuplicate;
        } else if (generated->is_constant()) {
          rec.outcome = StepOutcome::kConstant;
        } else {
          rec.outcome = StepOutcome::kGenerated;
        }
        if (rec.outcome != StepOutcome::kGenerated) {
          rec.u_f1 = config.u_invalid;
          rec.u_f2 = config.u_invalid;
        } else {
          rec.new_feature = generated->name();
          rec.new_order = generated->order();
          if (!unary) rec.h = scorer.interaction(f, i1, i2);
          FeatureTable grown = f.with_column(generated);
          if (grown.n_cols() > cap) {
            FeatureTable kept = select_k_best(grown, cap, config.mi_bins);
            for (const auto& column : grown.columns()) {
              if (!kept.find(column->name()).has_value()) {
                rec.pruned.push_back(column->name());
              }
            }
            next = std::make_shared<const FeatureTable>(std::move(kept));
          } else {
            next = std::make_shared<const FeatureTable>(std::move(grown));
          }
          rec.v_at = scorer.value(*next);
          rec.delta_v = rec.v_at - result.best.v_opt;
        }
      }
      rec.r_op = rec.delta_v;
      rec.r_f1 = rec.u_f1 + rec.delta_v;
      rec.r_f2 = rec.u_f2 + rec.h + rec.delta_v;

      if (rec.outcome == StepOutcome::kGenerated && rec.v_at > result.best.v_opt) {
        result.best = BestSet{next, rec.v_at, global};
      }
      rec.v_opt = result.best.v_opt;
      rec.n_features = next->n_cols();

      if (!config.freeze_agents) {
        const bool last = s + 1 == config.steps_per_episode;
        const auto s_op_next = rep_featureset(*next).values;
        const auto next_mask = candidate_mask(*next, config.max_order);
        auto next_candidates = encode_candidates(*next, next_mask);
        const bool terminal = last || next_candidates.empty();
        agents.operation.remember(Transition{
            s_op, op_code, rec.r_op, s_op_next,
            terminal ? std::vector<std::vector<double>>{} : op_actions});
        agents.feature1.remember(Transition{
            s_f1, candidates[a1], rec.r_f1, concat({&s_op_next, &op_code}),
            terminal ? std::vector<std::vector<double>>{} : next_candidates});
        agents.feature2.remember(Transition{
            s_f2, candidates[a2], rec.r_f2,
            concat({&s_op_next, &candidates[a1], &op_code}),
            terminal ? std::vector<std::vector<double>>{} : std::move(next_candidates)});
        rec.loss_op = agents.operation.train(replay_rng);
        rec.loss_f1 = agents.feature1.train(replay_rng);
        rec.loss_f2 = agents.feature2.train(replay_rng);
      }

      current = next;
      v_prev = rec.v_at;
      if (observer) observer(rec);
      result.trace.push_back(std::move(rec));
    }
  }
  return result;
}

}  // namespace featrecon
