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

// Q-learning agents. Each agent scores (state, action-encoding) pairs with a
// small MLP, so action sets may change size between steps.

#ifndef FEATRECON_AGENTS_H_
#define FEATRECON_AGENTS_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace featrecon {

// Feed-forward scorer: [state | action] -> 64 ReLU -> 64 ReLU -> scalar.
// Inputs pass through sign(x) * log1p(|x|) first so raw descriptive
// statistics of any magnitude stay in a trainable range.
class QFunction {
 public:
  QFunction() = default;
  QFunction(std::size_t state_dim, std::size_t action_dim, std::size_t hidden,
            std::uint64_t seed);

  std::size_t state_dim() const { return state_dim_; }
  std::size_t action_dim() const { return action_dim_; }
  std::size_t hidden() const { return hidden_; }
  std::size_t input_dim() const { return state_dim_ + action_dim_; }
  std::size_t n_params() const { return params_.size(); }

  double evaluate(std::span<const double> state,
                  std::span<const double> action) const;

  // Returns Q and adds scale * dQ/dparams into `grad`.
  double accumulate_gradient(std::span<const double> state,
                             std::span<const double> action, double scale,
                             std::vector<double>& grad) const;

  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }

 private:
  void check_layout(std::span<const double> state,
                    std::span<const double> action) const;

  std::size_t state_dim_ = 0;
  std::size_t action_dim_ = 0;
  std::size_t hidden_ = 0;
  // Flat layout: w1 (hidden x in), b1, w2 (hidden x hidden), b2, w3, b3.
  std::vector<double> params_;
};

struct Transition {
  std::vector<double> state;
  std::vector<double> action;
  double reward = 0.0;
  std::vector<double> next_state;
  // Empty means terminal: the target is the reward alone.
  std::vector<std::vector<double>> next_actions;
};

class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity = 2000);

  void push(Transition transition);
  // Up to batch_size distinct transitions, uniformly at random.
  std::vector<const Transition*> sample(std::size_t batch_size,
                                        std::mt19937_64& rng) const;
  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }

 private:
  std::size_t capacity_;
  std::size_t next_ = 0;
  std::vector<Transition> items_;
};

// Linear decay from start to end over decay_steps, then flat.
struct ExplorationSchedule {
  double start = 1.0;
  double end = 0.05;
  std::size_t decay_steps = 1;

  double epsilon(std::size_t step) const;
};

struct AgentConfig {
  std::size_t hidden = 64;
  double learning_rate = 1e-3;
  double gamma = 0.99;
  std::size_t replay_capacity = 2000;
  std::size_t batch_size = 32;
  // 0 disables the target network; otherwise sync every N train steps.
  std::size_t target_sync_interval = 0;
};

class QAgent {
 public:
  QAgent() = default;
  QAgent(std::string name, std::size_t state_dim, std::size_t action_dim,
         const AgentConfig& config, std::uint64_t seed);

  const std::string& name() const { return name_; }
  const AgentConfig& config() const { return config_; }
  const QFunction& q() const { return q_; }
  QFunction& q() { return q_; }
  ReplayBuffer& replay() { return replay_; }

  double q_value(std::span<const double> state,
                 std::span<const double> action) const;

  // Epsilon-greedy over candidates; greedy ties go to the lowest index.
  std::size_t select_action(std::span<const double> state,
                            std::span<const std::vector<double>> candidates,
                            double epsilon, std::mt19937_64& rng) const;

  // Mean squared TD error over the batch and its gradient (targets are held
  // fixed). `grad` is resized to n_params.
  double td_loss(std::span<const Transition* const> batch, double gamma,
                 std::vector<double>* grad) const;

  // One Adam step on the batch; returns the loss before the step.
  double train_step(std::span<const Transition* const> batch, double gamma);

  // Copies the online network into the target network.
  void sync_target() { target_q_ = q_; }

  void remember(Transition transition) { replay_.push(std::move(transition)); }
  // Samples a batch from replay and trains; returns 0 when replay is empty.
  double train(std::mt19937_64& rng);

  // Optimizer state, exposed for checkpointing.
  std::vector<double>& adam_m() { return adam_m_; }
  std::vector<double>& adam_v() { return adam_v_; }
  std::uint64_t& adam_steps() { return adam_steps_; }
  const std::vector<double>& adam_m() const { return adam_m_; }
  const std::vector<double>& adam_v() const { return adam_v_; }
  std::uint64_t adam_steps() const { return adam_steps_; }

 private:
  double target_max(const Transition& t) const;

  std::string name_;
  AgentConfig config_;
  QFunction q_;
  QFunction target_q_;
  ReplayBuffer replay_;
  std::vector<double> adam_m_;
  std::vector<double> adam_v_;
  std::uint64_t adam_steps_ = 0;
};

// Layouts of the three cooperating agents.
inline constexpr std::size_t kOperationStateDim = 49;
inline constexpr std::size_t kFeature1StateDim = 49 + 26;
inline constexpr std::size_t kFeature2StateDim = 49 + 49 + 26;
inline constexpr std::size_t kOperationActionDim = 26;
inline constexpr std::size_t kFeatureActionDim = 49;

struct AgentBundle {
  QAgent operation;
  QAgent feature1;
  QAgent feature2;

  static AgentBundle create(const AgentConfig& config, std::uint64_t seed);
};

inline constexpr int kCheckpointFormatVersion = 1;

// Text checkpoint: a `format_version` line followed by one named real array
// per line (`name count v0 v1 ...`). Replay contents are not saved.
void save_checkpoint(const AgentBundle& bundle, const std::string& path);
AgentBundle load_checkpoint(const std::string& path);
std::string checkpoint_to_string(const AgentBundle& bundle);
AgentBundle checkpoint_from_string(const std::string& text);

}  // namespace featrecon

#endif  // FEATRECON_AGENTS_H_
