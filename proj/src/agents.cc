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

#include "featrecon/agents.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <utility>

#include "featrecon/error.h"
#include "featrecon/stats.h"

namespace featrecon {
namespace {

constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kAdamEpsilon = 1e-8;

double squash(double x) { return std::copysign(std::log1p(std::abs(x)), x); }

std::string format_double(double v) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), v);
  return std::string(buffer, result.ptr);
}

double parse_double(std::string_view token) {
  double v = 0.0;
  const auto result = std::from_chars(token.data(), token.data() + token.size(), v);
  if (result.ec != std::errc() || result.ptr != token.data() + token.size()) {
    fail(ErrorCode::kIoFailure, "bad number in checkpoint: " + std::string(token));
  }
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// QFunction

QFunction::QFunction(std::size_t state_dim, std::size_t action_dim,
                     std::size_t hidden, std::uint64_t seed)
    : state_dim_(state_dim), action_dim_(action_dim), hidden_(hidden) {
  const std::size_t in = input_dim();
  params_.assign(hidden * in + hidden + hidden * hidden + hidden + hidden + 1, 0.0);
  std::mt19937_64 rng(seed);
  const double bound1 = 1.0 / std::sqrt(static_cast<double>(in));
  const double bound2 = 1.0 / std::sqrt(static_cast<double>(hidden));
  std::uniform_real_distribution<double> u1(-bound1, bound1);
  std::uniform_real_distribution<double> u2(-bound2, bound2);
  double* p = params_.data();
  for (std::size_t i = 0; i < hidden * in; ++i) p[i] = u1(rng);
  p += hidden * in + hidden;
  for (std::size_t i = 0; i < hidden * hidden; ++i) p[i] = u2(rng);
  // Output layer stays zero so a fresh agent scores every action 0.
}

void QFunction::check_layout(std::span<const double> state,
                             std::span<const double> action) const {
  if (state.size() != state_dim_ || action.size() != action_dim_) {
    fail(ErrorCode::kLayoutMismatch,
         "expected state/action of " + std::to_string(state_dim_) + "/" +
             std::to_string(action_dim_) + ", got " +
             std::to_string(state.size()) + "/" + std::to_string(action.size()));
  }
}

double QFunction::evaluate(std::span<const double> state,
                           std::span<const double> action) const {
  check_layout(state, action);
  const std::size_t in = input_dim();
  const std::size_t h = hidden_;
  std::vector<double> x(in);
  for (std::size_t i = 0; i < state.size(); ++i) x[i] = squash(state[i]);
  for (std::size_t i = 0; i < action.size(); ++i) x[state.size() + i] = squash(action[i]);

  const double* w1 = params_.data();
  const double* b1 = w1 + h * in;
  const double* w2 = b1 + h;
  const double* b2 = w2 + h * h;
  const double* w3 = b2 + h;
  const double b3 = w3[h];

  std::vector<double> h1(h), h2(h);
  for (std::size_t j = 0; j < h; ++j) {
    double a = b1[j];
    const double* row = w1 + j * in;
    for (std::size_t i = 0; i < in; ++i) a += row[i] * x[i];
    h1[j] = a > 0 ? a : 0.0;
  }
  double q = b3;
  for (std::size_t j = 0; j < h; ++j) {
    double a = b2[j];
    const double* row = w2 + j * h;
    for (std::size_t i = 0; i < h; ++i) a += row[i] * h1[i];
    h2[j] = a > 0 ? a : 0.0;
    q += w3[j] * h2[j];
  }
  return q;
}

double QFunction::accumulate_gradient(std::span<const double> state,
                                      std::span<const double> action,
                                      double scale,
                                      std::vector<double>& grad) const {
  check_layout(state, action);
  if (grad.size() != params_.size()) grad.assign(params_.size(), 0.0);
  const std::size_t in = input_dim();
  const std::size_t h = hidden_;
  std::vector<double> x(in);
  for (std::size_t i = 0; i < state.size(); ++i) x[i] = squash(state[i]);
  for (std::size_t i = 0; i < action.size(); ++i) x[state.size() + i] = squash(action[i]);

  const double* w1 = params_.data();
  const double* b1 = w1 + h * in;
  const double* w2 = b1 + h;
  const double* b2 = w2 + h * h;
  const double* w3 = b2 + h;
  const double b3 = w3[h];

  std::vector<double> h1(h), h2(h);
  for (std::size_t j = 0; j < h; ++j) {
    double a = b1[j];
    const double* row = w1 + j * in;
    for (std::size_t i = 0; i < in; ++i) a += row[i] * x[i];
    h1[j] = a > 0 ? a : 0.0;
  }
  double q = b3;
  for (std::size_t j = 0; j < h; ++j) {
    double a = b2[j];
    const double* row = w2 + j * h;
    for (std::size_t i = 0; i < h; ++i) a += row[i] * h1[i];
    h2[j] = a > 0 ? a : 0.0;
    q += w3[j] * h2[j];
  }

  double* g_w1 = grad.data();
  double* g_b1 = g_w1 + h * in;
  double* g_w2 = g_b1 + h;
  double* g_b2 = g_w2 + h * h;
  double* g_w3 = g_b2 + h;
  g_w3[h] += scale;  // b3

  std::vector<double> d2(h, 0.0), d1(h, 0.0);
  for (std::size_t j = 0; j < h; ++j) {
    g_w3[j] += scale * h2[j];
    d2[j] = h2[j] > 0 ? scale * w3[j] : 0.0;
  }
  for (std::size_t j = 0; j < h; ++j) {
    if (d2[j] == 0.0) continue;
    double* g_row = g_w2 + j * h;
    const double* row = w2 + j * h;
    for (std::size_t i = 0; i < h; ++i) {
      g_row[i] += d2[j] * h1[i];
      d1[i] += d2[j] * row[i];
    }
    g_b2[j] += d2[j];
  }
  for (std::size_t j = 0; j < h; ++j) {
    if (h1[j] <= 0 || d1[j] == 0.0) continue;
    double* g_row = g_w1 + j * in;
    for (std::size_t i = 0; i < in; ++i) g_row[i] += d1[j] * x[i];
    g_b1[j] += d1[j];
  }
  return q;
}

// ---------------------------------------------------------------------------
// Replay and exploration

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(std::max<std::size_t>(capacity, 1)) {}

void ReplayBuffer::push(Transition transition) {
  if (items_.size() < capacity_) {
    items_.push_back(std::move(transition));
  } else {
    items_[next_] = std::move(transition);
  }
  next_ = (next_ + 1) % capacity_;
}

std::vector<const Transition*> ReplayBuffer::sample(std::size_t batch_size,
                                                    std::mt19937_64& rng) const {
  const std::size_t n = items_.size();
  const std::size_t k = std::min(batch_size, n);
  std::vector<std::size_t> index(n);
  std::iota(index.begin(), index.end(), 0);
  std::vector<const Transition*> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(index[i], index[pick(rng)]);
    out.push_back(&items_[index[i]]);
  }
  return out;
}

double ExplorationSchedule::epsilon(std::size_t step) const {
  if (decay_steps == 0 || step >= decay_steps) return end;
  const double frac = static_cast<double>(step) / static_cast<double>(decay_steps);
  return start + (end - start) * frac;
}

// ---------------------------------------------------------------------------
// QAgent

QAgent::QAgent(std::string name, std::size_t state_dim, std::size_t action_dim,
               const AgentConfig& config, std::uint64_t seed)
    : name_(std::move(name)),
      config_(config),
      q_(state_dim, action_dim, config.hidden, seed),
      replay_(config.replay_capacity) {
  target_q_ = q_;
  adam_m_.assign(q_.n_params(), 0.0);
  adam_v_.assign(q_.n_params(), 0.0);
}

double QAgent::q_value(std::span<const double> state,
                       std::span<const double> action) const {
  return q_.evaluate(state, action);
}

std::size_t QAgent::select_action(std::span<const double> state,
                                  std::span<const std::vector<double>> candidates,
                                  double epsilon, std::mt19937_64& rng) const {
  if (candidates.empty()) fail(ErrorCode::kNoCandidates, name_ + ": no candidates");
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (epsilon > 0 && coin(rng) < epsilon) {
    std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
    return pick(rng);
  }
  std::size_t best = 0;
  double best_q = q_.evaluate(state, candidates[0]);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double q = q_.evaluate(state, candidates[i]);
    if (q > best_q) {
      best_q = q;
      best = i;
    }
  }
  return best;
}

double QAgent::target_max(const Transition& t) const {
  const QFunction& scorer = config_.target_sync_interval > 0 ? target_q_ : q_;
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& action : t.next_actions) {
    best = std::max(best, scorer.evaluate(t.next_state, action));
  }
  return best;
}

double QAgent::td_loss(std::span<const Transition* const> batch, double gamma,
                       std::vector<double>* grad) const {
  if (batch.empty()) fail(ErrorCode::kEmptyBatch, name_ + ": empty batch");
  if (grad != nullptr) grad->assign(q_.n_params(), 0.0);
  const double size = static_cast<double>(batch.size());
  double loss = 0.0;
  for (const Transition* t : batch) {
    double target = t->reward;
    if (!t->next_actions.empty()) target += gamma * target_max(*t);
    const double q = q_.evaluate(t->state, t->action);
    const double diff = q - target;
    loss += diff * diff;
    if (grad != nullptr) {
      q_.accumulate_gradient(t->state, t->action, 2.0 * diff / size, *grad);
    }
  }
  return loss / size;
}

double QAgent::train_step(std::span<const Transition* const> batch, double gamma) {
  std::vector<double> grad;
  const double loss = td_loss(batch, gamma, &grad);
  ++adam_steps_;
  const double t = static_cast<double>(adam_steps_);
  const double correction1 = 1.0 - std::pow(kAdamBeta1, t);
  const double correction2 = 1.0 - std::pow(kAdamBeta2, t);
  auto& params = q_.params();
  for (std::size_t i = 0; i < params.size(); ++i) {
    adam_m_[i] = kAdamBeta1 * adam_m_[i] + (1 - kAdamBeta1) * grad[i];
    adam_v_[i] = kAdamBeta2 * adam_v_[i] + (1 - kAdamBeta2) * grad[i] * grad[i];
    const double m_hat = adam_m_[i] / correction1;
    const double v_hat = adam_v_[i] / correction2;
    params[i] -= config_.learning_rate * m_hat / (std::sqrt(v_hat) + kAdamEpsilon);
  }
  if (config_.target_sync_interval > 0 &&
      adam_steps_ % config_.target_sync_interval == 0) {
    target_q_ = q_;
  }
  return loss;
}

double QAgent::train(std::mt19937_64& rng) {
  if (replay_.size() == 0) return 0.0;
  const auto batch = replay_.sample(config_.batch_size, rng);
  return train_step(batch, config_.gamma);
}

AgentBundle AgentBundle::create(const AgentConfig& config, std::uint64_t seed) {
  return AgentBundle{
      QAgent("operation", kOperationStateDim, kOperationActionDim, config,
             derive_seed(seed, 1)),
      QAgent("feature1", kFeature1StateDim, kFeatureActionDim, config,
             derive_seed(seed, 2)),
      QAgent("feature2", kFeature2StateDim, kFeatureActionDim, config,
             derive_seed(seed, 3)),
  };
}

// ---------------------------------------------------------------------------
// Checkpoints

std::string checkpoint_to_string(const AgentBundle& bundle) {
  std::ostringstream out;
  out << "format_version " << kCheckpointFormatVersion << "\n";
  const auto write = [&](const std::string& name, const std::vector<double>& values) {
    out << name << ' ' << values.size();
    for (const double v : values) out << ' ' << format_double(v);
    out << '\n';
  };
  for (const QAgent* agent : {&bundle.operation, &bundle.feature1, &bundle.feature2}) {
    const auto& cfg = agent->config();
    const auto& q = agent->q();
    const std::string& n = agent->name();
    write(n + ".layout", {static_cast<double>(q.state_dim()),
                          static_cast<double>(q.action_dim()),
                          static_cast<double>(q.hidden())});
    write(n + ".config",
          {cfg.learning_rate, cfg.gamma, static_cast<double>(cfg.replay_capacity),
           static_cast<double>(cfg.batch_size),
           static_cast<double>(cfg.target_sync_interval)});
    write(n + ".params", q.params());
    write(n + ".adam_m", agent->adam_m());
    write(n + ".adam_v", agent->adam_v());
    write(n + ".adam_steps", {static_cast<double>(agent->adam_steps())});
  }
  return out.str();
}

AgentBundle checkpoint_from_string(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("format_version ", 0) != 0) {
    fail(ErrorCode::kIoFailure, "checkpoint lacks a format_version header");
  }
  const int version = static_cast<int>(parse_double(line.substr(15)));
  if (version != kCheckpointFormatVersion) {
    fail(ErrorCode::kIoFailure,
         "unsupported checkpoint version " + std::to_string(version));
  }
  std::map<std::string, std::vector<double>> arrays;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string name, token;
    std::size_t count = 0;
    if (!(fields >> name >> count)) fail(ErrorCode::kIoFailure, "malformed checkpoint line");
    std::vector<double> values;
    values.reserve(count);
    while (fields >> token) values.push_back(parse_double(token));
    if (values.size() != count) {
      fail(ErrorCode::kIoFailure, "array '" + name + "' has wrong length");
    }
    arrays[name] = std::move(values);
  }
  const auto get = [&](const std::string& name) -> const std::vector<double>& {
    const auto it = arrays.find(name);
    if (it == arrays.end()) fail(ErrorCode::kIoFailure, "checkpoint lacks '" + name + "'");
    return it->second;
  };
  const auto restore = [&](const std::string& name) {
    const auto& layout = get(name + ".layout");
    const auto& cfg_values = get(name + ".config");
    if (layout.size() != 3 || cfg_values.size() != 5) {
      fail(ErrorCode::kIoFailure, "bad layout/config arrays for " + name);
    }
    AgentConfig cfg;
    cfg.hidden = static_cast<std::size_t>(layout[2]);
    cfg.learning_rate = cfg_values[0];
    cfg.gamma = cfg_values[1];
    cfg.replay_capacity = static_cast<std::size_t>(cfg_values[2]);
    cfg.batch_size = static_cast<std::size_t>(cfg_values[3]);
    cfg.target_sync_interval = static_cast<std::size_t>(cfg_values[4]);
    QAgent agent(name, static_cast<std::size_t>(layout[0]),
                 static_cast<std::size_t>(layout[1]), cfg, 0);
    const auto& params = get(name + ".params");
    if (params.size() != agent.q().n_params()) {
      fail(ErrorCode::kIoFailure, "parameter count mismatch for " + name);
    }
    agent.q().params() = params;
    agent.adam_m() = get(name + ".adam_m");
    agent.adam_v() = get(name + ".adam_v");
    if (agent.adam_m().size() != params.size() || agent.adam_v().size() != params.size()) {
      fail(ErrorCode::kIoFailure, "optimizer state size mismatch for " + name);
    }
    agent.adam_steps() = static_cast<std::uint64_t>(get(name + ".adam_steps").at(0));
    return agent;
  };
  AgentBundle bundle{restore("operation"), restore("feature1"), restore("feature2")};
  for (QAgent* agent : {&bundle.operation, &bundle.feature1, &bundle.feature2}) {
    agent->sync_target();
  }
  return bundle;
}

void save_checkpoint(const AgentBundle& bundle, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIoFailure, "cannot write checkpoint '" + path + "'");
  out << checkpoint_to_string(bundle);
  if (!out) fail(ErrorCode::kIoFailure, "write failed for '" + path + "'");
}

AgentBundle load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoFailure, "cannot read checkpoint '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return checkpoint_from_string(buffer.str());
}

}  // namespace featrecon
