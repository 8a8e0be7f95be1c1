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

#include "featrecon/report.h"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "featrecon/error.h"
#include "featrecon/stats.h"

namespace featrecon {
namespace {

constexpr std::uint64_t kImportanceStream = 21;

std::string join(const std::vector<std::string>& items, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += sep;
    out += items[i];
  }
  return out;
}

void write_record(std::ostream& out, const IterationRecord& r) {
  out << "trace\tstep=" << r.step << "\tepisode=" << r.episode
      << "\tepsilon=" << format_real(r.epsilon) << "\top=" << r.op << "\tf1=" << r.f1
      << "\tf2=" << r.f2 << "\tunary_target=" << r.unary_target
      << "\toutcome=" << step_outcome_name(r.outcome) << "\tnew_feature=" << r.new_feature
      << "\tnew_order=" << r.new_order << "\tu_f1=" << format_real(r.u_f1)
      << "\tu_f2=" << format_real(r.u_f2) << "\th=" << format_real(r.h)
      << "\tdelta_v=" << format_real(r.delta_v) << "\tr_op=" << format_real(r.r_op)
      << "\tr_f1=" << format_real(r.r_f1) << "\tr_f2=" << format_real(r.r_f2)
      << "\tv_at=" << format_real(r.v_at) << "\tv_opt=" << format_real(r.v_opt)
      << "\tn_features=" << r.n_features << "\tpruned=" << join(r.pruned, " | ")
      << "\tloss_op=" << format_real(r.loss_op) << "\tloss_f1=" << format_real(r.loss_f1)
      << "\tloss_f2=" << format_real(r.loss_f2) << '\n';
}

}  // namespace

std::string format_real(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

std::string expand_path(const std::string& path) {
  if (path.empty() || path[0] != '~') return path;
  if (path.size() > 1 && path[1] != '/') return path;
  const char* home = std::getenv("HOME");
  if (home == nullptr) fail(ErrorCode::kInvalidConfig, "cannot expand '~' without HOME");
  return std::string(home) + path.substr(1);
}

void RunConfig::validate() const {
  if (data_path.empty()) fail(ErrorCode::kInvalidConfig, "missing required --data");
  if (target.empty()) fail(ErrorCode::kInvalidConfig, "missing required --target");
  if (verbosity < 0 || verbosity > 1) {
    fail(ErrorCode::kInvalidConfig, "--verbosity must be 0 or 1");
  }
  engine.validate_for(task);
}

std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& c) {
  const auto& e = c.engine;
  const auto b = [](bool v) { return std::string(v ? "true" : "false"); };
  const auto n = [](auto v) { return std::to_string(v); };
  return {
      {"data", c.data_path},
      {"target", c.target},
      {"task", std::string(task_name(c.task))},
      {"episodes", n(e.episodes)},
      {"steps", n(e.steps_per_episode)},
      {"seed", n(e.seed)},
      {"max_order", n(e.max_order)},
      {"enlarge_factor", format_real(e.enlargement_factor)},
      {"cat_threshold", n(e.cat_threshold)},
      {"model", std::string(model_kind_name(e.model.kind))},
      {"metric", std::string(metric_name(e.metric.value_or(metric_for(c.task))))},
      {"n_trees", n(e.model.forest.n_trees)},
      {"max_depth", n(e.model.forest.max_depth)},
      {"min_leaf", n(e.model.forest.min_leaf)},
      {"knn_k", n(e.model.knn_k)},
      {"ridge_lambda", format_real(e.model.ridge_lambda)},
      {"interaction", std::string(interaction_method_name(e.interaction_method))},
      {"sample_cap", n(e.sample_cap)},
      {"mi_bins", n(e.mi_bins)},
      {"u_invalid", format_real(e.u_invalid)},
      {"u_valid", format_real(e.u_valid)},
      {"h_power", format_real(e.h_power)},
      {"restart_from_original", b(e.restart_from_original)},
      {"freeze_agents", b(e.freeze_agents)},
      {"epsilon_start", format_real(e.epsilon_start)},
      {"epsilon_end", format_real(e.epsilon_end)},
      {"epsilon_decay", format_real(e.epsilon_decay_fraction)},
      {"hidden", n(e.agent.hidden)},
      {"lr", format_real(e.agent.learning_rate)},
      {"gamma", format_real(e.agent.gamma)},
      {"replay", n(e.agent.replay_capacity)},
      {"batch", n(e.agent.batch_size)},
      {"target_sync", n(e.agent.target_sync_interval)},
      {"verbosity", n(c.verbosity)},
      {"checkpoint", c.checkpoint_path},
      {"resume", c.resume_path},
      {"top_k", n(c.top_k)},
  };
}

std::vector<RankedFeature> rank_features(const FeatureTable& best,
                                         const EngineConfig& config,
                                         std::size_t top_k) {
  ModelSpec spec = config.model;
  spec.kind = ModelKind::kRandomForest;
  auto forest = make_predictor(spec, derive_seed(config.seed, kImportanceStream));
  forest->fit(best);
  const auto importance = forest->feature_importance();
  std::vector<std::size_t> order(best.n_cols());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return importance[a] > importance[b];
  });
  if (order.size() > top_k) order.resize(top_k);
  std::vector<RankedFeature> out;
  for (const auto i : order) {
    out.push_back({best.column(i).name(), best.column(i).order(), importance[i]});
  }
  return out;
}

RunReport build_report(const RunConfig& config, const ReconstructResult& result,
                       double wall_clock_seconds) {
  RunReport report;
  report.config = config_entries(config);
  report.metric = std::string(metric_name(metric_for(config.task)));
  report.baseline = result.baseline;
  report.v_opt = result.best.v_opt;
  report.improvement = result.best.v_opt - result.baseline;
  report.best_iteration = result.best.iteration;
  report.n_original = result.original_count;
  report.best_features = result.best.table->column_names();
  report.top_features = rank_features(*result.best.table, config.engine, config.top_k);
  report.trace = result.trace;
  report.verbosity = config.verbosity;
  report.seed = config.engine.seed;
  report.wall_clock_seconds = wall_clock_seconds;
  return report;
}

RunReport run(const RunConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  const FeatureTable table = load_csv(
      expand_path(config.data_path),
      CsvOptions{config.target, config.task, config.engine.cat_threshold});
  AgentBundle agents = config.resume_path.empty()
                           ? make_agents(config.engine)
                           : load_checkpoint(expand_path(config.resume_path));

  std::vector<IterationRecord> partial;
  ReconstructResult result;
  try {
    result = reconstruct(table, config.engine, agents,
                         [&](const IterationRecord& r) { partial.push_back(r); });
  } catch (const Error& e) {
    RunReport failed;
    failed.status = std::string("failed: ") + e.what();
    failed.config = config_entries(config);
    failed.metric = std::string(metric_name(metric_for(config.task)));
    failed.trace = std::move(partial);
    failed.verbosity = 1;
    failed.seed = config.engine.seed;
    failed.wall_clock_seconds = elapsed();
    emit_report(failed, expand_path(config.out_path));
    throw;
  }
  RunReport report = build_report(config, result, elapsed());
  emit_report(report, expand_path(config.out_path));
  if (!config.checkpoint_path.empty()) {
    save_checkpoint(agents, expand_path(config.checkpoint_path));
  }
  return report;
}

std::string report_to_string(const RunReport& r) {
  std::ostringstream out;
  out << "format_version " << kReportFormatVersion << '\n';
  out << "status " << r.status << '\n';
  out << "seed " << r.seed << '\n';
  for (const auto& [key, value] : r.config) out << "config." << key << ' ' << value << '\n';
  out << "metric " << r.metric << '\n';
  out << "baseline " << format_real(r.baseline) << '\n';
  out << "v_opt " << format_real(r.v_opt) << '\n';
  out << "improvement " << format_real(r.improvement) << '\n';
  out << "best_iteration " << r.best_iteration << '\n';
  out << "n_original " << r.n_original << '\n';
  out << "n_best " << r.best_features.size() << '\n';
  for (const auto& name : r.best_features) out << "best_feature\t" << name << '\n';
  out << "n_top " << r.top_features.size() << '\n';
  for (std::size_t i = 0; i < r.top_features.size(); ++i) {
    const auto& f = r.top_features[i];
    out << "top_feature\trank=" << (i + 1) << "\timportance=" << format_real(f.importance)
        << "\torder=" << f.order << "\tlineage=" << f.lineage << '\n';
  }
  out << "trace_length " << r.trace.size() << '\n';
  if (r.verbosity > 0) {
    for (const auto& record : r.trace) write_record(out, record);
  }
  out << "wall_clock_seconds " << format_real(r.wall_clock_seconds) << '\n';
  return out.str();
}

void emit_report(const RunReport& report, const std::string& path) {
  const std::string text = report_to_string(report);
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIoFailure, "cannot write report '" + path + "'");
  out << text;
  out.flush();
  if (!out) fail(ErrorCode::kIoFailure, "write failed for report '" + path + "'");
}

}  // namespace featrecon
