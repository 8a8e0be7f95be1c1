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

// Run orchestration and the line-oriented run report.

#ifndef FEATRECON_REPORT_H_
#define FEATRECON_REPORT_H_

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "featrecon/engine.h"
#include "featrecon/kinds.h"

namespace featrecon {

inline constexpr int kReportFormatVersion = 1;
inline constexpr std::size_t kDefaultTopFeatures = 10;

struct RunConfig {
  EngineConfig engine;
  std::string data_path;
  std::string target;
  Task task = Task::kClassification;
  // Empty writes the report to stdout.
  std::string out_path;
  // 0 keeps only the summary; 1 adds the per-iteration trace.
  int verbosity = 1;
  // Agents are saved here after the run when set.
  std::string checkpoint_path;
  // Agents are loaded from here before the run when set.
  std::string resume_path;
  std::size_t top_k = kDefaultTopFeatures;

  // Throws InvalidConfig for missing required fields or bad values.
  void validate() const;
};

struct RankedFeature {
  std::string lineage;
  int order = 1;
  double importance = 0.0;
};

struct RunReport {
  std::string status = "ok";
  std::vector<std::pair<std::string, std::string>> config;
  std::string metric;
  double baseline = 0.0;
  double v_opt = 0.0;
  double improvement = 0.0;
  int best_iteration = -1;
  std::size_t n_original = 0;
  std::vector<std::string> best_features;
  std::vector<RankedFeature> top_features;
  std::vector<IterationRecord> trace;
  int verbosity = 1;
  std::uint64_t seed = 0;
  double wall_clock_seconds = 0.0;
};

// Replaces a leading `~` with $HOME.
std::string expand_path(const std::string& path);

// Every RunConfig field as (key, value), in a fixed order.
std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& config);

// Features of `best` ranked by forest split-gain importance.
std::vector<RankedFeature> rank_features(const FeatureTable& best,
                                         const EngineConfig& config,
                                         std::size_t top_k);

RunReport build_report(const RunConfig& config, const ReconstructResult& result,
                       double wall_clock_seconds);

// Loads data, reconstructs, writes the report (and checkpoint). On a failure
// after loading, a partial report with the trace so far is written before the
// error propagates.
RunReport run(const RunConfig& config);

std::string report_to_string(const RunReport& report);
void emit_report(const RunReport& report, const std::string& path);

// Formats a double so that parsing it back yields the same value.
std::string format_real(double value);

}  // namespace featrecon

#endif  // FEATRECON_REPORT_H_
