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

#include "featrecon/interaction.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <utility>

#include "featrecon/error.h"
#include "featrecon/stats.h"

namespace featrecon {
namespace {

// Joint partial dependence below this mean square counts as "no effect".
constexpr double kDegenerateMeanSquare = 1e-20;

FeatureKind target_kind(const TargetColumn& y) {
  return y.task() == Task::kClassification ? FeatureKind::kCategorical
                                           : FeatureKind::kNumerical;
}

}  // namespace

std::vector<std::size_t> pd_sample(std::size_t n_rows, std::size_t sample_cap,
                                   std::uint64_t seed) {
  std::vector<std::size_t> all(n_rows);
  std::iota(all.begin(), all.end(), 0);
  if (sample_cap >= n_rows) return all;
  std::vector<std::size_t> picked;
  picked.reserve(sample_cap);
  std::mt19937_64 rng(seed);
  std::sample(all.begin(), all.end(), std::back_inserter(picked), sample_cap, rng);
  return picked;
}

PdFunction partial_dependence(const ScoringModel& model, const DesignMatrix& data,
                              std::span<const std::size_t> subset,
                              std::size_t sample_cap, std::uint64_t seed) {
  if (!model.is_fitted()) fail(ErrorCode::kModelNotTrained, "model is not fitted");
  if (model.n_inputs() != data.n_cols) {
    fail(ErrorCode::kSchemaMismatch, "model and data disagree on column count");
  }
  if (data.n_rows == 0) fail(ErrorCode::kEmptyTable, "partial dependence on no rows");
  if (subset.empty()) fail(ErrorCode::kSubsetOutOfRange, "empty feature subset");
  std::set<std::size_t> distinct;
  for (const auto s : subset) {
    if (s >= data.n_cols || !distinct.insert(s).second) {
      fail(ErrorCode::kSubsetOutOfRange,
           "subset index " + std::to_string(s) + " invalid or repeated");
    }
  }
  if (sample_cap == 0) fail(ErrorCode::kInvalidArgument, "sample_cap must be >= 1");

  PdFunction pd;
  pd.subset.assign(subset.begin(), subset.end());
  pd.instances = pd_sample(data.n_rows, sample_cap, seed);
  const std::size_t m = pd.instances.size();
  const DesignMatrix background = data.take_rows(pd.instances);

  pd.grid.resize(m);
  pd.values.resize(m);
  DesignMatrix batch = background;
  for (std::size_t i = 0; i < m; ++i) {
    auto& point = pd.grid[i];
    for (const auto s : subset) point.push_back(data.at(pd.instances[i], s));
    for (std::size_t l = 0; l < m; ++l) {
      for (std::size_t t = 0; t < subset.size(); ++t) {
        batch.at(l, subset[t]) = point[t];
      }
    }
    const auto scores = model.predict_score(batch);
    double acc = 0.0;
    for (const double v : scores) acc += v;
    pd.values[i] = acc / static_cast<double>(m);
  }
  const double centre = mean(pd.values);
  for (auto& v : pd.values) v -= centre;
  return pd;
}

std::string_view interaction_method_name(InteractionMethod method) {
  switch (method) {
    case InteractionMethod::kHStatistic: return "h";
    case InteractionMethod::kMutualInformation: return "mi";
    case InteractionMethod::kPearson: return "pearson";
    case InteractionMethod::kCosine: return "cosine";
  }
  return "unknown";
}

InteractionMethod parse_interaction_method(std::string_view text) {
  if (text == "h" || text == "h_statistic") return InteractionMethod::kHStatistic;
  if (text == "mi" || text == "mutual_information") {
    return InteractionMethod::kMutualInformation;
  }
  if (text == "pearson") return InteractionMethod::kPearson;
  if (text == "cosine") return InteractionMethod::kCosine;
  fail(ErrorCode::kInvalidConfig,
       "unknown interaction method '" + std::string(text) + "'");
}

InteractionScore h_statistic_pair(const ScoringModel& model,
                                  const DesignMatrix& data, std::size_t j,
                                  std::size_t k, std::size_t sample_cap,
                                  std::uint64_t seed) {
  if (j == k) fail(ErrorCode::kInvalidArgument, "H-statistic needs j != k");
  if (j >= data.n_cols || k >= data.n_cols) {
    fail(ErrorCode::kSubsetOutOfRange, "H-statistic index out of range");
  }
  const std::size_t pair[] = {j, k};
  const std::size_t only_j[] = {j};
  const std::size_t only_k[] = {k};
  const auto pd_jk = partial_dependence(model, data, pair, sample_cap, seed);
  const auto pd_j = partial_dependence(model, data, only_j, sample_cap, seed);
  const auto pd_k = partial_dependence(model, data, only_k, sample_cap, seed);

  double numerator = 0.0;
  double denominator = 0.0;
  for (std::size_t i = 0; i < pd_jk.values.size(); ++i) {
    const double residual = pd_jk.values[i] - pd_j.values[i] - pd_k.values[i];
    numerator += residual * residual;
    denominator += pd_jk.values[i] * pd_jk.values[i];
  }
  InteractionScore score;
  score.j = j;
  score.k = k;
  score.method = InteractionMethod::kHStatistic;
  const double m = static_cast<double>(pd_jk.values.size());
  if (denominator <= kDegenerateMeanSquare * m) {
    score.degenerate = true;
    return score;
  }
  score.raw = std::sqrt(numerator / denominator);
  score.value = std::clamp(score.raw, 0.0, 1.0);
  return score;
}

std::vector<std::size_t> parent_columns(const FeatureTable& table,
                                        std::size_t column_index) {
  const auto& column = table.column(column_index);
  if (column.is_original()) return {column_index};
  std::vector<std::size_t> parents;
  for (const auto& child : column.lineage()->children()) {
    const auto found = table.find(render_lineage(*child));
    if (found.has_value() &&
        std::find(parents.begin(), parents.end(), *found) == parents.end()) {
      parents.push_back(*found);
    }
  }
  if (parents.empty()) parents.push_back(column_index);
  return parents;
}

double h_statistic_with_parents(const ScoringModel& model,
                                const FeatureTable& table, std::size_t f1,
                                std::size_t f2, std::size_t sample_cap,
                                std::uint64_t seed) {
  if (f1 >= table.n_cols() || f2 >= table.n_cols()) {
    fail(ErrorCode::kSubsetOutOfRange, "feature index out of range");
  }
  const DesignMatrix data = design_matrix(table);
  const auto parents1 = parent_columns(table, f1);
  const auto parents2 = parent_columns(table, f2);
  double best = 0.0;
  for (const auto a : parents1) {
    for (const auto b : parents2) {
      if (a == b) continue;
      best = std::max(best,
                      h_statistic_pair(model, data, a, b, sample_cap, seed).value);
    }
  }
  return best;
}

std::vector<int> discretize(std::span<const double> values, FeatureKind kind,
                            int bins) {
  const std::size_t n = values.size();
  std::vector<int> codes(n, 0);
  if (kind == FeatureKind::kCategorical) {
    for (std::size_t i = 0; i < n; ++i) codes[i] = static_cast<int>(values[i]);
    return codes;
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });
  std::size_t distinct = 0;
  for (std::size_t r = 0; r < n; ++r) {
    if (r == 0 || values[order[r]] != values[order[r - 1]]) ++distinct;
  }
  const bool one_per_value = distinct <= static_cast<std::size_t>(bins);
  int run_code = -1;
  int last_bin = -1;
  int next_code = -1;
  for (std::size_t r = 0; r < n; ++r) {
    const bool new_run = r == 0 || values[order[r]] != values[order[r - 1]];
    if (new_run) {
      if (one_per_value) {
        run_code = ++next_code;
      } else {
        const int bin = static_cast<int>(r * static_cast<std::size_t>(bins) / n);
        if (bin != last_bin) {
          last_bin = bin;
          ++next_code;
        }
        run_code = next_code;
      }
    }
    codes[order[r]] = run_code;
  }
  return codes;
}

double mutual_information(std::span<const double> a, FeatureKind kind_a,
                          std::span<const double> b, FeatureKind kind_b,
                          int bins) {
  if (a.size() != b.size()) {
    fail(ErrorCode::kLengthMismatch, "mutual_information: length mismatch");
  }
  if (bins < 2) fail(ErrorCode::kInvalidArgument, "mutual_information: bins < 2");
  if (a.empty()) return 0.0;
  const auto ca = discretize(a, kind_a, bins);
  const auto cb = discretize(b, kind_b, bins);
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> marginal_a, marginal_b;
  for (std::size_t i = 0; i < ca.size(); ++i) {
    joint[{ca[i], cb[i]}] += 1.0;
    marginal_a[ca[i]] += 1.0;
    marginal_b[cb[i]] += 1.0;
  }
  const double n = static_cast<double>(ca.size());
  double mi = 0.0;
  for (const auto& [cell, count] : joint) {
    mi += count / n *
          std::log(n * count / (marginal_a[cell.first] * marginal_b[cell.second]));
  }
  return std::max(0.0, mi);
}

double mutual_information(const FeatureColumn& f, const FeatureColumn& g,
                          int bins) {
  return mutual_information(f.values(), f.kind(), g.values(), g.kind(), bins);
}

double mutual_information(const FeatureColumn& f, const TargetColumn& y,
                          int bins) {
  return mutual_information(f.values(), f.kind(), y.values(), target_kind(y),
                            bins);
}

double abs_pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) fail(ErrorCode::kLengthMismatch, "pearson: length mismatch");
  const double ma = mean(a);
  const double mb = mean(b);
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cov += (a[i] - ma) * (b[i] - mb);
    va += (a[i] - ma) * (a[i] - ma);
    vb += (b[i] - mb) * (b[i] - mb);
  }
  if (va <= 0 || vb <= 0) return 0.0;
  return std::clamp(std::abs(cov) / std::sqrt(va * vb), 0.0, 1.0);
}

double abs_cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) fail(ErrorCode::kLengthMismatch, "cosine: length mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na <= 0 || nb <= 0) return 0.0;
  return std::clamp(std::abs(dot) / std::sqrt(na * nb), 0.0, 1.0);
}

double ablation_utility(std::span<const FeatureColumn* const> selected,
                        const TargetColumn& y, InteractionMethod method,
                        int bins) {
  if (selected.empty()) fail(ErrorCode::kEmptySelection, "no features selected");
  const auto score = [&](std::span<const double> a, FeatureKind ka,
                         std::span<const double> b, FeatureKind kb) {
    switch (method) {
      case InteractionMethod::kMutualInformation:
        return mutual_information(a, ka, b, kb, bins);
      case InteractionMethod::kPearson: return abs_pearson(a, b);
      case InteractionMethod::kCosine: return abs_cosine(a, b);
      case InteractionMethod::kHStatistic: break;
    }
    fail(ErrorCode::kInvalidArgument,
         "ablation utility needs mi, pearson or cosine");
  };
  const double size = static_cast<double>(selected.size());
  double redundancy = 0.0;
  for (const FeatureColumn* fi : selected) {
    for (const FeatureColumn* fj : selected) {
      redundancy += score(fi->values(), fi->kind(), fj->values(), fj->kind());
    }
  }
  double relevance = 0.0;
  for (const FeatureColumn* f : selected) {
    relevance += score(f->values(), f->kind(), y.values(), target_kind(y));
  }
  return -redundancy / (size * size) + relevance / size;
}

}  // namespace featrecon
