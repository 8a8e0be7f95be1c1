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

// Partial dependence, pairwise H-statistics, mutual information and the
// alternative pairwise scorers (Pearson, cosine).

#ifndef FEATRECON_INTERACTION_H_
#define FEATRECON_INTERACTION_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "featrecon/learner.h"
#include "featrecon/tabular.h"

namespace featrecon {

inline constexpr std::size_t kDefaultSampleCap = 100;
inline constexpr int kDefaultMiBins = 10;
inline constexpr std::uint64_t kDefaultPdSeed = 0x5eed;

// Centered empirical partial dependence evaluated at the sampled instances.
struct PdFunction {
  std::vector<std::size_t> subset;
  // Row indices of the evaluation instances (also the background sample).
  std::vector<std::size_t> instances;
  // grid[i] holds the subset values of instance i.
  std::vector<std::vector<double>> grid;
  // Mean zero over the grid.
  std::vector<double> values;
};

// Rows used as both grid and background: all rows in order when
// sample_cap >= n, otherwise a seeded subsample without replacement (sorted).
std::vector<std::size_t> pd_sample(std::size_t n_rows, std::size_t sample_cap,
                                   std::uint64_t seed);

PdFunction partial_dependence(const ScoringModel& model, const DesignMatrix& data,
                              std::span<const std::size_t> subset,
                              std::size_t sample_cap = kDefaultSampleCap,
                              std::uint64_t seed = kDefaultPdSeed);

enum class InteractionMethod { kHStatistic, kMutualInformation, kPearson, kCosine };

std::string_view interaction_method_name(InteractionMethod method);
// Accepts h/h_statistic, mi/mutual_information, pearson, cosine.
InteractionMethod parse_interaction_method(std::string_view text);

struct InteractionScore {
  std::size_t j = 0;
  std::size_t k = 0;
  InteractionMethod method = InteractionMethod::kHStatistic;
  // In [0, 1] for the H-statistic; |r| for Pearson; |cos| for cosine.
  double value = 0.0;
  // sqrt of the unclamped ratio, for diagnostics.
  double raw = 0.0;
  // Joint partial dependence had no variance; value is 0.
  bool degenerate = false;
};

InteractionScore h_statistic_pair(const ScoringModel& model,
                                  const DesignMatrix& data, std::size_t j,
                                  std::size_t k,
                                  std::size_t sample_cap = kDefaultSampleCap,
                                  std::uint64_t seed = kDefaultPdSeed);

// Column indices standing in for `column_index` when scoring interactions:
// itself for original features, else its operand columns still present in
// `table` (itself if none survive).
std::vector<std::size_t> parent_columns(const FeatureTable& table,
                                        std::size_t column_index);

// Max H over the cross product of both parent sets, skipping identical pairs.
double h_statistic_with_parents(const ScoringModel& model,
                                const FeatureTable& table, std::size_t f1,
                                std::size_t f2,
                                std::size_t sample_cap = kDefaultSampleCap,
                                std::uint64_t seed = kDefaultPdSeed);

// Discrete codes for a variable: categorical values as-is, numerical values
// in equal-frequency bins (equal values always share a bin).
std::vector<int> discretize(std::span<const double> values, FeatureKind kind,
                            int bins);

// Plug-in mutual information in nats.
double mutual_information(std::span<const double> a, FeatureKind kind_a,
                          std::span<const double> b, FeatureKind kind_b,
                          int bins = kDefaultMiBins);
double mutual_information(const FeatureColumn& f, const FeatureColumn& g,
                          int bins = kDefaultMiBins);
double mutual_information(const FeatureColumn& f, const TargetColumn& y,
                          int bins = kDefaultMiBins);

// |Pearson correlation|; 0 when either side is constant.
double abs_pearson(std::span<const double> a, std::span<const double> b);
// |cosine similarity|; 0 when either side is the zero vector.
double abs_cosine(std::span<const double> a, std::span<const double> b);

// -(1/|F|^2) sum_ij score(f_i, f_j) + (1/|F|) sum_i score(f_i, y), with score
// one of mutual information, |Pearson| or |cosine|.
double ablation_utility(std::span<const FeatureColumn* const> selected,
                        const TargetColumn& y, InteractionMethod method,
                        int bins = kDefaultMiBins);

}  // namespace featrecon

#endif  // FEATRECON_INTERACTION_H_
