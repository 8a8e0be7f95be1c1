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

#include "featrecon/staterep.h"

#include <cmath>

#include "featrecon/error.h"
#include "featrecon/ops.h"
#include "featrecon/stats.h"

namespace featrecon {
namespace {

StateVector encode(std::span<const FeatureColumn* const> columns, RepKind kind,
                   const RepOptions& options) {
  if (columns.empty()) {
    fail(ErrorCode::kEmptyFeatureSet, "cannot represent an empty feature set");
  }
  // Step 1: per-column statistics, stored statistic-major so that step 2 can
  // read each statistic across columns contiguously.
  std::array<std::vector<double>, kNumDescriptiveStats> per_stat;
  for (auto& dim : per_stat) dim.reserve(columns.size());
  for (const FeatureColumn* column : columns) {
    if (column->size() == 0) {
      fail(ErrorCode::kEmptyFeatureSet, "column '" + column->name() + "' is empty");
    }
    const auto stats = describe(column->values());
    for (std::size_t s = 0; s < kNumDescriptiveStats; ++s) {
      per_stat[s].push_back(stats[s]);
    }
  }
  // Step 2: the same statistics down each step-1 dimension.
  StateVector out;
  out.kind = kind;
  out.values.resize(kSetRepSize);
  for (std::size_t outer = 0; outer < kNumDescriptiveStats; ++outer) {
    const auto stats = describe(per_stat[outer]);
    for (std::size_t inner = 0; inner < kNumDescriptiveStats; ++inner) {
      out.values[inner * kNumDescriptiveStats + outer] = stats[inner];
    }
  }
  if (options.z_normalize) {
    const double m = mean(out.values);
    const double s = population_std(out.values);
    for (auto& v : out.values) v = s > 0 ? (v - m) / s : 0.0;
  }
  return out;
}

}  // namespace

StateVector rep_featureset(std::span<const FeatureColumn* const> columns,
                           const RepOptions& options) {
  return encode(columns, RepKind::kSetRep, options);
}

StateVector rep_featureset(const FeatureTable& table, const RepOptions& options) {
  std::vector<const FeatureColumn*> columns;
  columns.reserve(table.n_cols());
  for (const auto& column : table.columns()) columns.push_back(column.get());
  return encode(columns, RepKind::kSetRep, options);
}

StateVector rep_feature(const FeatureColumn& column, const RepOptions& options) {
  const FeatureColumn* single[] = {&column};
  return encode(single, RepKind::kFeatureRep, options);
}

StateVector rep_operation(OpId op) {
  return StateVector{RepKind::kOpRep, one_hot(op)};
}

StateVector compose_state(std::span<const StateVector> parts) {
  if (parts.empty()) {
    fail(ErrorCode::kInvalidArgument, "compose_state needs at least one part");
  }
  StateVector out;
  out.kind = RepKind::kComposite;
  for (const auto& part : parts) {
    out.values.insert(out.values.end(), part.values.begin(), part.values.end());
  }
  return out;
}

StateVector compose_state(std::initializer_list<StateVector> parts) {
  return compose_state(std::span<const StateVector>(parts.begin(), parts.size()));
}

}  // namespace featrecon
