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

// Fixed-size encodings of feature sets, single features and operators.
//
// A feature set of any width maps to 49 reals: seven descriptive statistics
// (count, std, min, max, Q1, median, Q3) per column give an n_cols x 7 matrix;
// the same seven statistics taken down each of its seven columns give a 7 x 7
// matrix, flattened row-major (statistic-of-statistic major, column-dimension
// minor).

#ifndef FEATRECON_STATEREP_H_
#define FEATRECON_STATEREP_H_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "featrecon/operators.h"
#include "featrecon/tabular.h"

namespace featrecon {

inline constexpr std::size_t kNumDescriptiveStats = 7;
inline constexpr std::size_t kSetRepSize = 49;
inline constexpr std::size_t kOpRepSize = kNumOperators;

enum class RepKind { kSetRep, kFeatureRep, kOpRep, kComposite };

struct StateVector {
  RepKind kind = RepKind::kComposite;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
};

struct RepOptions {
  // Standardize the 49 entries to zero mean / unit variance (off by default).
  bool z_normalize = false;
};

StateVector rep_featureset(std::span<const FeatureColumn* const> columns,
                           const RepOptions& options = {});
StateVector rep_featureset(const FeatureTable& table,
                           const RepOptions& options = {});

StateVector rep_feature(const FeatureColumn& column,
                        const RepOptions& options = {});

StateVector rep_operation(OpId op);

StateVector compose_state(std::span<const StateVector> parts);
StateVector compose_state(std::initializer_list<StateVector> parts);

}  // namespace featrecon

#endif  // FEATRECON_STATEREP_H_
