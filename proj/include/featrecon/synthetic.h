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

// Synthetic datasets with planted structure, used by tests and the `gen`
// subcommand.

#ifndef FEATRECON_SYNTHETIC_H_
#define FEATRECON_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "featrecon/kinds.h"
#include "featrecon/tabular.h"

namespace featrecon {

enum class SyntheticKind { kProductSignal, kAdditiveSignal, kGroupSignal };

std::string_view synthetic_kind_name(SyntheticKind kind);
SyntheticKind parse_synthetic_kind(std::string_view text);
Task synthetic_task(SyntheticKind kind);

inline constexpr std::size_t kMinSyntheticRows = 50;
inline constexpr const char* kSyntheticTarget = "y";

// CSV text with header. Columns: x1, x2 (g, x1 for group_signal), then
// noise1..noiseK, then y.
//   product_signal:  y = 1[x1 * x2 > median(x1 * x2)], x1, x2 ~ U(-1, 1).
//   additive_signal: y = x1 + x2 + 0.1 * N(0, 1).
//   group_signal:    g in {g0..g3}, x1 = U(-1, 1) + mu_g,
//                    y = 2 * mean(x1 | g) + 0.1 * N(0, 1).
std::string synthetic_csv(SyntheticKind kind, std::size_t rows,
                          std::size_t noise_features, std::uint64_t seed);

void write_synthetic(const std::string& path, SyntheticKind kind,
                     std::size_t rows, std::size_t noise_features,
                     std::uint64_t seed);

FeatureTable synthetic_table(SyntheticKind kind, std::size_t rows,
                             std::size_t noise_features, std::uint64_t seed,
                             int cat_threshold = kDefaultCatThreshold);

}  // namespace featrecon

#endif  // FEATRECON_SYNTHETIC_H_
