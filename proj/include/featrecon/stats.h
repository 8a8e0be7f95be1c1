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

// Small numeric helpers shared across modules.

#ifndef FEATRECON_STATS_H_
#define FEATRECON_STATS_H_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace featrecon {

// Quantile of an ascending-sorted sample with linear interpolation between
// order statistics (h = (n - 1) p).
double sorted_quantile(std::span<const double> sorted, double p);

double mean(std::span<const double> values);

// Population standard deviation (divides by n).
double population_std(std::span<const double> values);

// count, std, min, max, Q1, Q2, Q3. All statistics are computed from a sorted
// copy so the result does not depend on input order.
std::array<double, 7> describe(std::span<const double> values);

// Derives an independent seed from a base seed and a stream index.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace featrecon

#endif  // FEATRECON_STATS_H_
