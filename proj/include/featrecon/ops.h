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

#ifndef FEATRECON_OPS_H_
#define FEATRECON_OPS_H_

#include <optional>
#include <vector>

#include "featrecon/operators.h"
#include "featrecon/tabular.h"

namespace featrecon {

// Guard constant shared by the safe operators.
inline constexpr double kSafeEpsilon = 1e-6;
inline constexpr double kExpClamp = 50.0;
// Generated numerical values are clamped to +-kMagnitudeCap so that nested
// polynomial operators can never overflow to infinity.
inline constexpr double kMagnitudeCap = 1e100;

// True iff the kinds match the operator's signature exactly. Throws
// ArityMismatch when k2 is present for a unary op or missing for a binary op.
bool is_valid(OpId op, FeatureKind k1, std::optional<FeatureKind> k2 = std::nullopt);

// Whether argument `position` (0 or 1) of `op` accepts `kind`.
bool argument_accepts(OpId op, int position, FeatureKind kind);

// Applies `op`. `f2` must be null for unary operators.
FeatureColumn apply(OpId op, const FeatureColumn& f1,
                    const FeatureColumn* f2 = nullptr);

std::vector<double> one_hot(OpId op);

}  // namespace featrecon

#endif  // FEATRECON_OPS_H_
