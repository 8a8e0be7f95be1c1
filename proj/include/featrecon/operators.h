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

// The frozen operator roster (version 1). Index order is the one-hot order
// used by the operation agent, so never reorder entries.

#ifndef FEATRECON_OPERATORS_H_
#define FEATRECON_OPERATORS_H_

#include <array>
#include <optional>
#include <span>
#include <string_view>

#include "featrecon/kinds.h"

namespace featrecon {

enum class OpId : int {
  // Unary numerical -> numerical.
  kAbs = 0,
  kSquare,
  kCube,
  kSqrtSafe,
  kLogSafe,
  kReciprocalSafe,
  kExpSafe,
  kSin,
  kCos,
  kTanh,
  kSigmoid,
  kRound,
  kZscore,
  kMinmax,
  // Unary categorical -> numerical.
  kFreq,
  // Binary (numerical, numerical) -> numerical.
  kAdd,
  kSub,
  kMul,
  kDivSafe,
  // Binary (categorical, categorical) -> categorical.
  kCombine,
  // Binary (categorical, numerical) -> numerical. Group key comes first.
  kGroupbyThenMin,
  kGroupbyThenMax,
  kGroupbyThenMean,
  kGroupbyThenMedian,
  kGroupbyThenStd,
  kGroupbyThenSum,
};

inline constexpr int kNumOperators = 26;
inline constexpr int kOperatorRosterVersion = 1;

struct OperationSpec {
  OpId id;
  std::string_view name;
  int arity;
  FeatureKind arg0;
  // Only meaningful when arity == 2.
  FeatureKind arg1;
  FeatureKind out;
};

std::span<const OperationSpec> operator_table();

const OperationSpec& op_spec(OpId op);

constexpr int op_index(OpId op) { return static_cast<int>(op); }

std::string_view op_name(OpId op);

std::optional<OpId> op_from_name(std::string_view name);

inline bool is_unary(OpId op) { return op_spec(op).arity == 1; }

}  // namespace featrecon

#endif  // FEATRECON_OPERATORS_H_
