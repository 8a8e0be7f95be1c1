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

#include "featrecon/operators.h"

#include <string>

#include "featrecon/error.h"
#include "featrecon/kinds.h"

namespace featrecon {
namespace {

constexpr FeatureKind kNum = FeatureKind::kNumerical;
constexpr FeatureKind kCat = FeatureKind::kCategorical;

constexpr std::array<OperationSpec, kNumOperators> kTable = {{
    {OpId::kAbs, "abs", 1, kNum, kNum, kNum},
    {OpId::kSquare, "square", 1, kNum, kNum, kNum},
    {OpId::kCube, "cube", 1, kNum, kNum, kNum},
    {OpId::kSqrtSafe, "sqrt_safe", 1, kNum, kNum, kNum},
    {OpId::kLogSafe, "log_safe", 1, kNum, kNum, kNum},
    {OpId::kReciprocalSafe, "reciprocal_safe", 1, kNum, kNum, kNum},
    {OpId::kExpSafe, "exp_safe", 1, kNum, kNum, kNum},
    {OpId::kSin, "sin", 1, kNum, kNum, kNum},
    {OpId::kCos, "cos", 1, kNum, kNum, kNum},
    {OpId::kTanh, "tanh", 1, kNum, kNum, kNum},
    {OpId::kSigmoid, "sigmoid", 1, kNum, kNum, kNum},
    {OpId::kRound, "round", 1, kNum, kNum, kNum},
    {OpId::kZscore, "zscore", 1, kNum, kNum, kNum},
    {OpId::kMinmax, "minmax", 1, kNum, kNum, kNum},
    {OpId::kFreq, "freq", 1, kCat, kCat, kNum},
    {OpId::kAdd, "add", 2, kNum, kNum, kNum},
    {OpId::kSub, "sub", 2, kNum, kNum, kNum},
    {OpId::kMul, "mul", 2, kNum, kNum, kNum},
    {OpId::kDivSafe, "div_safe", 2, kNum, kNum, kNum},
    {OpId::kCombine, "combine", 2, kCat, kCat, kCat},
    {OpId::kGroupbyThenMin, "groupby_then_min", 2, kCat, kNum, kNum},
    {OpId::kGroupbyThenMax, "groupby_then_max", 2, kCat, kNum, kNum},
    {OpId::kGroupbyThenMean, "groupby_then_mean", 2, kCat, kNum, kNum},
    {OpId::kGroupbyThenMedian, "groupby_then_median", 2, kCat, kNum, kNum},
    {OpId::kGroupbyThenStd, "groupby_then_std", 2, kCat, kNum, kNum},
    {OpId::kGroupbyThenSum, "groupby_then_sum", 2, kCat, kNum, kNum},
}};

constexpr bool table_is_indexed() {
  for (int i = 0; i < kNumOperators; ++i) {
    if (static_cast<int>(kTable[i].id) != i) return false;
  }
  return true;
}
static_assert(table_is_indexed(), "operator table must be stored in id order");

}  // namespace

std::span<const OperationSpec> operator_table() { return kTable; }

const OperationSpec& op_spec(OpId op) {
  const int index = op_index(op);
  if (index < 0 || index >= kNumOperators) {
    fail(ErrorCode::kInvalidArgument,
         "operator id out of range: " + std::to_string(index));
  }
  return kTable[index];
}

std::string_view op_name(OpId op) { return op_spec(op).name; }

std::optional<OpId> op_from_name(std::string_view name) {
  for (const auto& spec : kTable) {
    if (spec.name == name) return spec.id;
  }
  return std::nullopt;
}

Task parse_task(std::string_view text) {
  if (text == "classification" || text == "cls") return Task::kClassification;
  if (text == "regression" || text == "reg") return Task::kRegression;
  fail(ErrorCode::kInvalidConfig, "unknown task '" + std::string(text) + "'");
}

}  // namespace featrecon
