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

#ifndef FEATRECON_KINDS_H_
#define FEATRECON_KINDS_H_

#include <string_view>

namespace featrecon {

enum class FeatureKind { kNumerical, kCategorical };

enum class Task { kClassification, kRegression };

constexpr std::string_view kind_name(FeatureKind kind) {
  return kind == FeatureKind::kNumerical ? "numerical" : "categorical";
}

constexpr std::string_view task_name(Task task) {
  return task == Task::kClassification ? "classification" : "regression";
}

// Accepts "classification"/"regression" and the short forms "cls"/"reg".
Task parse_task(std::string_view text);

}  // namespace featrecon

#endif  // FEATRECON_KINDS_H_
