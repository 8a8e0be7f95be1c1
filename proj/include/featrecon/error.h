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

#ifndef FEATRECON_ERROR_H_
#define FEATRECON_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace featrecon {

enum class ErrorCode {
  // Data ingestion.
  kMissingTarget,
  kUnparsableCell,
  kMissingValue,
  kEmptyTable,
  kDuplicateColumn,
  kSingleClassTarget,
  // Operators.
  kInvalidPair,
  kArityMismatch,
  kRowCountMismatch,
  // Scoring and learning.
  kEmptyFeatureSet,
  kModelNotTrained,
  kSubsetOutOfRange,
  kLengthMismatch,
  kEmptySelection,
  kStratificationImpossible,
  kSchemaMismatch,
  // Agents.
  kLayoutMismatch,
  kNoCandidates,
  kEmptyBatch,
  // Orchestration.
  kInvalidConfig,
  kIoFailure,
  kInvalidArgument,
};

std::string_view error_code_name(ErrorCode code);

// Coarse grouping used to map failures onto process exit codes.
enum class ErrorClass { kConfig, kData, kRuntime };

ErrorClass error_class(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace featrecon

#endif  // FEATRECON_ERROR_H_
