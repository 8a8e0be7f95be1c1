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

#include "featrecon/error.h"

namespace featrecon {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMissingTarget: return "MissingTarget";
    case ErrorCode::kUnparsableCell: return "UnparsableCell";
    case ErrorCode::kMissingValue: return "MissingValue";
    case ErrorCode::kEmptyTable: return "EmptyTable";
    case ErrorCode::kDuplicateColumn: return "DuplicateColumn";
    case ErrorCode::kSingleClassTarget: return "SingleClassTarget";
    case ErrorCode::kInvalidPair: return "InvalidPair";
    case ErrorCode::kArityMismatch: return "ArityMismatch";
    case ErrorCode::kRowCountMismatch: return "RowCountMismatch";
    case ErrorCode::kEmptyFeatureSet: return "EmptyFeatureSet";
    case ErrorCode::kModelNotTrained: return "ModelNotTrained";
    case ErrorCode::kSubsetOutOfRange: return "SubsetOutOfRange";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kEmptySelection: return "EmptySelection";
    case ErrorCode::kStratificationImpossible: return "StratificationImpossible";
    case ErrorCode::kSchemaMismatch: return "SchemaMismatch";
    case ErrorCode::kLayoutMismatch: return "LayoutMismatch";
    case ErrorCode::kNoCandidates: return "NoCandidates";
    case ErrorCode::kEmptyBatch: return "EmptyBatch";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

ErrorClass error_class(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidConfig:
      return ErrorClass::kConfig;
    case ErrorCode::kMissingTarget:
    case ErrorCode::kUnparsableCell:
    case ErrorCode::kMissingValue:
    case ErrorCode::kEmptyTable:
    case ErrorCode::kDuplicateColumn:
    case ErrorCode::kSingleClassTarget:
    case ErrorCode::kStratificationImpossible:
      return ErrorClass::kData;
    default:
      return ErrorClass::kRuntime;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
      code_(code) {}

void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace featrecon
