// Copyright 2026 The skymr Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "skymr/common/error.hpp"

namespace skymr {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedInput: return "malformed-input";
    case ErrorCode::kOutOfRange: return "out-of-range";
    case ErrorCode::kInvalidConfig: return "invalid-config";
    case ErrorCode::kRecordTooLarge: return "record-too-large";
    case ErrorCode::kFetchError: return "fetch-error";
    case ErrorCode::kTaskFailed: return "task-failed";
    case ErrorCode::kPathExists: return "path-exists";
    case ErrorCode::kNotFound: return "not-found";
    case ErrorCode::kIoError: return "io-error";
    case ErrorCode::kIntegrity: return "integrity";
    case ErrorCode::kUnavailable: return "unavailable";
    case ErrorCode::kCodecFormat: return "codec-format";
    case ErrorCode::kUndefinedRatio: return "undefined-ratio";
    case ErrorCode::kParseError: return "parse-error";
    case ErrorCode::kWriteAfterClose: return "write-after-close";
  }
  return "unknown";
}

}  // namespace skymr
