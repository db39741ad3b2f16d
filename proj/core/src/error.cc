// Copyright 2026 The Externet Authors
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

#include "externet/error.h"

namespace externet {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput:
      return "invalid-input";
    case ErrorCode::kDomain:
      return "domain";
    case ErrorCode::kUnsupportedFamily:
      return "unsupported-family";
    case ErrorCode::kUnsupportedRegime:
      return "unsupported-regime";
    case ErrorCode::kUnsupportedDegree:
      return "unsupported-degree";
    case ErrorCode::kSizeLimit:
      return "size-limit";
    case ErrorCode::kIo:
      return "io";
  }
  return "unknown";
}

}  // namespace externet
