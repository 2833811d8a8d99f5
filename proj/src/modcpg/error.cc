// Copyright 2026 The modcpg Authors
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

#include "modcpg/error.h"

namespace modcpg {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "invalid argument";
    case ErrorCode::kNonConvergence:
      return "non-convergence";
    case ErrorCode::kDuplicateName:
      return "duplicate name";
    case ErrorCode::kUnknownName:
      return "unknown name";
    case ErrorCode::kDimensionMismatch:
      return "dimension mismatch";
    case ErrorCode::kVersionMismatch:
      return "version mismatch";
    case ErrorCode::kParse:
      return "parse error";
    case ErrorCode::kIo:
      return "i/o error";
    case ErrorCode::kNonFinite:
      return "non-finite value";
    case ErrorCode::kConfig:
      return "config error";
    case ErrorCode::kRuntime:
      return "runtime failure";
  }
  return "unknown error";
}

}  // namespace modcpg
