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

#ifndef MODCPG_ERROR_H_
#define MODCPG_ERROR_H_

#include <stdexcept>
#include <string>

namespace modcpg {

enum class ErrorCode {
  kInvalidArgument,
  kNonConvergence,
  kDuplicateName,
  kUnknownName,
  kDimensionMismatch,
  kVersionMismatch,
  kParse,
  kIo,
  kNonFinite,
  kConfig,
  kRuntime,
};

const char* ErrorCodeName(ErrorCode code);

// Every failure inside the library is raised as an Error; the C API maps the
// code onto a status value.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace modcpg

#endif  // MODCPG_ERROR_H_
