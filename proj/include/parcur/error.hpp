// Copyright 2026 The parcur Authors
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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace parcur {

/// Failure categories shared by every module. The numeric values are part of
/// the C ABI (see parcur.h) and must not be renumbered.
enum class ErrorCode : int {
  kInvalidArgument = 1,
  kNotFound = 2,
  kConflict = 3,
  kProtocol = 4,
  kIntegrity = 5,
  kLeaseViolation = 6,
  kFormat = 7,
  kPrecondition = 8,
  kUnauthenticated = 9,
  kIo = 10,
  kInternal = 11,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace parcur
