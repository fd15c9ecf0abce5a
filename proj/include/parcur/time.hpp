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

#include <chrono>
#include <string>
#include <string_view>

namespace parcur {

/// Wall-clock instants are whole seconds, UTC.
using Timestamp = std::chrono::sys_seconds;

Timestamp now_utc();

/// `YYYY-MM-DDTHH:MM:SSZ`.
std::string format_rfc3339(Timestamp t);

/// Accepts `YYYY-MM-DDTHH:MM:SS[.frac](Z|+hh:mm|-hh:mm)`; fractional seconds
/// are truncated. Throws Error(kInvalidArgument) on anything else.
Timestamp parse_rfc3339(std::string_view text);

/// `YYYY-MM` of the UTC calendar month containing `t`.
std::string month_of(Timestamp t);

}  // namespace parcur
