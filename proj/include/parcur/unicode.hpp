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

#include <string>
#include <string_view>

namespace parcur::unicode {

/// Canonical Decomposition followed by Canonical Composition of UTF-8 text.
/// Throws Error(kInvalidArgument) if `utf8` is not well-formed.
std::string nfc(std::string_view utf8);

bool is_nfc(std::string_view utf8);

/// Decodes well-formed UTF-8 into code points.
std::u32string to_code_points(std::string_view utf8);

std::string to_utf8(std::u32string_view code_points);

/// White_Space characters and every code point of general category P* or Z*.
bool is_word_separator(char32_t c) noexcept;

}  // namespace parcur::unicode
