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

#include "parcur/unicode.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "parcur/error.hpp"

namespace parcur::unicode {

namespace {

const icu::Normalizer2& nfc_instance() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || n == nullptr) {
    throw Error(ErrorCode::kInternal, std::string("ICU NFC unavailable: ") + u_errorName(status));
  }
  return *n;
}

icu::UnicodeString from_utf8(std::string_view utf8) {
  // fromUTF8 silently substitutes U+FFFD, so validate first.
  to_code_points(utf8);
  return icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), int32_t(utf8.size())));
}

}  // namespace

std::u32string to_code_points(std::string_view utf8) {
  std::u32string out;
  out.reserve(utf8.size());
  const auto* s = reinterpret_cast<const uint8_t*>(utf8.data());
  const auto length = int32_t(utf8.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "malformed UTF-8 at byte " + std::to_string(i - 1));
    }
    out.push_back(char32_t(c));
  }
  return out;
}

std::string to_utf8(std::u32string_view code_points) {
  std::string out;
  out.reserve(code_points.size());
  for (char32_t c : code_points) {
    uint8_t buf[U8_MAX_LENGTH];
    int32_t n = 0;
    UBool error = false;
    U8_APPEND(buf, n, U8_MAX_LENGTH, UChar32(c), error);
    if (error) throw Error(ErrorCode::kInvalidArgument, "invalid code point");
    out.append(reinterpret_cast<const char*>(buf), std::size_t(n));
  }
  return out;
}

std::string nfc(std::string_view utf8) {
  const icu::Normalizer2& n = nfc_instance();
  const icu::UnicodeString in = from_utf8(utf8);
  UErrorCode status = U_ZERO_ERROR;
  if (n.isNormalized(in, status) && U_SUCCESS(status)) return std::string(utf8);
  status = U_ZERO_ERROR;
  const icu::UnicodeString normalized = n.normalize(in, status);
  if (U_FAILURE(status)) {
    throw Error(ErrorCode::kInternal, std::string("NFC failed: ") + u_errorName(status));
  }
  std::string out;
  normalized.toUTF8String(out);
  return out;
}

bool is_nfc(std::string_view utf8) {
  UErrorCode status = U_ZERO_ERROR;
  const bool ok = nfc_instance().isNormalized(from_utf8(utf8), status);
  return U_SUCCESS(status) && ok;
}

bool is_word_separator(char32_t c) noexcept {
  const auto cp = UChar32(c);
  if (u_isUWhiteSpace(cp)) return true;
  const auto mask = U_GET_GC_MASK(cp);
  return (mask & (U_GC_P_MASK | U_GC_Z_MASK)) != 0;
}

}  // namespace parcur::unicode
