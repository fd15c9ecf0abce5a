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

#include "parcur/time.hpp"

#include <cstdio>

#include "parcur/error.hpp"

namespace parcur {

namespace {

using namespace std::chrono;

int digits(std::string_view s, std::size_t pos, std::size_t n, std::string_view whole) {
  if (pos + n > s.size()) {
    throw Error(ErrorCode::kInvalidArgument, "truncated timestamp: " + std::string(whole));
  }
  int v = 0;
  for (std::size_t i = pos; i < pos + n; ++i) {
    if (s[i] < '0' || s[i] > '9') {
      throw Error(ErrorCode::kInvalidArgument, "bad timestamp: " + std::string(whole));
    }
    v = v * 10 + (s[i] - '0');
  }
  return v;
}

void expect(std::string_view s, std::size_t pos, char c) {
  if (pos >= s.size() || s[pos] != c) {
    throw Error(ErrorCode::kInvalidArgument, "bad timestamp: " + std::string(s));
  }
}

}  // namespace

Timestamp now_utc() { return floor<seconds>(system_clock::now()); }

std::string format_rfc3339(Timestamp t) {
  const auto day = floor<days>(t);
  const year_month_day ymd{day};
  const hh_mm_ss hms{t - day};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", int(ymd.year()),
                unsigned(ymd.month()), unsigned(ymd.day()), int(hms.hours().count()),
                int(hms.minutes().count()), int(hms.seconds().count()));
  return buf;
}

Timestamp parse_rfc3339(std::string_view s) {
  const int y = digits(s, 0, 4, s);
  expect(s, 4, '-');
  const int mo = digits(s, 5, 2, s);
  expect(s, 7, '-');
  const int d = digits(s, 8, 2, s);
  if (s.size() <= 10 || (s[10] != 'T' && s[10] != 't')) {
    throw Error(ErrorCode::kInvalidArgument, "bad timestamp: " + std::string(s));
  }
  const int h = digits(s, 11, 2, s);
  expect(s, 13, ':');
  const int mi = digits(s, 14, 2, s);
  expect(s, 16, ':');
  const int sec = digits(s, 17, 2, s);
  std::size_t pos = 19;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    const std::size_t start = pos;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
    if (pos == start) throw Error(ErrorCode::kInvalidArgument, "bad timestamp: " + std::string(s));
  }
  seconds offset{0};
  if (pos < s.size() && (s[pos] == 'Z' || s[pos] == 'z')) {
    ++pos;
  } else if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
    const int sign = s[pos] == '+' ? 1 : -1;
    const int oh = digits(s, pos + 1, 2, s);
    expect(s, pos + 3, ':');
    const int om = digits(s, pos + 4, 2, s);
    offset = sign * (hours(oh) + minutes(om));
    pos += 6;
  } else {
    throw Error(ErrorCode::kInvalidArgument, "timestamp lacks a UTC offset: " + std::string(s));
  }
  if (pos != s.size()) {
    throw Error(ErrorCode::kInvalidArgument, "trailing characters in timestamp: " + std::string(s));
  }
  const year_month_day ymd{year(y), month(unsigned(mo)), day(unsigned(d))};
  if (!ymd.ok() || h > 23 || mi > 59 || sec > 60) {
    throw Error(ErrorCode::kInvalidArgument, "timestamp out of range: " + std::string(s));
  }
  return sys_days(ymd) + hours(h) + minutes(mi) + seconds(sec) - offset;
}

std::string month_of(Timestamp t) {
  const year_month_day ymd{floor<days>(t)};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u", int(ymd.year()), unsigned(ymd.month()));
  return buf;
}

}  // namespace parcur
