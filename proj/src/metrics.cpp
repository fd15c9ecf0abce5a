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

#include "parcur/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "parcur/align.hpp"
#include "parcur/error.hpp"
#include "parcur/unicode.hpp"

namespace parcur::metrics {

std::string RoundStats::round_label() const {
  return "v" + std::to_string(fromVersion) + "->v" + std::to_string(fromVersion + 1);
}

RoundStats round_stats(std::span<const VersionPair> log, int fromVersion) {
  if (log.empty()) throw Error(ErrorCode::kInvalidArgument, "empty copyedit log");
  RoundStats s;
  s.fromVersion = fromVersion;
  s.segmentCount = log.size();
  std::vector<double> edited;
  for (const auto& [before, after] : log) {
    const std::size_t d = align::edit_distance(before, after);
    if (d > 0) edited.push_back(double(d));
  }
  // Sorting fixes the summation order, so results do not depend on log order.
  std::sort(edited.begin(), edited.end());
  s.editedCount = edited.size();
  s.editedFraction = double(edited.size()) / double(log.size());
  if (edited.empty()) return s;
  double sum = 0;
  for (double d : edited) sum += d;
  s.meanEditDistance = sum / double(edited.size());
  if (edited.size() > 1) {
    double squares = 0;
    for (double d : edited) squares += (d - s.meanEditDistance) * (d - s.meanEditDistance);
    const double sd = std::sqrt(squares / double(edited.size() - 1));
    s.stdErrEditDistance = sd / std::sqrt(double(edited.size()));
  }
  return s;
}

std::string format_percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.0f%%", fraction * 100.0);
  return buf;
}

std::string format_mean_se(double mean, double se) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f ± %.2f", mean, se);
  return buf;
}

std::string format_round(const RoundStats& stats) {
  return format_percent(stats.editedFraction) + " / " +
         format_mean_se(stats.meanEditDistance, stats.stdErrEditDistance);
}

std::size_t word_count(std::string_view text, [[maybe_unused]] const LanguageTag& language) {
  std::size_t words = 0;
  bool inWord = false;
  for (char32_t c : unicode::to_code_points(text)) {
    if (unicode::is_word_separator(c)) {
      inWord = false;
    } else if (!inWord) {
      inWord = true;
      ++words;
    }
  }
  return words;
}

std::vector<FileSummary> corpus_summary(const std::filesystem::path& exportDir,
                                        std::string_view corpus) {
  const auto dir = exportDir / std::string(corpus);
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::kNotFound, "no export at " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  std::vector<FileSummary> out;
  for (const auto& file : files) {
    const std::string name = file.filename().string();
    const std::string code = name.substr(0, name.find('.'));
    if (!LanguageTag::is_valid(code)) continue;
    const auto tag = LanguageTag::parse(code);
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error(ErrorCode::kIo, "cannot read " + file.string());
    FileSummary summary{std::string(corpus) + "/" + name, 0, 0};
    std::string line;
    while (std::getline(in, line)) {
      ++summary.lines;
      summary.words += word_count(line, tag);
    }
    out.push_back(std::move(summary));
  }
  return out;
}

}  // namespace parcur::metrics
