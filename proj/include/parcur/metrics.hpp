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

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "parcur/model.hpp"

namespace parcur::metrics {

struct RoundStats {
  int fromVersion = 1;  // v1->v2 is {1}, v2->v3 is {2}, v3->v4 is {3}
  std::size_t segmentCount = 0;
  std::size_t editedCount = 0;
  double editedFraction = 0.0;
  /// Over edited segments only.
  double meanEditDistance = 0.0;
  double stdErrEditDistance = 0.0;

  std::string round_label() const;  // "v1->v2"
};

using VersionPair = std::pair<std::string, std::string>;

/// Throws Error(kInvalidArgument) on an empty log.
RoundStats round_stats(std::span<const VersionPair> log, int fromVersion = 1);

/// `83%`
std::string format_percent(double fraction);
/// `38.75 ± 1.55`
std::string format_mean_se(double mean, double se);
/// `83% / 38.75 ± 1.55`
std::string format_round(const RoundStats& stats);

/// Maximal runs of non-separator code points; separators are White_Space and
/// general categories P* and Z*, which covers Nko punctuation such as U+07F8.
std::size_t word_count(std::string_view text, const LanguageTag& language);

struct FileSummary {
  std::string file;  // `<corpus>/<name>` as written by export
  std::size_t lines = 0;
  std::size_t words = 0;
};

/// Lines and words of every exported file under `exportDir/<corpus>`, sorted
/// by file name. Throws Error(kNotFound) when the directory does not exist.
std::vector<FileSummary> corpus_summary(const std::filesystem::path& exportDir,
                                        std::string_view corpus);

}  // namespace parcur::metrics
