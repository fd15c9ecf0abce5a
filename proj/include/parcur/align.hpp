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
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace parcur::align {

/// Character-level Levenshtein distance with unit costs.
std::size_t edit_distance(std::u32string_view a, std::u32string_view b);
/// UTF-8 overload; inputs are compared code point by code point.
std::size_t edit_distance(std::string_view a, std::string_view b);

/// Row-major matrix of non-negative integer costs.
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(std::size_t rows, std::size_t cols, std::int64_t fill = 0);
  /// Throws Error(kInvalidArgument) on ragged or negative input.
  static CostMatrix from_rows(const std::vector<std::vector<std::int64_t>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  std::int64_t& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  std::int64_t at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::int64_t> data_;
};

/// E[i][j] = edit_distance(variant[i], consensus[j]). Rows are spread over
/// `threads` workers (0 = hardware concurrency); the result does not depend
/// on the thread count.
CostMatrix build_cost_matrix(std::span<const std::string> variant,
                             std::span<const std::string> consensus, unsigned threads = 0);

struct AlignmentResult {
  /// Per row: the matched column, or nullopt.
  std::vector<std::optional<std::size_t>> assignment;
  std::int64_t totalCost = 0;
  std::vector<std::size_t> unmatchedRows;
  std::vector<std::size_t> unmatchedCols;

  std::size_t matched() const noexcept;
};

/// Minimum-cost injective matching of size min(rows, cols). Among optimal
/// matchings the lexicographically smallest row -> column map is returned,
/// with "unmatched" ordered after every column.
AlignmentResult solve_assignment(const CostMatrix& costs);

struct RealignReport {
  std::int64_t totalCost = 0;
  std::size_t matched = 0;
  /// (variant line, consensus line, cost) for each match, in consensus order.
  struct Match {
    std::size_t variantLine;
    std::size_t consensusLine;
    std::int64_t cost;
  };
  std::vector<Match> matches;
  /// Consensus positions with no partner; absent from the output.
  std::vector<std::size_t> droppedConsensusLines;
  /// Variant lines with no partner; discarded.
  std::vector<std::size_t> droppedVariantLines;
};

struct RealignResult {
  /// One entry per target file, each reordered into consensus order.
  std::vector<std::vector<std::string>> targets;
  RealignReport report;
};

/// Matches `variantRef` lines to `consensusRef` lines and reorders every
/// line-parallel target accordingly. All inputs must be NFC. Throws
/// Error(kFormat) when a target's length differs from `variantRef`.
RealignResult realign_corpus(std::span<const std::string> consensusRef,
                             std::span<const std::string> variantRef,
                             std::span<const std::vector<std::string>> variantTargets,
                             unsigned threads = 0);

/// CSV: `variant_line,consensus_line,cost` rows, a `total_cost,matched`
/// summary, and a `dropped_side,line` section. Line numbers are 1-based.
std::string render_report_csv(const RealignReport& report);

}  // namespace parcur::align
