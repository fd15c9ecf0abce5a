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

#include "parcur/align.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <thread>

#include "parcur/error.hpp"
#include "parcur/unicode.hpp"

namespace parcur::align {

std::size_t edit_distance(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  if (b.empty()) return a.size();
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diagonal = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t above = row[j];
      const std::size_t substitute = diagonal + (a[i - 1] == b[j - 1] ? 0 : 1);
      row[j] = std::min({above + 1, row[j - 1] + 1, substitute});
      diagonal = above;
    }
  }
  return row[b.size()];
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  if (a == b) return 0;
  return edit_distance(unicode::to_code_points(a), unicode::to_code_points(b));
}

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols, std::int64_t fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

CostMatrix CostMatrix::from_rows(const std::vector<std::vector<std::int64_t>>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  CostMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw Error(ErrorCode::kInvalidArgument, "ragged cost matrix");
    for (std::size_t c = 0; c < cols; ++c) {
      if (rows[r][c] < 0) throw Error(ErrorCode::kInvalidArgument, "negative cost");
      m.at(r, c) = rows[r][c];
    }
  }
  return m;
}

CostMatrix build_cost_matrix(std::span<const std::string> variant,
                             std::span<const std::string> consensus, unsigned threads) {
  std::vector<std::u32string> rowsText, colsText;
  rowsText.reserve(variant.size());
  colsText.reserve(consensus.size());
  for (const auto& s : variant) rowsText.push_back(unicode::to_code_points(s));
  for (const auto& s : consensus) colsText.push_back(unicode::to_code_points(s));

  CostMatrix m(variant.size(), consensus.size());
  auto fill = [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      for (std::size_t c = 0; c < colsText.size(); ++c) {
        m.at(r, c) = std::int64_t(edit_distance(rowsText[r], colsText[c]));
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = unsigned(std::min<std::size_t>(threads, std::max<std::size_t>(1, variant.size() / 16)));
  if (threads <= 1) {
    fill(0, variant.size());
    return m;
  }
  std::vector<std::thread> workers;
  const std::size_t chunk = (variant.size() + threads - 1) / threads;
  for (std::size_t begin = 0; begin < variant.size(); begin += chunk) {
    workers.emplace_back(fill, begin, std::min(variant.size(), begin + chunk));
  }
  for (auto& t : workers) t.join();
  return m;
}

std::size_t AlignmentResult::matched() const noexcept {
  return std::size_t(std::count_if(assignment.begin(), assignment.end(),
                                   [](const auto& a) { return a.has_value(); }));
}

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Square assignment with zero-cost padding; keeps the final dual potentials so
// that optimal matchings can be characterized by their tight edges.
class SquareAssignment {
 public:
  explicit SquareAssignment(const CostMatrix& costs)
      : costs_(costs), n_(std::max(costs.rows(), costs.cols())) {
    solve();
  }

  std::int64_t cost(std::size_t r, std::size_t c) const {
    return (r < costs_.rows() && c < costs_.cols()) ? costs_.at(r, c) : 0;
  }
  bool tight(std::size_t r, std::size_t c) const {
    return cost(r, c) - u_[r + 1] - v_[c + 1] == 0;
  }

  /// Moves to the lexicographically smallest optimal matching over rows
  /// [0, fixRows), trying columns in ascending order.
  void make_lexicographic(std::size_t fixRows) {
    std::vector<char> fixed(n_, 0);
    std::vector<std::size_t> prevRow(n_);
    std::vector<char> seen(n_);
    for (std::size_t i = 0; i < fixRows; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        if (!tight(i, j)) continue;
        if (colOf_[i] == j) break;
        if (reroute(i, j, fixed, prevRow, seen)) break;
      }
      fixed[i] = 1;
    }
  }

  const std::vector<std::size_t>& col_of() const { return colOf_; }

 private:
  void solve() {
    const std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;
    u_.assign(n_ + 1, 0);
    v_.assign(n_ + 1, 0);
    std::vector<std::size_t> p(n_ + 1, 0), way(n_ + 1, 0);
    std::vector<std::int64_t> minv(n_ + 1);
    std::vector<char> used(n_ + 1);
    for (std::size_t i = 1; i <= n_; ++i) {
      p[0] = i;
      std::size_t j0 = 0;
      std::fill(minv.begin(), minv.end(), inf);
      std::fill(used.begin(), used.end(), 0);
      do {
        used[j0] = 1;
        const std::size_t i0 = p[j0];
        std::int64_t delta = inf;
        std::size_t j1 = 0;
        for (std::size_t j = 1; j <= n_; ++j) {
          if (used[j]) continue;
          const std::int64_t cur = cost(i0 - 1, j - 1) - u_[i0] - v_[j];
          if (cur < minv[j]) {
            minv[j] = cur;
            way[j] = j0;
          }
          if (minv[j] < delta) {
            delta = minv[j];
            j1 = j;
          }
        }
        for (std::size_t j = 0; j <= n_; ++j) {
          if (used[j]) {
            u_[p[j]] += delta;
            v_[j] -= delta;
          } else {
            minv[j] -= delta;
          }
        }
        j0 = j1;
      } while (p[j0] != 0);
      do {
        const std::size_t j1 = way[j0];
        p[j0] = p[j1];
        j0 = j1;
      } while (j0 != 0);
    }
    colOf_.assign(n_, kNone);
    rowOf_.assign(n_, kNone);
    for (std::size_t j = 1; j <= n_; ++j) {
      colOf_[p[j] - 1] = j - 1;
      rowOf_[j - 1] = p[j] - 1;
    }
  }

  // Looks for an alternating cycle through the tight edge (i, j) that avoids
  // fixed rows; applies it when found.
  bool reroute(std::size_t i, std::size_t j, const std::vector<char>& fixed,
               std::vector<std::size_t>& prevRow, std::vector<char>& seen) {
    const std::size_t start = rowOf_[j];
    const std::size_t goal = colOf_[i];
    if (fixed[start]) return false;
    std::fill(seen.begin(), seen.end(), 0);
    seen[j] = 1;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{start, 0}};
    bool found = false;
    while (!stack.empty() && !found) {
      auto& [row, next] = stack.back();
      if (next == n_) {
        stack.pop_back();
        continue;
      }
      const std::size_t k = next++;
      if (seen[k] || !tight(row, k)) continue;
      seen[k] = 1;
      prevRow[k] = row;
      if (k == goal) {
        found = true;
        break;
      }
      const std::size_t owner = rowOf_[k];
      if (owner == i || fixed[owner]) continue;
      stack.emplace_back(owner, 0);
    }
    if (!found) return false;
    std::vector<std::pair<std::size_t, std::size_t>> flips;
    for (std::size_t k = goal;;) {
      const std::size_t r = prevRow[k];
      flips.emplace_back(r, k);
      if (r == start) break;
      k = colOf_[r];
    }
    for (const auto& [r, k] : flips) {
      colOf_[r] = k;
      rowOf_[k] = r;
    }
    colOf_[i] = j;
    rowOf_[j] = i;
    return true;
  }

  const CostMatrix& costs_;
  std::size_t n_;
  std::vector<std::int64_t> u_, v_;
  std::vector<std::size_t> colOf_, rowOf_;
};

}  // namespace

AlignmentResult solve_assignment(const CostMatrix& costs) {
  AlignmentResult result;
  result.assignment.assign(costs.rows(), std::nullopt);
  if (costs.empty()) {
    for (std::size_t r = 0; r < costs.rows(); ++r) result.unmatchedRows.push_back(r);
    for (std::size_t c = 0; c < costs.cols(); ++c) result.unmatchedCols.push_back(c);
    return result;
  }
  for (std::size_t r = 0; r < costs.rows(); ++r) {
    for (std::size_t c = 0; c < costs.cols(); ++c) {
      if (costs.at(r, c) < 0) throw Error(ErrorCode::kInvalidArgument, "negative cost");
    }
  }
  SquareAssignment square(costs);
  square.make_lexicographic(costs.rows());
  std::vector<char> colUsed(costs.cols(), 0);
  for (std::size_t r = 0; r < costs.rows(); ++r) {
    const std::size_t c = square.col_of()[r];
    if (c < costs.cols()) {
      result.assignment[r] = c;
      result.totalCost += costs.at(r, c);
      colUsed[c] = 1;
    } else {
      result.unmatchedRows.push_back(r);
    }
  }
  for (std::size_t c = 0; c < costs.cols(); ++c) {
    if (!colUsed[c]) result.unmatchedCols.push_back(c);
  }
  return result;
}

RealignResult realign_corpus(std::span<const std::string> consensusRef,
                             std::span<const std::string> variantRef,
                             std::span<const std::vector<std::string>> variantTargets,
                             unsigned threads) {
  for (std::size_t t = 0; t < variantTargets.size(); ++t) {
    if (variantTargets[t].size() != variantRef.size()) {
      throw Error(ErrorCode::kFormat, "target " + std::to_string(t) + " has " +
                                          std::to_string(variantTargets[t].size()) +
                                          " lines but the reference has " +
                                          std::to_string(variantRef.size()));
    }
  }
  const CostMatrix costs = build_cost_matrix(variantRef, consensusRef, threads);
  const AlignmentResult m = solve_assignment(costs);

  std::vector<std::size_t> rowForCol(consensusRef.size(), kNone);
  for (std::size_t r = 0; r < m.assignment.size(); ++r) {
    if (m.assignment[r]) rowForCol[*m.assignment[r]] = r;
  }

  RealignResult out;
  out.targets.resize(variantTargets.size());
  out.report.totalCost = m.totalCost;
  out.report.droppedVariantLines = m.unmatchedRows;
  for (std::size_t c = 0; c < consensusRef.size(); ++c) {
    const std::size_t r = rowForCol[c];
    if (r == kNone) {
      out.report.droppedConsensusLines.push_back(c);
      continue;
    }
    out.report.matches.push_back({r, c, costs.at(r, c)});
    for (std::size_t t = 0; t < variantTargets.size(); ++t) {
      out.targets[t].push_back(variantTargets[t][r]);
    }
  }
  out.report.matched = out.report.matches.size();
  return out;
}

std::string render_report_csv(const RealignReport& report) {
  std::ostringstream out;
  out << "variant_line,consensus_line,cost\n";
  for (const auto& m : report.matches) {
    out << m.variantLine + 1 << ',' << m.consensusLine + 1 << ',' << m.cost << '\n';
  }
  out << "\ntotal_cost,matched\n" << report.totalCost << ',' << report.matched << '\n';
  out << "\ndropped_side,line\n";
  for (std::size_t c : report.droppedConsensusLines) out << "consensus," << c + 1 << '\n';
  for (std::size_t r : report.droppedVariantLines) out << "variant," << r + 1 << '\n';
  return out.str();
}

}  // namespace parcur::align
