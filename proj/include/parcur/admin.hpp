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
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "parcur/corpus.hpp"
#include "parcur/metrics.hpp"
#include "parcur/model.hpp"

// Operator commands behind the admin CLI.
namespace parcur::admin {

/// Reads a text file as lines: CR before LF dropped, each line NFC.
/// Error(kFormat) on malformed UTF-8.
std::vector<std::string> read_lines(const std::filesystem::path& file);
/// Writes lines LF-terminated through a temporary file renamed into place.
void write_lines(const std::filesystem::path& file, const std::vector<std::string>& lines);

struct LoadOptions {
  std::string datasetId;
  std::filesystem::path dir;
  std::vector<LanguageTag> languageTags;
  std::string corpus;  // defaults to datasetId
  std::string split;
  bool replace = false;
};

/// Reads `<dir>/<tag>[.<split>]` for every tag. All files are validated
/// before anything is written.
std::size_t load_dataset(CorpusStore& store, const LoadOptions& options);

std::size_t create_workflows(CorpusStore& store, std::string_view datasetId,
                             const LanguageTag& targetLanguage, std::int64_t priorityStart);

struct DatasetReport {
  std::string datasetId;
  std::map<WorkflowStatus, std::size_t> workflows;
  std::map<TaskStatus, std::size_t> tasks;
};

std::vector<DatasetReport> system_report(const CorpusStore& store);
/// CSV `dataset,entity,status,count`, every status listed even when zero.
std::string render_system_report(const std::vector<DatasetReport>& report);

struct ExportOptions {
  std::string datasetId;
  std::filesystem::path outDir;
  bool withEdits = true;
  bool partial = false;
};

/// Writes source files, the final target file and (withEdits) the v1..v4
/// files under `<outDir>/<corpus>/`. Returns the paths written, sorted.
std::vector<std::filesystem::path> export_dataset(const CorpusStore& store,
                                                  const ExportOptions& options);

struct AccountingRow {
  std::string userId;
  std::string datasetId;
  std::string month;
  TaskType taskType = TaskType::kTranslation;
  std::size_t completedCount = 0;
};

/// Completed tasks by user, dataset, UTC month and type, for months in
/// [fromMonth, toMonth] (`YYYY-MM`, inclusive; empty = unbounded).
std::vector<AccountingRow> accounting_statements(const CorpusStore& store,
                                                 std::string_view fromMonth,
                                                 std::string_view toMonth);
std::string render_accounting_csv(const std::vector<AccountingRow>& rows);

struct DatasetStats {
  std::string datasetId;
  std::string corpus;
  std::size_t segments = 0;
  std::size_t words = 0;  // final target text
  /// v1->v2, v2->v3, v3->v4; nullopt when no segment reached that round.
  std::vector<std::optional<metrics::RoundStats>> rounds;
};

/// Copyedit statistics from the stored version history. Round r's
/// population is the segments that actually hold version r+1.
DatasetStats dataset_stats(const CorpusStore& store, std::string_view datasetId);
/// CSV `corpus,segments,words,round,pct_edited,mean_ed,se_ed`.
std::string render_stats_csv(const std::vector<DatasetStats>& stats);

}  // namespace parcur::admin
