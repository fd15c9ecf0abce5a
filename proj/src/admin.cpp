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

#include "parcur/admin.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "parcur/error.hpp"
#include "parcur/unicode.hpp"

namespace parcur::admin {

namespace {

namespace fs = std::filesystem;

bool valid_month(std::string_view m) {
  if (m.size() != 7 || m[4] != '-') return false;
  for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u}) {
    if (m[i] < '0' || m[i] > '9') return false;
  }
  const int month = (m[5] - '0') * 10 + (m[6] - '0');
  return month >= 1 && month <= 12;
}

std::string file_name(const LanguageTag& tag, std::string_view split, int version = 0) {
  std::string name = tag.code();
  if (!split.empty()) name += "." + std::string(split);
  if (version > 0) name += ".v" + std::to_string(version);
  return name;
}

DatasetManifest require_manifest(const CorpusStore& store, std::string_view datasetId) {
  auto manifest = store.get_manifest(datasetId);
  if (!manifest) throw Error(ErrorCode::kNotFound, "unknown dataset: " + std::string(datasetId));
  return *manifest;
}

std::string dataset_prefix(std::string_view datasetId) { return std::string(datasetId) + "/"; }

}  // namespace

std::vector<std::string> read_lines(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::kNotFound, "cannot read " + file.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    try {
      lines.push_back(unicode::nfc(line));
    } catch (const Error& e) {
      throw Error(ErrorCode::kFormat, file.string() + " line " + std::to_string(lines.size() + 1) +
                                          ": " + e.what());
    }
  }
  return lines;
}

void write_lines(const std::filesystem::path& file, const std::vector<std::string>& lines) {
  const fs::path tmp = file.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    for (const auto& l : lines) out << l << '\n';
    out.flush();
    if (!out) throw Error(ErrorCode::kIo, "short write to " + tmp.string());
  }
  fs::rename(tmp, file);
}

std::size_t load_dataset(CorpusStore& store, const LoadOptions& options) {
  validate_dataset_id(options.datasetId);
  if (options.languageTags.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "at least one language tag is required");
  }
  const std::set<LanguageTag> tags(options.languageTags.begin(), options.languageTags.end());
  if (tags.size() != options.languageTags.size()) {
    throw Error(ErrorCode::kInvalidArgument, "duplicate language tag");
  }

  std::map<LanguageTag, std::vector<std::string>> columns;
  std::optional<std::size_t> count;
  for (const auto& tag : options.languageTags) {
    const fs::path file = options.dir / file_name(tag, options.split);
    auto lines = read_lines(file);
    if (count && *count != lines.size()) {
      throw Error(ErrorCode::kFormat, file.string() + " has " + std::to_string(lines.size()) +
                                          " lines, expected " + std::to_string(*count));
    }
    count = lines.size();
    columns.emplace(tag, std::move(lines));
  }

  const auto lock = store.documents().lock_dataset(options.datasetId, true);
  const bool exists = store.get_manifest(options.datasetId).has_value() ||
                      !store.documents().list(Collection::kDatasets, {}, dataset_prefix(options.datasetId)).empty();
  if (exists) {
    if (!options.replace) {
      throw Error(ErrorCode::kConflict,
                  "dataset " + options.datasetId + " already imported (use --replace)");
    }
    if (!store.list_workflows({}, dataset_prefix(options.datasetId)).empty()) {
      throw Error(ErrorCode::kConflict,
                  "dataset " + options.datasetId + " has workflows and cannot be replaced");
    }
    store.erase_segments(options.datasetId);
  }

  for (std::size_t i = 0; i < *count; ++i) {
    MultilingualSegment segment;
    segment.datasetId = options.datasetId;
    segment.segmentId = segment_id_for_position(i);
    for (const auto& [tag, lines] : columns) segment.sources.emplace(tag, lines[i]);
    store.put_segment(std::move(segment));
  }
  DatasetManifest manifest;
  manifest.datasetId = options.datasetId;
  manifest.corpus = options.corpus.empty() ? options.datasetId : options.corpus;
  manifest.split = options.split;
  manifest.languageTags = tags;
  manifest.segmentCount = *count;
  store.put_manifest(manifest);
  return *count;
}

std::size_t create_workflows(CorpusStore& store, std::string_view datasetId,
                             const LanguageTag& targetLanguage, std::int64_t priorityStart) {
  auto manifest = require_manifest(store, datasetId);
  const auto lock = store.documents().lock_dataset(datasetId, true);
  if (!store.list_workflows({}, dataset_prefix(datasetId)).empty()) {
    throw Error(ErrorCode::kConflict, "workflows already exist for " + std::string(datasetId));
  }
  std::size_t created = 0;
  for (const auto& segment : store.list_segments(datasetId)) {
    Workflow w;
    w.workflowId = workflow_id_for(datasetId, segment.segmentId);
    w.datasetId = std::string(datasetId);
    w.segmentId = segment.segmentId;
    w.targetLanguage = targetLanguage;
    w.priority = priorityStart + std::int64_t(created);
    w.status = WorkflowStatus::kActive;
    if (!store.create_workflow(w)) {
      throw Error(ErrorCode::kConflict, "workflow " + w.workflowId + " already exists");
    }
    ++created;
  }
  manifest.targetLanguage = targetLanguage;
  store.put_manifest(manifest);
  return created;
}

std::vector<DatasetReport> system_report(const CorpusStore& store) {
  std::map<std::string, DatasetReport> byDataset;
  auto entry = [&](const std::string& id) -> DatasetReport& {
    auto& r = byDataset[id];
    if (r.datasetId.empty()) {
      r.datasetId = id;
      for (auto s : {WorkflowStatus::kActive, WorkflowStatus::kCompleted}) r.workflows[s] = 0;
      for (auto s : {TaskStatus::kUnassigned, TaskStatus::kAssigned, TaskStatus::kCompleted}) {
        r.tasks[s] = 0;
      }
    }
    return r;
  };
  for (const auto& m : store.list_manifests()) entry(m.datasetId);
  for (const auto& w : store.list_workflows()) ++entry(w.value.datasetId).workflows[w.value.status];
  for (const auto& t : store.list_tasks()) ++entry(t.value.datasetId).tasks[t.value.status];
  std::vector<DatasetReport> out;
  for (auto& [id, r] : byDataset) out.push_back(std::move(r));
  return out;
}

std::string render_system_report(const std::vector<DatasetReport>& report) {
  std::ostringstream out;
  out << "dataset,entity,status,count\n";
  for (const auto& r : report) {
    for (const auto& [status, n] : r.workflows) {
      out << r.datasetId << ",workflows," << to_string(status) << ',' << n << '\n';
    }
    for (const auto& [status, n] : r.tasks) {
      out << r.datasetId << ",annotation-tasks," << to_string(status) << ',' << n << '\n';
    }
  }
  return out.str();
}

std::vector<fs::path> export_dataset(const CorpusStore& store, const ExportOptions& options) {
  const auto manifest = require_manifest(store, options.datasetId);
  if (!manifest.targetLanguage) {
    throw Error(ErrorCode::kPrecondition, "dataset " + options.datasetId + " has no workflows");
  }
  const auto workflows = store.list_workflows({}, dataset_prefix(options.datasetId));
  const auto active = std::count_if(workflows.begin(), workflows.end(), [](const auto& w) {
    return w.value.status == WorkflowStatus::kActive;
  });
  if (active > 0 && !options.partial) {
    throw Error(ErrorCode::kPrecondition, std::to_string(active) + " workflows of " +
                                              options.datasetId +
                                              " are still active (use --partial)");
  }

  const auto segments = store.list_segments(options.datasetId);
  const LanguageTag& target = *manifest.targetLanguage;
  const fs::path dir = options.outDir / manifest.corpus;
  fs::create_directories(dir);
  std::vector<fs::path> written;

  for (const auto& tag : manifest.languageTags) {
    if (tag == target) continue;
    std::vector<std::string> lines;
    for (const auto& s : segments) {
      const auto it = s.sources.find(tag);
      lines.push_back(it == s.sources.end() ? std::string() : it->second);
    }
    written.push_back(dir / file_name(tag, manifest.split));
    write_lines(written.back(), lines);
  }

  int maxVersion = 0;
  std::vector<std::string> finals;
  for (const auto& s : segments) {
    maxVersion = std::max(maxVersion, int(s.targetVersions.size()));
    if (const auto* v = s.latest_version()) {
      finals.push_back(v->text);
    } else {
      const auto it = s.sources.find(target);
      finals.push_back(it == s.sources.end() ? std::string() : it->second);
    }
  }
  written.push_back(dir / file_name(target, manifest.split));
  write_lines(written.back(), finals);

  if (options.withEdits) {
    for (int n = 1; n <= maxVersion; ++n) {
      std::vector<std::string> lines;
      for (const auto& s : segments) lines.push_back(s.text_at_or_before(n).value_or(""));
      written.push_back(dir / file_name(target, manifest.split, n));
      write_lines(written.back(), lines);
    }
  }
  std::sort(written.begin(), written.end());
  return written;
}

std::vector<AccountingRow> accounting_statements(const CorpusStore& store,
                                                 std::string_view fromMonth,
                                                 std::string_view toMonth) {
  for (const auto month : {fromMonth, toMonth}) {
    if (!month.empty() && !valid_month(month)) {
      throw Error(ErrorCode::kInvalidArgument, "month must be YYYY-MM: " + std::string(month));
    }
  }
  std::map<std::tuple<std::string, std::string, std::string, TaskType>, std::size_t> counts;
  for (const auto& [task, revision] : store.list_tasks(Filter{}.where("status", "completed"))) {
    if (!task.completedAt || !task.assignee) continue;
    const std::string month = month_of(*task.completedAt);
    if (!fromMonth.empty() && month < fromMonth) continue;
    if (!toMonth.empty() && month > toMonth) continue;
    ++counts[{*task.assignee, task.datasetId, month, task.type}];
  }
  std::vector<AccountingRow> rows;
  for (const auto& [key, n] : counts) {
    rows.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), std::get<3>(key), n});
  }
  return rows;
}

std::string render_accounting_csv(const std::vector<AccountingRow>& rows) {
  std::ostringstream out;
  out << "user_id,dataset_id,month,task_type,completed_count\n";
  for (const auto& r : rows) {
    out << r.userId << ',' << r.datasetId << ',' << r.month << ',' << to_string(r.taskType) << ','
        << r.completedCount << '\n';
  }
  return out.str();
}

DatasetStats dataset_stats(const CorpusStore& store, std::string_view datasetId) {
  const auto manifest = require_manifest(store, datasetId);
  const auto segments = store.list_segments(datasetId);
  DatasetStats stats;
  stats.datasetId = std::string(datasetId);
  stats.corpus = manifest.corpus;
  stats.segments = segments.size();
  const LanguageTag target = manifest.targetLanguage.value_or(LanguageTag::parse("und_Zyyy"));
  for (const auto& s : segments) {
    if (const auto* v = s.latest_version()) stats.words += metrics::word_count(v->text, target);
  }
  for (int from = 1; from <= 3; ++from) {
    std::vector<metrics::VersionPair> log;
    for (const auto& s : segments) {
      if (int(s.targetVersions.size()) > from) {
        log.emplace_back(s.targetVersions[from - 1].text, s.targetVersions[from].text);
      }
    }
    if (log.empty()) {
      stats.rounds.push_back(std::nullopt);
    } else {
      stats.rounds.push_back(metrics::round_stats(log, from));
    }
  }
  return stats;
}

std::string render_stats_csv(const std::vector<DatasetStats>& stats) {
  std::ostringstream out;
  out << "corpus,segments,words,round,pct_edited,mean_ed,se_ed\n";
  for (const auto& d : stats) {
    for (std::size_t i = 0; i < d.rounds.size(); ++i) {
      const int from = int(i) + 1;
      out << d.corpus << ',' << d.segments << ',' << d.words << ",v" << from << "->v"
          << from + 1 << ',';
      if (const auto& r = d.rounds[i]) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%.0f,%.2f,%.2f", r->editedFraction * 100.0,
                      r->meanEditDistance, r->stdErrEditDistance);
        out << buf;
      } else {
        out << ",,";
      }
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace parcur::admin
