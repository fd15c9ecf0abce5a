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

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "parcur/time.hpp"

namespace parcur {

/// `<iso639>_<iso15924>`, e.g. `nqo_Nkoo`.
class LanguageTag {
 public:
  /// Throws Error(kInvalidArgument) unless `code` matches
  /// `[a-z]{2,3}_[A-Z][a-z]{3}`.
  static LanguageTag parse(std::string_view code);
  static bool is_valid(std::string_view code) noexcept;

  const std::string& code() const noexcept { return code_; }

  friend auto operator<=>(const LanguageTag&, const LanguageTag&) = default;
  friend bool operator==(const LanguageTag&, const LanguageTag&) = default;

 private:
  explicit LanguageTag(std::string code) : code_(std::move(code)) {}
  std::string code_;
};

enum class Direction { kLtr, kRtl };

std::string_view to_string(Direction d) noexcept;
Direction parse_direction(std::string_view s);

/// Copyedit logs carry at most four target versions: the translation (v1)
/// and the outcome of each copyedit round.
inline constexpr int kMaxTargetVersion = 4;

struct TargetVersion {
  int number = 0;  // 1..4
  std::string text;
  std::string authorUserId;
  Timestamp timestamp{};

  std::string label() const { return "v" + std::to_string(number); }
  friend bool operator==(const TargetVersion&, const TargetVersion&) = default;
};

struct MultilingualSegment {
  std::string datasetId;
  std::string segmentId;
  std::map<LanguageTag, std::string> sources;
  std::vector<TargetVersion> targetVersions;

  /// Highest stored version, if any.
  const TargetVersion* latest_version() const noexcept {
    return targetVersions.empty() ? nullptr : &targetVersions.back();
  }
  /// Text of the highest version numbered `<= number`, used to keep version
  /// files line-parallel for segments that stopped before round 3.
  std::optional<std::string> text_at_or_before(int number) const;

  friend bool operator==(const MultilingualSegment&, const MultilingualSegment&) = default;
};

struct UserProfile {
  std::string userId;
  bool isActiveTranslator = false;
  bool isActiveVerifier = false;
  int verifierLevel = 0;
  std::vector<LanguageTag> preferredSourceLanguages;
  std::optional<LanguageTag> uiLanguage;
  int maxOpenTasks = 10;

  friend bool operator==(const UserProfile&, const UserProfile&) = default;
};

struct DatasetManifest {
  std::string datasetId;
  /// File-naming components: exports land in `<corpus>/<tag>[.<split>]`.
  std::string corpus;
  std::string split;
  std::set<LanguageTag> languageTags;
  std::size_t segmentCount = 0;
  std::optional<LanguageTag> targetLanguage;

  friend bool operator==(const DatasetManifest&, const DatasetManifest&) = default;
};

enum class WorkflowStatus { kActive, kCompleted };

struct Workflow {
  std::string workflowId;
  std::string datasetId;
  std::string segmentId;
  LanguageTag targetLanguage = LanguageTag::parse("und_Zyyy");
  std::int64_t priority = 0;
  WorkflowStatus status = WorkflowStatus::kActive;

  friend bool operator==(const Workflow&, const Workflow&) = default;
};

enum class TaskType { kTranslation, kCopyedit };
enum class TaskStatus { kUnassigned, kAssigned, kCompleted };

struct SkipRecord {
  std::string userId;
  Timestamp at{};
  std::string clientOpId;

  friend bool operator==(const SkipRecord&, const SkipRecord&) = default;
};

struct AnnotationTask {
  std::string taskId;
  std::string workflowId;
  std::string datasetId;
  std::string segmentId;
  TaskType type = TaskType::kTranslation;
  int round = 0;  // 0 for translation, 1..3 for copyedit
  std::int64_t priority = 0;
  TaskStatus status = TaskStatus::kUnassigned;
  std::optional<std::string> assignee;
  std::optional<Timestamp> leaseExpiresAt;
  std::optional<std::string> resultText;
  std::optional<bool> editedFlag;
  std::optional<Timestamp> completedAt;
  /// Client operation that completed the task, for replay detection.
  std::optional<std::string> completedByOp;
  std::vector<SkipRecord> skips;

  /// Target version produced by completing this task (v1 for translation).
  int produced_version() const noexcept { return round + 1; }

  friend bool operator==(const AnnotationTask&, const AnnotationTask&) = default;
};

std::string_view to_string(WorkflowStatus s) noexcept;
std::string_view to_string(TaskType t) noexcept;
std::string_view to_string(TaskStatus s) noexcept;
WorkflowStatus parse_workflow_status(std::string_view s);
TaskType parse_task_type(std::string_view s);
TaskStatus parse_task_status(std::string_view s);

// Validation of type invariants; each throws Error(kInvalidArgument).
void validate(const MultilingualSegment& s);
void validate(const UserProfile& u);
void validate(const AnnotationTask& t);
/// Dataset ids appear in document ids and file paths: `[A-Za-z0-9._-]+`.
void validate_dataset_id(std::string_view id);

/// Segment ids are the zero-padded position in the original data files so
/// that lexicographic document order equals file order.
std::string segment_id_for_position(std::size_t position);

std::string segment_document_id(std::string_view datasetId, std::string_view segmentId);
std::string workflow_id_for(std::string_view datasetId, std::string_view segmentId);
std::string task_id_for(std::string_view workflowId, int round);

void to_json(nlohmann::json& j, const TargetVersion& v);
void from_json(const nlohmann::json& j, TargetVersion& v);
void to_json(nlohmann::json& j, const MultilingualSegment& v);
void from_json(const nlohmann::json& j, MultilingualSegment& v);
void to_json(nlohmann::json& j, const UserProfile& v);
void from_json(const nlohmann::json& j, UserProfile& v);
void to_json(nlohmann::json& j, const DatasetManifest& v);
void from_json(const nlohmann::json& j, DatasetManifest& v);
void to_json(nlohmann::json& j, const Workflow& v);
void from_json(const nlohmann::json& j, Workflow& v);
void to_json(nlohmann::json& j, const SkipRecord& v);
void from_json(const nlohmann::json& j, SkipRecord& v);
void to_json(nlohmann::json& j, const AnnotationTask& v);
void from_json(const nlohmann::json& j, AnnotationTask& v);

}  // namespace parcur

template <>
struct nlohmann::adl_serializer<parcur::LanguageTag> {
  static parcur::LanguageTag from_json(const json& j) {
    return parcur::LanguageTag::parse(j.get<std::string>());
  }
  static void to_json(json& j, const parcur::LanguageTag& t) { j = t.code(); }
};
