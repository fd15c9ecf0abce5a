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

#include "parcur/model.hpp"

#include <cstdio>

#include "parcur/error.hpp"

namespace parcur {

namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorCode::kInvalidArgument, what);
}

bool is_id_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         c == '.' || c == '_' || c == '-';
}

void validate_plain_id(std::string_view id, std::string_view what) {
  if (id.empty()) invalid(std::string(what) + " is empty");
  for (char c : id) {
    if (!is_id_char(c)) invalid(std::string(what) + " has invalid character: " + std::string(id));
  }
}

template <class T>
void put_optional(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

void put_optional_time(json& j, const char* key, const std::optional<Timestamp>& v) {
  if (v) j[key] = format_rfc3339(*v);
}

std::optional<Timestamp> get_optional_time(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return parse_rfc3339(it->get<std::string>());
}

template <class T>
std::optional<T> get_optional(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<T>();
}

int parse_version_label(std::string_view label) {
  if (label.size() != 2 || label[0] != 'v' || label[1] < '1' || label[1] > '4') {
    invalid("bad version label: " + std::string(label));
  }
  return label[1] - '0';
}

}  // namespace

bool LanguageTag::is_valid(std::string_view code) noexcept {
  const auto underscore = code.find('_');
  if (underscore != 2 && underscore != 3) return false;
  if (code.size() != underscore + 5) return false;
  for (std::size_t i = 0; i < underscore; ++i) {
    if (code[i] < 'a' || code[i] > 'z') return false;
  }
  if (code[underscore + 1] < 'A' || code[underscore + 1] > 'Z') return false;
  for (std::size_t i = underscore + 2; i < code.size(); ++i) {
    if (code[i] < 'a' || code[i] > 'z') return false;
  }
  return true;
}

LanguageTag LanguageTag::parse(std::string_view code) {
  if (!is_valid(code)) invalid("invalid language tag: " + std::string(code));
  return LanguageTag(std::string(code));
}

std::string_view to_string(Direction d) noexcept { return d == Direction::kRtl ? "RTL" : "LTR"; }

Direction parse_direction(std::string_view s) {
  if (s == "LTR" || s == "ltr") return Direction::kLtr;
  if (s == "RTL" || s == "rtl") return Direction::kRtl;
  invalid("direction must be LTR or RTL: " + std::string(s));
}

std::optional<std::string> MultilingualSegment::text_at_or_before(int number) const {
  std::optional<std::string> out;
  for (const auto& v : targetVersions) {
    if (v.number <= number) out = v.text;
  }
  return out;
}

std::string_view to_string(WorkflowStatus s) noexcept {
  return s == WorkflowStatus::kActive ? "active" : "completed";
}
std::string_view to_string(TaskType t) noexcept {
  return t == TaskType::kTranslation ? "translation" : "copyedit";
}
std::string_view to_string(TaskStatus s) noexcept {
  switch (s) {
    case TaskStatus::kUnassigned: return "unassigned";
    case TaskStatus::kAssigned: return "assigned";
    case TaskStatus::kCompleted: return "completed";
  }
  return "unassigned";
}

WorkflowStatus parse_workflow_status(std::string_view s) {
  if (s == "active") return WorkflowStatus::kActive;
  if (s == "completed") return WorkflowStatus::kCompleted;
  invalid("bad workflow status: " + std::string(s));
}
TaskType parse_task_type(std::string_view s) {
  if (s == "translation") return TaskType::kTranslation;
  if (s == "copyedit") return TaskType::kCopyedit;
  invalid("bad task type: " + std::string(s));
}
TaskStatus parse_task_status(std::string_view s) {
  if (s == "unassigned") return TaskStatus::kUnassigned;
  if (s == "assigned") return TaskStatus::kAssigned;
  if (s == "completed") return TaskStatus::kCompleted;
  invalid("bad task status: " + std::string(s));
}

void validate_dataset_id(std::string_view id) { validate_plain_id(id, "dataset id"); }

void validate(const MultilingualSegment& s) {
  validate_dataset_id(s.datasetId);
  validate_plain_id(s.segmentId, "segment id");
  if (s.targetVersions.size() > std::size_t(kMaxTargetVersion)) invalid("more than four target versions");
  for (std::size_t i = 0; i < s.targetVersions.size(); ++i) {
    if (s.targetVersions[i].number != int(i) + 1) {
      invalid("target versions must run v1, v2, ... without gaps");
    }
  }
}

void validate(const UserProfile& u) {
  validate_plain_id(u.userId, "user id");
  if (u.verifierLevel < 0 || u.verifierLevel > 3) invalid("verifierLevel must be 0..3");
  if ((u.verifierLevel == 0) != !u.isActiveVerifier) {
    invalid("verifierLevel must be 0 exactly when the user is not an active verifier");
  }
  if (u.isActiveTranslator && u.preferredSourceLanguages.empty()) {
    invalid("active translators need at least one preferred source language");
  }
  if (u.maxOpenTasks < 1) invalid("maxOpenTasks must be positive");
}

void validate(const AnnotationTask& t) {
  if (t.taskId.empty() || t.workflowId.empty()) invalid("task and workflow ids are required");
  if (t.type == TaskType::kTranslation ? t.round != 0 : (t.round < 1 || t.round > 3)) {
    invalid("round does not match task type");
  }
  if (t.status == TaskStatus::kAssigned && (!t.assignee || !t.leaseExpiresAt)) {
    invalid("assigned task without assignee or lease");
  }
  if (t.status == TaskStatus::kCompleted) {
    if (!t.resultText) invalid("completed task without result");
    if (t.type == TaskType::kCopyedit && !t.editedFlag) invalid("completed copyedit without editedFlag");
  }
}

std::string segment_id_for_position(std::size_t position) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%08zu", position);
  return buf;
}

std::string segment_document_id(std::string_view datasetId, std::string_view segmentId) {
  return std::string(datasetId) + "/" + std::string(segmentId);
}

std::string workflow_id_for(std::string_view datasetId, std::string_view segmentId) {
  return segment_document_id(datasetId, segmentId);
}

std::string task_id_for(std::string_view workflowId, int round) {
  return std::string(workflowId) + "/r" + std::to_string(round);
}

// JSON mapping --------------------------------------------------------------


void to_json(json& j, const TargetVersion& v) {
  j = json{{"version", v.label()},
           {"text", v.text},
           {"authorUserId", v.authorUserId},
           {"timestamp", format_rfc3339(v.timestamp)}};
}
void from_json(const json& j, TargetVersion& v) {
  v.number = parse_version_label(j.at("version").get<std::string>());
  v.text = j.at("text").get<std::string>();
  v.authorUserId = j.at("authorUserId").get<std::string>();
  v.timestamp = parse_rfc3339(j.at("timestamp").get<std::string>());
}

void to_json(json& j, const MultilingualSegment& v) {
  json sources = json::object();
  for (const auto& [tag, text] : v.sources) sources[tag.code()] = text;
  j = json{{"datasetId", v.datasetId},
           {"segmentId", v.segmentId},
           {"sources", std::move(sources)},
           {"targetVersions", v.targetVersions}};
}
void from_json(const json& j, MultilingualSegment& v) {
  v.datasetId = j.at("datasetId").get<std::string>();
  v.segmentId = j.at("segmentId").get<std::string>();
  v.sources.clear();
  for (const auto& [code, text] : j.at("sources").items()) {
    v.sources.emplace(LanguageTag::parse(code), text.get<std::string>());
  }
  v.targetVersions = j.value("targetVersions", json::array()).get<std::vector<TargetVersion>>();
}

void to_json(json& j, const UserProfile& v) {
  j = json{{"userId", v.userId},
           {"isActiveTranslator", v.isActiveTranslator},
           {"isActiveVerifier", v.isActiveVerifier},
           {"verifierLevel", v.verifierLevel},
           {"preferredSourceLanguages", v.preferredSourceLanguages},
           {"maxOpenTasks", v.maxOpenTasks}};
  put_optional(j, "uiLanguage", v.uiLanguage);
}
void from_json(const json& j, UserProfile& v) {
  v.userId = j.at("userId").get<std::string>();
  v.isActiveTranslator = j.value("isActiveTranslator", false);
  v.isActiveVerifier = j.value("isActiveVerifier", false);
  v.verifierLevel = j.value("verifierLevel", 0);
  v.preferredSourceLanguages =
      j.value("preferredSourceLanguages", json::array()).get<std::vector<LanguageTag>>();
  v.uiLanguage = get_optional<LanguageTag>(j, "uiLanguage");
  v.maxOpenTasks = j.value("maxOpenTasks", 10);
}

void to_json(json& j, const DatasetManifest& v) {
  j = json{{"datasetId", v.datasetId},
           {"corpus", v.corpus},
           {"split", v.split},
           {"languageTags", v.languageTags},
           {"segmentCount", v.segmentCount}};
  put_optional(j, "targetLanguage", v.targetLanguage);
}
void from_json(const json& j, DatasetManifest& v) {
  v.datasetId = j.at("datasetId").get<std::string>();
  v.corpus = j.value("corpus", v.datasetId);
  v.split = j.value("split", "");
  v.languageTags = j.at("languageTags").get<std::set<LanguageTag>>();
  v.segmentCount = j.at("segmentCount").get<std::size_t>();
  v.targetLanguage = get_optional<LanguageTag>(j, "targetLanguage");
}

void to_json(json& j, const Workflow& v) {
  j = json{{"workflowId", v.workflowId},
           {"datasetId", v.datasetId},
           {"segmentId", v.segmentId},
           {"targetLanguage", v.targetLanguage},
           {"priority", v.priority},
           {"status", to_string(v.status)}};
}
void from_json(const json& j, Workflow& v) {
  v.workflowId = j.at("workflowId").get<std::string>();
  v.datasetId = j.at("datasetId").get<std::string>();
  v.segmentId = j.at("segmentId").get<std::string>();
  v.targetLanguage = j.at("targetLanguage").get<LanguageTag>();
  v.priority = j.at("priority").get<std::int64_t>();
  v.status = parse_workflow_status(j.at("status").get<std::string>());
}

void to_json(json& j, const SkipRecord& v) {
  j = json{{"userId", v.userId}, {"at", format_rfc3339(v.at)}};
  if (!v.clientOpId.empty()) j["clientOpId"] = v.clientOpId;
}
void from_json(const json& j, SkipRecord& v) {
  v.userId = j.at("userId").get<std::string>();
  v.at = parse_rfc3339(j.at("at").get<std::string>());
  v.clientOpId = j.value("clientOpId", "");
}

void to_json(json& j, const AnnotationTask& v) {
  j = json{{"taskId", v.taskId},
           {"workflowId", v.workflowId},
           {"datasetId", v.datasetId},
           {"segmentId", v.segmentId},
           {"type", to_string(v.type)},
           {"round", v.round},
           {"priority", v.priority},
           {"status", to_string(v.status)}};
  put_optional(j, "assignee", v.assignee);
  put_optional_time(j, "leaseExpiresAt", v.leaseExpiresAt);
  put_optional(j, "resultText", v.resultText);
  put_optional(j, "editedFlag", v.editedFlag);
  put_optional_time(j, "completedAt", v.completedAt);
  put_optional(j, "completedByOp", v.completedByOp);
  if (!v.skips.empty()) j["skips"] = v.skips;
}
void from_json(const json& j, AnnotationTask& v) {
  v.taskId = j.at("taskId").get<std::string>();
  v.workflowId = j.at("workflowId").get<std::string>();
  v.datasetId = j.at("datasetId").get<std::string>();
  v.segmentId = j.at("segmentId").get<std::string>();
  v.type = parse_task_type(j.at("type").get<std::string>());
  v.round = j.at("round").get<int>();
  v.priority = j.value("priority", std::int64_t{0});
  v.status = parse_task_status(j.at("status").get<std::string>());
  v.assignee = get_optional<std::string>(j, "assignee");
  v.leaseExpiresAt = get_optional_time(j, "leaseExpiresAt");
  v.resultText = get_optional<std::string>(j, "resultText");
  v.editedFlag = get_optional<bool>(j, "editedFlag");
  v.completedAt = get_optional_time(j, "completedAt");
  v.completedByOp = get_optional<std::string>(j, "completedByOp");
  v.skips = j.value("skips", json::array()).get<std::vector<SkipRecord>>();
}

}  // namespace parcur
