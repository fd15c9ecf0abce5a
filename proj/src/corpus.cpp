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

#include "parcur/corpus.hpp"

#include "parcur/error.hpp"
#include "parcur/unicode.hpp"

namespace parcur {

namespace {

using nlohmann::json;

constexpr std::string_view kDirectionPrefix = "direction/";

MultilingualSegment normalized(MultilingualSegment s) {
  for (auto& [tag, text] : s.sources) text = unicode::nfc(text);
  for (auto& v : s.targetVersions) v.text = unicode::nfc(v.text);
  return s;
}

bool is_prefix(const std::vector<TargetVersion>& shorter, const std::vector<TargetVersion>& longer) {
  if (shorter.size() > longer.size()) return false;
  for (std::size_t i = 0; i < shorter.size(); ++i) {
    if (!(shorter[i] == longer[i])) return false;
  }
  return true;
}

template <class T>
std::vector<Versioned<T>> typed(std::vector<Document> docs) {
  std::vector<Versioned<T>> out;
  out.reserve(docs.size());
  for (auto& d : docs) out.push_back(Versioned<T>{d.body.get<T>(), d.revision});
  return out;
}

}  // namespace

// Segments ------------------------------------------------------------------

std::string CorpusStore::put_segment(MultilingualSegment segment) {
  validate(segment);
  segment = normalized(std::move(segment));
  const std::string id = segment_document_id(segment.datasetId, segment.segmentId);
  for (;;) {
    const auto existing = docs_.get(Collection::kDatasets, id);
    if (!existing) {
      if (docs_.compare_and_swap(Collection::kDatasets, id, 0, json(segment))) return id;
      continue;
    }
    const auto stored = existing->body.get<MultilingualSegment>();
    if (stored.sources != segment.sources) {
      throw Error(ErrorCode::kConflict, "segment " + id + " already exists with different sources");
    }
    if (stored.targetVersions == segment.targetVersions) return id;
    if (!is_prefix(stored.targetVersions, segment.targetVersions)) {
      throw Error(ErrorCode::kConflict, "segment " + id + " would rewrite stored target versions");
    }
    if (docs_.compare_and_swap(Collection::kDatasets, id, existing->revision, json(segment))) {
      return id;
    }
  }
}

std::optional<MultilingualSegment> CorpusStore::get_segment(std::string_view datasetId,
                                                            std::string_view segmentId) const {
  const auto doc = docs_.get(Collection::kDatasets, segment_document_id(datasetId, segmentId));
  if (!doc) return std::nullopt;
  return doc->body.get<MultilingualSegment>();
}

MultilingualSegment CorpusStore::append_target_version(std::string_view datasetId,
                                                       std::string_view segmentId, int number,
                                                       std::string_view text,
                                                       std::string_view authorUserId,
                                                       Timestamp at) {
  if (authorUserId.empty()) throw Error(ErrorCode::kInvalidArgument, "author is required");
  if (!get_user(authorUserId)) {
    throw Error(ErrorCode::kNotFound, "unknown author: " + std::string(authorUserId));
  }
  const std::string id = segment_document_id(datasetId, segmentId);
  const TargetVersion entry{number, unicode::nfc(text), std::string(authorUserId), at};
  for (;;) {
    const auto doc = docs_.get(Collection::kDatasets, id);
    if (!doc) throw Error(ErrorCode::kNotFound, "unknown segment: " + id);
    auto segment = doc->body.get<MultilingualSegment>();
    const int expected = int(segment.targetVersions.size()) + 1;
    if (!segment.targetVersions.empty() && number == expected - 1 &&
        segment.targetVersions.back() == entry) {
      return segment;
    }
    if (number != expected || number > kMaxTargetVersion) {
      throw Error(ErrorCode::kProtocol, "segment " + id + " expects v" + std::to_string(expected) +
                                            ", got v" + std::to_string(number));
    }
    segment.targetVersions.push_back(entry);
    if (docs_.compare_and_swap(Collection::kDatasets, id, doc->revision, json(segment))) {
      return segment;
    }
  }
}

std::vector<MultilingualSegment> CorpusStore::list_segments(std::string_view datasetId) const {
  std::vector<MultilingualSegment> out;
  for (auto& d : docs_.list(Collection::kDatasets, {}, std::string(datasetId) + "/")) {
    out.push_back(d.body.get<MultilingualSegment>());
  }
  return out;
}

std::size_t CorpusStore::erase_segments(std::string_view datasetId) {
  std::size_t n = 0;
  for (const auto& d : docs_.list(Collection::kDatasets, {}, std::string(datasetId) + "/")) {
    if (docs_.erase(Collection::kDatasets, d.id, d.revision)) ++n;
  }
  return n;
}

// Manifests -----------------------------------------------------------------

void CorpusStore::put_manifest(const DatasetManifest& manifest) {
  validate_dataset_id(manifest.datasetId);
  for (;;) {
    const auto doc = docs_.get(Collection::kManifests, manifest.datasetId);
    if (docs_.compare_and_swap(Collection::kManifests, manifest.datasetId,
                               doc ? doc->revision : 0, json(manifest))) {
      return;
    }
  }
}

std::optional<DatasetManifest> CorpusStore::get_manifest(std::string_view datasetId) const {
  const auto doc = docs_.get(Collection::kManifests, datasetId);
  if (!doc) return std::nullopt;
  return doc->body.get<DatasetManifest>();
}

std::vector<DatasetManifest> CorpusStore::list_manifests() const {
  std::vector<DatasetManifest> out;
  for (auto& d : docs_.list(Collection::kManifests)) out.push_back(d.body.get<DatasetManifest>());
  return out;
}

// Users ---------------------------------------------------------------------

void CorpusStore::put_user(const UserProfile& user) {
  validate(user);
  for (;;) {
    const auto doc = docs_.get(Collection::kUsers, user.userId);
    if (docs_.compare_and_swap(Collection::kUsers, user.userId, doc ? doc->revision : 0,
                               json(user))) {
      return;
    }
  }
}

std::optional<UserProfile> CorpusStore::get_user(std::string_view userId) const {
  const auto doc = docs_.get(Collection::kUsers, userId);
  if (!doc) return std::nullopt;
  return doc->body.get<UserProfile>();
}

std::vector<UserProfile> CorpusStore::list_users() const {
  std::vector<UserProfile> out;
  for (auto& d : docs_.list(Collection::kUsers)) out.push_back(d.body.get<UserProfile>());
  return out;
}

// Config --------------------------------------------------------------------

Direction CorpusStore::direction_of(const LanguageTag& tag) const {
  const auto doc = docs_.get(Collection::kConfig, std::string(kDirectionPrefix) + tag.code());
  if (!doc) return Direction::kLtr;
  return parse_direction(doc->body.at("direction").get<std::string>());
}

void CorpusStore::set_direction(const LanguageTag& tag, Direction direction) {
  const std::string id = std::string(kDirectionPrefix) + tag.code();
  const json body{{"languageTag", tag.code()}, {"direction", to_string(direction)}};
  for (;;) {
    const auto doc = docs_.get(Collection::kConfig, id);
    if (docs_.compare_and_swap(Collection::kConfig, id, doc ? doc->revision : 0, body)) return;
  }
}

std::map<LanguageTag, Direction> CorpusStore::directions() const {
  std::map<LanguageTag, Direction> out;
  for (const auto& d : docs_.list(Collection::kConfig, {}, kDirectionPrefix)) {
    out.emplace(LanguageTag::parse(d.body.at("languageTag").get<std::string>()),
                parse_direction(d.body.at("direction").get<std::string>()));
  }
  return out;
}

// Workflows -----------------------------------------------------------------

bool CorpusStore::create_workflow(const Workflow& workflow) {
  return docs_.compare_and_swap(Collection::kWorkflows, workflow.workflowId, 0, json(workflow))
      .has_value();
}

std::optional<Versioned<Workflow>> CorpusStore::get_workflow(std::string_view workflowId) const {
  auto doc = docs_.get(Collection::kWorkflows, workflowId);
  if (!doc) return std::nullopt;
  return Versioned<Workflow>{doc->body.get<Workflow>(), doc->revision};
}

std::vector<Versioned<Workflow>> CorpusStore::list_workflows(const Filter& filter,
                                                             std::string_view prefix) const {
  return typed<Workflow>(docs_.list(Collection::kWorkflows, filter, prefix));
}

bool CorpusStore::update_workflow(const Workflow& workflow, std::uint64_t expected_revision) {
  return docs_
      .compare_and_swap(Collection::kWorkflows, workflow.workflowId, expected_revision,
                        json(workflow))
      .has_value();
}

// Tasks ---------------------------------------------------------------------

bool CorpusStore::create_task(const AnnotationTask& task) {
  validate(task);
  return docs_.compare_and_swap(Collection::kAnnotationTasks, task.taskId, 0, json(task))
      .has_value();
}

std::optional<Versioned<AnnotationTask>> CorpusStore::get_task(std::string_view taskId) const {
  auto doc = docs_.get(Collection::kAnnotationTasks, taskId);
  if (!doc) return std::nullopt;
  return Versioned<AnnotationTask>{doc->body.get<AnnotationTask>(), doc->revision};
}

std::vector<Versioned<AnnotationTask>> CorpusStore::list_tasks(const Filter& filter,
                                                               std::string_view prefix) const {
  return typed<AnnotationTask>(docs_.list(Collection::kAnnotationTasks, filter, prefix));
}

bool CorpusStore::update_task(const AnnotationTask& task, std::uint64_t expected_revision) {
  validate(task);
  return docs_
      .compare_and_swap(Collection::kAnnotationTasks, task.taskId, expected_revision, json(task))
      .has_value();
}

std::vector<Document> CorpusStore::list_collection(std::string_view name,
                                                   const Filter& filter) const {
  return docs_.list(parse_public_collection(name), filter);
}

}  // namespace parcur
