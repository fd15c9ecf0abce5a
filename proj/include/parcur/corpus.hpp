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

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "parcur/model.hpp"
#include "parcur/store.hpp"

namespace parcur {

/// Restricts a managers pass to some datasets; empty means all.
using DatasetScope = std::function<bool(std::string_view datasetId)>;

template <class T>
struct Versioned {
  T value;
  std::uint64_t revision = 0;
};

/// Typed access to the corpus data model on top of a DocumentStore. All text
/// is NFC-normalized on the way in; source texts are frozen after import and
/// target versions are append-only.
class CorpusStore {
 public:
  explicit CorpusStore(DocumentStore& docs) : docs_(docs) {}

  DocumentStore& documents() noexcept { return docs_; }
  const DocumentStore& documents() const noexcept { return docs_; }

  /// Stores a new segment. Re-putting identical content is a no-op, and a put
  /// whose target versions strictly extend the stored ones appends them; any
  /// other difference is Error(kConflict).
  std::string put_segment(MultilingualSegment segment);
  std::optional<MultilingualSegment> get_segment(std::string_view datasetId,
                                                 std::string_view segmentId) const;
  /// Appends exactly one target version. `number` must be the next label
  /// (Error(kProtocol) otherwise). Re-appending the identical entry that is
  /// already last is accepted so interrupted completions can be retried.
  MultilingualSegment append_target_version(std::string_view datasetId,
                                            std::string_view segmentId, int number,
                                            std::string_view text,
                                            std::string_view authorUserId, Timestamp at);
  /// Segments of one dataset in file order.
  std::vector<MultilingualSegment> list_segments(std::string_view datasetId) const;
  std::size_t erase_segments(std::string_view datasetId);

  void put_manifest(const DatasetManifest& manifest);
  std::optional<DatasetManifest> get_manifest(std::string_view datasetId) const;
  std::vector<DatasetManifest> list_manifests() const;

  void put_user(const UserProfile& user);
  std::optional<UserProfile> get_user(std::string_view userId) const;
  std::vector<UserProfile> list_users() const;

  /// LTR unless the config collection marks the tag RTL.
  Direction direction_of(const LanguageTag& tag) const;
  void set_direction(const LanguageTag& tag, Direction direction);
  std::map<LanguageTag, Direction> directions() const;

  /// False if a workflow with the same id already exists.
  bool create_workflow(const Workflow& workflow);
  std::optional<Versioned<Workflow>> get_workflow(std::string_view workflowId) const;
  std::vector<Versioned<Workflow>> list_workflows(const Filter& filter = {},
                                                 std::string_view id_prefix = {}) const;
  bool update_workflow(const Workflow& workflow, std::uint64_t expected_revision);

  bool create_task(const AnnotationTask& task);
  std::optional<Versioned<AnnotationTask>> get_task(std::string_view taskId) const;
  std::vector<Versioned<AnnotationTask>> list_tasks(const Filter& filter = {},
                                                    std::string_view id_prefix = {}) const;
  bool update_task(const AnnotationTask& task, std::uint64_t expected_revision);

  /// Generic listing of a public collection by name.
  std::vector<Document> list_collection(std::string_view name, const Filter& filter = {}) const;

 private:
  DocumentStore& docs_;
};

}  // namespace parcur
