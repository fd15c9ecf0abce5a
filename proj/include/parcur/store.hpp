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
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace parcur {

/// Document collections. The first five form the public data model; the
/// rest hold bookkeeping that only the library itself reads.
enum class Collection {
  kDatasets,
  kWorkflows,
  kAnnotationTasks,
  kUsers,
  kConfig,
  kManifests,
  kCredentials,
  kSessions,
  kSubmissions,
};

inline constexpr Collection kAllCollections[] = {
    Collection::kDatasets,    Collection::kWorkflows, Collection::kAnnotationTasks,
    Collection::kUsers,       Collection::kConfig,    Collection::kManifests,
    Collection::kCredentials, Collection::kSessions,  Collection::kSubmissions,
};

std::string_view collection_name(Collection c) noexcept;
/// Resolves one of `datasets`, `workflows`, `annotation-tasks`, `users`,
/// `config`; anything else is Error(kNotFound).
Collection parse_public_collection(std::string_view name);

struct Document {
  std::string id;
  std::uint64_t revision = 0;
  nlohmann::json body;
};

/// Conjunction of top-level field equalities.
struct Filter {
  std::vector<std::pair<std::string, nlohmann::json>> equals;

  Filter& where(std::string field, nlohmann::json value) {
    equals.emplace_back(std::move(field), std::move(value));
    return *this;
  }
  bool matches(const nlohmann::json& body) const;
};

/// Held while a mutating admin command works on one dataset. Destruction
/// releases it.
class DatasetLock {
 public:
  virtual ~DatasetLock() = default;
};

/// Key-value document store. Each document carries a revision that starts
/// at 1 and increases by one per successful write; compare_and_swap is the
/// only atomicity primitive. Listing order is lexicographic by id.
class DocumentStore {
 public:
  virtual ~DocumentStore() = default;

  virtual std::optional<Document> get(Collection c, std::string_view id) const = 0;

  /// Writes `body` iff the stored revision equals `expected_revision`
  /// (0 meaning "absent"). Returns the new revision, or nullopt on mismatch.
  virtual std::optional<std::uint64_t> compare_and_swap(Collection c,
                                                        std::string_view id,
                                                        std::uint64_t expected_revision,
                                                        const nlohmann::json& body) = 0;

  /// Deletes iff the stored revision equals `expected_revision`.
  virtual bool erase(Collection c, std::string_view id, std::uint64_t expected_revision) = 0;

  /// Documents whose id starts with `id_prefix` and whose body matches
  /// `filter`, ordered by id.
  virtual std::vector<Document> list(Collection c, const Filter& filter = {},
                                     std::string_view id_prefix = {}) const = 0;

  /// Advisory per-dataset lock; nullptr when `blocking` is false and
  /// another holder exists.
  virtual std::unique_ptr<DatasetLock> lock_dataset(std::string_view datasetId,
                                                    bool blocking) = 0;
};

std::unique_ptr<DocumentStore> make_memory_store();

/// Embedded file-backed store; `path` is created if missing.
std::unique_ptr<DocumentStore> make_sqlite_store(const std::string& path);

/// `memory:` or `sqlite:<path>` or a plain filesystem path.
std::unique_ptr<DocumentStore> open_store(std::string_view uri);

/// Canonical text rendering of the listed collections, one `collection\tid\t
/// revision\tbody` line per document in collection then id order.
std::string dump_store(const DocumentStore& store, const std::vector<Collection>& collections);

}  // namespace parcur
