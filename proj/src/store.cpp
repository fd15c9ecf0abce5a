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

#include "parcur/store.hpp"

#include <fcntl.h>
#include <sqlite3.h>
#include <sys/file.h>
#include <unistd.h>

#include <filesystem>
#include <map>
#include <mutex>
#include <set>
#include <shared_mutex>
#include <sstream>

#include "parcur/error.hpp"

namespace parcur {

namespace {

using nlohmann::json;

// Memory backend ------------------------------------------------------------

struct StoredDoc {
  std::uint64_t revision = 0;
  json body;
};

class MemoryDatasetLock final : public DatasetLock {
 public:
  explicit MemoryDatasetLock(std::unique_lock<std::mutex> lock) : lock_(std::move(lock)) {}

 private:
  std::unique_lock<std::mutex> lock_;
};

class MemoryStore final : public DocumentStore {
 public:
  std::optional<Document> get(Collection c, std::string_view id) const override {
    std::shared_lock lock(mu_);
    const auto& docs = collections_[index(c)];
    const auto it = docs.find(id);
    if (it == docs.end()) return std::nullopt;
    return Document{it->first, it->second.revision, it->second.body};
  }

  std::optional<std::uint64_t> compare_and_swap(Collection c, std::string_view id,
                                                std::uint64_t expected,
                                                const json& body) override {
    std::unique_lock lock(mu_);
    auto& docs = collections_[index(c)];
    const auto it = docs.find(id);
    const std::uint64_t current = it == docs.end() ? 0 : it->second.revision;
    if (current != expected) return std::nullopt;
    if (it == docs.end()) {
      docs.emplace(std::string(id), StoredDoc{1, body});
      return 1;
    }
    it->second.revision += 1;
    it->second.body = body;
    return it->second.revision;
  }

  bool erase(Collection c, std::string_view id, std::uint64_t expected) override {
    std::unique_lock lock(mu_);
    auto& docs = collections_[index(c)];
    const auto it = docs.find(id);
    if (it == docs.end() || it->second.revision != expected) return false;
    docs.erase(it);
    return true;
  }

  std::vector<Document> list(Collection c, const Filter& filter,
                             std::string_view prefix) const override {
    std::shared_lock lock(mu_);
    const auto& docs = collections_[index(c)];
    std::vector<Document> out;
    for (auto it = docs.lower_bound(prefix); it != docs.end(); ++it) {
      if (it->first.compare(0, prefix.size(), prefix) != 0) break;
      if (filter.matches(it->second.body)) {
        out.push_back(Document{it->first, it->second.revision, it->second.body});
      }
    }
    return out;
  }

  std::unique_ptr<DatasetLock> lock_dataset(std::string_view datasetId, bool blocking) override {
    std::mutex* m;
    {
      std::unique_lock lock(mu_);
      auto& slot = locks_[std::string(datasetId)];
      if (!slot) slot = std::make_unique<std::mutex>();
      m = slot.get();
    }
    std::unique_lock<std::mutex> held(*m, std::defer_lock);
    if (blocking) {
      held.lock();
    } else if (!held.try_lock()) {
      return nullptr;
    }
    return std::make_unique<MemoryDatasetLock>(std::move(held));
  }

 private:
  static std::size_t index(Collection c) { return static_cast<std::size_t>(c); }

  mutable std::shared_mutex mu_;
  std::map<std::string, StoredDoc, std::less<>> collections_[std::size(kAllCollections)];
  std::map<std::string, std::unique_ptr<std::mutex>> locks_;
};

// SQLite backend ------------------------------------------------------------

class Statement {
 public:
  Statement(sqlite3* db, const char* sql) {
    if (sqlite3_prepare_v2(db, sql, -1, &stmt_, nullptr) != SQLITE_OK) {
      throw Error(ErrorCode::kIo, std::string("sqlite prepare: ") + sqlite3_errmsg(db));
    }
  }
  ~Statement() { sqlite3_finalize(stmt_); }
  Statement(const Statement&) = delete;
  Statement& operator=(const Statement&) = delete;

  Statement& bind(int i, std::string_view s) {
    // A null data pointer would bind SQL NULL instead of an empty string.
    sqlite3_bind_text(stmt_, i, s.empty() ? "" : s.data(), int(s.size()), SQLITE_TRANSIENT);
    return *this;
  }
  Statement& bind(int i, std::int64_t v) {
    sqlite3_bind_int64(stmt_, i, v);
    return *this;
  }
  /// True while rows remain.
  bool step() {
    const int rc = sqlite3_step(stmt_);
    if (rc == SQLITE_ROW) return true;
    if (rc == SQLITE_DONE) return false;
    throw Error(ErrorCode::kIo, std::string("sqlite step: ") +
                                    sqlite3_errmsg(sqlite3_db_handle(stmt_)));
  }
  std::string text(int col) const {
    const auto* p = reinterpret_cast<const char*>(sqlite3_column_text(stmt_, col));
    return p ? std::string(p, std::size_t(sqlite3_column_bytes(stmt_, col))) : std::string();
  }
  std::int64_t integer(int col) const { return sqlite3_column_int64(stmt_, col); }

 private:
  sqlite3_stmt* stmt_ = nullptr;
};

class FileDatasetLock final : public DatasetLock {
 public:
  explicit FileDatasetLock(int fd) : fd_(fd) {}
  ~FileDatasetLock() override {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }

 private:
  int fd_;
};

class SqliteStore final : public DocumentStore {
 public:
  explicit SqliteStore(const std::string& path) : path_(path) {
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    if (sqlite3_open_v2(path.c_str(), &db_,
                        SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE | SQLITE_OPEN_FULLMUTEX,
                        nullptr) != SQLITE_OK) {
      const std::string msg = db_ ? sqlite3_errmsg(db_) : "out of memory";
      sqlite3_close(db_);
      throw Error(ErrorCode::kIo, "cannot open store " + path + ": " + msg);
    }
    sqlite3_busy_timeout(db_, 10000);
    exec("PRAGMA journal_mode=WAL");
    exec("PRAGMA synchronous=NORMAL");
    exec("CREATE TABLE IF NOT EXISTS documents ("
         " collection TEXT NOT NULL, id TEXT NOT NULL, revision INTEGER NOT NULL,"
         " body TEXT NOT NULL, PRIMARY KEY (collection, id)) WITHOUT ROWID");
  }
  ~SqliteStore() override { sqlite3_close(db_); }

  std::optional<Document> get(Collection c, std::string_view id) const override {
    std::lock_guard lock(mu_);
    Statement s(db_, "SELECT revision, body FROM documents WHERE collection = ?1 AND id = ?2");
    s.bind(1, collection_name(c)).bind(2, id);
    if (!s.step()) return std::nullopt;
    return Document{std::string(id), std::uint64_t(s.integer(0)), json::parse(s.text(1))};
  }

  std::optional<std::uint64_t> compare_and_swap(Collection c, std::string_view id,
                                                std::uint64_t expected,
                                                const json& body) override {
    std::lock_guard lock(mu_);
    const std::string text = body.dump();
    if (expected == 0) {
      Statement s(db_,
                  "INSERT OR IGNORE INTO documents (collection, id, revision, body)"
                  " VALUES (?1, ?2, 1, ?3)");
      s.bind(1, collection_name(c)).bind(2, id).bind(3, text);
      s.step();
    } else {
      Statement s(db_,
                  "UPDATE documents SET revision = revision + 1, body = ?4"
                  " WHERE collection = ?1 AND id = ?2 AND revision = ?3");
      s.bind(1, collection_name(c)).bind(2, id).bind(3, std::int64_t(expected)).bind(4, text);
      s.step();
    }
    if (sqlite3_changes(db_) != 1) return std::nullopt;
    return expected + 1;
  }

  bool erase(Collection c, std::string_view id, std::uint64_t expected) override {
    std::lock_guard lock(mu_);
    Statement s(db_, "DELETE FROM documents WHERE collection = ?1 AND id = ?2 AND revision = ?3");
    s.bind(1, collection_name(c)).bind(2, id).bind(3, std::int64_t(expected));
    s.step();
    return sqlite3_changes(db_) == 1;
  }

  std::vector<Document> list(Collection c, const Filter& filter,
                             std::string_view prefix) const override {
    std::lock_guard lock(mu_);
    // BINARY collation orders ids bytewise, like std::string.
    Statement s(db_,
                "SELECT id, revision, body FROM documents WHERE collection = ?1"
                " AND substr(CAST(id AS BLOB), 1, ?3) = CAST(?2 AS BLOB) ORDER BY id");
    s.bind(1, collection_name(c)).bind(2, prefix).bind(3, std::int64_t(prefix.size()));
    std::vector<Document> out;
    while (s.step()) {
      json body = json::parse(s.text(2));
      if (!filter.matches(body)) continue;
      out.push_back(Document{s.text(0), std::uint64_t(s.integer(1)), std::move(body)});
    }
    return out;
  }

  std::unique_ptr<DatasetLock> lock_dataset(std::string_view datasetId, bool blocking) override {
    const std::filesystem::path dir = path_ + ".locks";
    std::filesystem::create_directories(dir);
    const auto file = dir / (std::string(datasetId) + ".lock");
    const int fd = ::open(file.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (fd < 0) throw Error(ErrorCode::kIo, "cannot open lock file " + file.string());
    if (::flock(fd, LOCK_EX | (blocking ? 0 : LOCK_NB)) != 0) {
      ::close(fd);
      if (!blocking) return nullptr;
      throw Error(ErrorCode::kIo, "cannot lock " + file.string());
    }
    return std::make_unique<FileDatasetLock>(fd);
  }

 private:
  void exec(const char* sql) {
    char* err = nullptr;
    if (sqlite3_exec(db_, sql, nullptr, nullptr, &err) != SQLITE_OK) {
      const std::string msg = err ? err : "unknown";
      sqlite3_free(err);
      throw Error(ErrorCode::kIo, "sqlite: " + msg);
    }
  }

  std::string path_;
  sqlite3* db_ = nullptr;
  mutable std::mutex mu_;
};

}  // namespace

std::string_view collection_name(Collection c) noexcept {
  switch (c) {
    case Collection::kDatasets: return "datasets";
    case Collection::kWorkflows: return "workflows";
    case Collection::kAnnotationTasks: return "annotation-tasks";
    case Collection::kUsers: return "users";
    case Collection::kConfig: return "config";
    case Collection::kManifests: return "manifests";
    case Collection::kCredentials: return "credentials";
    case Collection::kSessions: return "sessions";
    case Collection::kSubmissions: return "submissions";
  }
  return "";
}

Collection parse_public_collection(std::string_view name) {
  for (Collection c : {Collection::kDatasets, Collection::kWorkflows, Collection::kAnnotationTasks,
                       Collection::kUsers, Collection::kConfig}) {
    if (collection_name(c) == name) return c;
  }
  throw Error(ErrorCode::kNotFound, "unknown collection: " + std::string(name));
}

bool Filter::matches(const json& body) const {
  for (const auto& [field, value] : equals) {
    const auto it = body.find(field);
    if (it == body.end()) {
      if (!value.is_null()) return false;
      continue;
    }
    if (*it != value) return false;
  }
  return true;
}

std::unique_ptr<DocumentStore> make_memory_store() { return std::make_unique<MemoryStore>(); }

std::unique_ptr<DocumentStore> make_sqlite_store(const std::string& path) {
  return std::make_unique<SqliteStore>(path);
}

std::unique_ptr<DocumentStore> open_store(std::string_view uri) {
  if (uri == "memory:") return make_memory_store();
  if (uri.starts_with("sqlite:")) return make_sqlite_store(std::string(uri.substr(7)));
  if (uri.empty()) throw Error(ErrorCode::kInvalidArgument, "empty store location");
  if (uri.find("://") != std::string_view::npos) {
    throw Error(ErrorCode::kInvalidArgument, "unsupported store URL: " + std::string(uri));
  }
  return make_sqlite_store(std::string(uri));
}

std::string dump_store(const DocumentStore& store, const std::vector<Collection>& collections) {
  std::ostringstream out;
  for (Collection c : collections) {
    for (const auto& doc : store.list(c)) {
      out << collection_name(c) << '\t' << doc.id << '\t' << doc.revision << '\t'
          << doc.body.dump() << '\n';
    }
  }
  return out.str();
}

}  // namespace parcur
