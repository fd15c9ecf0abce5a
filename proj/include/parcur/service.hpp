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

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "parcur/corpus.hpp"
#include "parcur/tasks.hpp"
#include "parcur/time.hpp"

namespace parcur::api {

/// One queued client action. Clients pick a fresh globally unique clientOpId
/// per action; replays reuse it.
struct SubmissionEnvelope {
  enum class Action { kSubmit, kSkip };

  std::string clientOpId;
  std::string taskId;
  Action action = Action::kSubmit;
  std::optional<std::string> text;
  Timestamp clientTimestamp{};

  /// Throws Error(kInvalidArgument) describing the first problem found.
  static SubmissionEnvelope from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

enum class SubmissionOutcome { kApplied, kDuplicate, kLeaseViolation, kNotFound, kMalformed };

std::string_view to_string(SubmissionOutcome o) noexcept;

struct SubmissionResult {
  std::string clientOpId;
  SubmissionOutcome outcome = SubmissionOutcome::kApplied;
  std::string message;

  /// HTTP-style status for the single envelope.
  int status_code() const noexcept;
  nlohmann::json to_json() const;
};

struct Session {
  std::string token;
  std::string userId;
  Timestamp expiresAt{};
};

struct ServiceOptions {
  std::chrono::seconds tokenTtl = std::chrono::hours(24 * 7);
  std::function<Timestamp()> clock = &now_utc;
  /// Invoked at named points while applying an envelope ("after-apply" sits
  /// between the task write and the dedup record). Tests throw from it to
  /// simulate a crash.
  std::function<void(std::string_view)> faultHook;
};

/// Transport-independent implementation of the translator workspace API.
class CurationService {
 public:
  CurationService(CorpusStore& store, TaskManagerOptions taskOptions = {},
                  ServiceOptions options = {});

  /// Stores a password hash for a user.
  static void set_password(CorpusStore& store, std::string_view userId,
                           std::string_view password);

  /// Error(kUnauthenticated) on bad credentials.
  Session login(std::string_view userId, std::string_view password);
  void logout(std::string_view token);
  /// Returns the userId that owns a live token; Error(kUnauthenticated)
  /// otherwise.
  std::string authenticate(std::string_view token) const;

  nlohmann::json workspace(std::string_view userId) const;

  /// Applies envelopes in order; each one yields its own result and none
  /// aborts the batch. Batches of one user are serialized.
  std::vector<SubmissionResult> submit(std::string_view userId,
                                       std::span<const nlohmann::json> envelopes);

  /// `{"directions": {tag: "LTR"|"RTL"}}`; with a tag, only that tag (LTR if
  /// unconfigured).
  nlohmann::json language_directions(std::optional<std::string_view> tag) const;

  CorpusStore& store() noexcept { return store_; }

 private:
  SubmissionResult apply(std::string_view userId, const nlohmann::json& raw);
  std::mutex& user_mutex(std::string_view userId);

  CorpusStore& store_;
  TaskManager tasks_;
  ServiceOptions options_;
  std::mutex users_mu_;
  std::map<std::string, std::unique_ptr<std::mutex>, std::less<>> user_mu_;
};

/// HTTP/1.1 binding of CurationService.
class HttpServer {
 public:
  explicit HttpServer(CurationService& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds (port 0 picks a free port) and serves on a background thread.
  /// Returns the bound port.
  int start(const std::string& host, int port);
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace parcur::api
