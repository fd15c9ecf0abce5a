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

#include "parcur/service.hpp"

#include <sodium.h>

#include <algorithm>

#include "parcur/error.hpp"

namespace parcur::api {

namespace {

using nlohmann::json;

void ensure_sodium() {
  static const bool ready = sodium_init() >= 0;
  if (!ready) throw Error(ErrorCode::kInternal, "libsodium failed to initialize");
}

std::string hex(const unsigned char* data, std::size_t n) {
  std::string out(n * 2 + 1, '\0');
  sodium_bin2hex(out.data(), out.size(), data, n);
  out.pop_back();
  return out;
}

std::string session_key(std::string_view token) {
  unsigned char digest[32];
  crypto_generichash(digest, sizeof digest, reinterpret_cast<const unsigned char*>(token.data()),
                     token.size(), nullptr, 0);
  return hex(digest, sizeof digest);
}

json text_field(const CorpusStore& store, const LanguageTag& tag, const std::string* text) {
  json j{{"lang", tag.code()}, {"dir", to_string(store.direction_of(tag))}};
  if (text) j["text"] = *text;
  return j;
}

}  // namespace

// Envelopes -----------------------------------------------------------------

SubmissionEnvelope SubmissionEnvelope::from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kInvalidArgument, "envelope must be an object");
  auto str = [&](const char* key) -> std::string {
    const auto it = j.find(key);
    if (it == j.end() || !it->is_string() || it->get_ref<const std::string&>().empty()) {
      throw Error(ErrorCode::kInvalidArgument, std::string("envelope needs a non-empty ") + key);
    }
    return it->get<std::string>();
  };
  SubmissionEnvelope e;
  e.clientOpId = str("clientOpId");
  e.taskId = str("taskId");
  const std::string action = str("action");
  if (action == "submit") {
    e.action = Action::kSubmit;
  } else if (action == "skip") {
    e.action = Action::kSkip;
  } else {
    throw Error(ErrorCode::kInvalidArgument, "action must be submit or skip");
  }
  if (const auto it = j.find("text"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw Error(ErrorCode::kInvalidArgument, "text must be a string");
    e.text = it->get<std::string>();
  }
  if (e.action == Action::kSubmit && !e.text) {
    throw Error(ErrorCode::kInvalidArgument, "submit envelopes carry text");
  }
  e.clientTimestamp = parse_rfc3339(str("clientTimestamp"));
  return e;
}

json SubmissionEnvelope::to_json() const {
  json j{{"clientOpId", clientOpId},
         {"taskId", taskId},
         {"action", action == Action::kSubmit ? "submit" : "skip"},
         {"clientTimestamp", format_rfc3339(clientTimestamp)}};
  if (text) j["text"] = *text;
  return j;
}

std::string_view to_string(SubmissionOutcome o) noexcept {
  switch (o) {
    case SubmissionOutcome::kApplied: return "applied";
    case SubmissionOutcome::kDuplicate: return "duplicate";
    case SubmissionOutcome::kLeaseViolation: return "lease-violation";
    case SubmissionOutcome::kNotFound: return "not-found";
    case SubmissionOutcome::kMalformed: return "malformed";
  }
  return "malformed";
}

int SubmissionResult::status_code() const noexcept {
  switch (outcome) {
    case SubmissionOutcome::kApplied:
    case SubmissionOutcome::kDuplicate: return 200;
    case SubmissionOutcome::kLeaseViolation: return 409;
    case SubmissionOutcome::kNotFound: return 404;
    case SubmissionOutcome::kMalformed: return 400;
  }
  return 400;
}

json SubmissionResult::to_json() const {
  json j{{"clientOpId", clientOpId}, {"result", to_string(outcome)}, {"status", status_code()}};
  if (!message.empty()) j["message"] = message;
  return j;
}

// Service -------------------------------------------------------------------

CurationService::CurationService(CorpusStore& store, TaskManagerOptions taskOptions,
                                 ServiceOptions options)
    : store_(store), tasks_(store, taskOptions), options_(std::move(options)) {
  ensure_sodium();
}

void CurationService::set_password(CorpusStore& store, std::string_view userId,
                                   std::string_view password) {
  ensure_sodium();
  if (!store.get_user(userId)) {
    throw Error(ErrorCode::kNotFound, "unknown user: " + std::string(userId));
  }
  char hash[crypto_pwhash_STRBYTES];
  if (crypto_pwhash_str(hash, password.data(), password.size(),
                        crypto_pwhash_OPSLIMIT_INTERACTIVE,
                        crypto_pwhash_MEMLIMIT_INTERACTIVE) != 0) {
    throw Error(ErrorCode::kInternal, "password hashing ran out of memory");
  }
  const json body{{"userId", userId}, {"passwordHash", hash}};
  auto& docs = store.documents();
  for (;;) {
    const auto doc = docs.get(Collection::kCredentials, userId);
    if (docs.compare_and_swap(Collection::kCredentials, userId, doc ? doc->revision : 0, body)) {
      return;
    }
  }
}

Session CurationService::login(std::string_view userId, std::string_view password) {
  const auto creds = store_.documents().get(Collection::kCredentials, userId);
  if (!creds || !store_.get_user(userId)) {
    throw Error(ErrorCode::kUnauthenticated, "bad credentials");
  }
  const std::string hash = creds->body.at("passwordHash").get<std::string>();
  if (crypto_pwhash_str_verify(hash.c_str(), password.data(), password.size()) != 0) {
    throw Error(ErrorCode::kUnauthenticated, "bad credentials");
  }
  unsigned char raw[32];
  randombytes_buf(raw, sizeof raw);
  Session s{hex(raw, sizeof raw), std::string(userId), options_.clock() + options_.tokenTtl};
  const json body{{"userId", s.userId}, {"expiresAt", format_rfc3339(s.expiresAt)}};
  if (!store_.documents().compare_and_swap(Collection::kSessions, session_key(s.token), 0, body)) {
    throw Error(ErrorCode::kInternal, "session id collision");
  }
  return s;
}

void CurationService::logout(std::string_view token) {
  const std::string key = session_key(token);
  if (const auto doc = store_.documents().get(Collection::kSessions, key)) {
    store_.documents().erase(Collection::kSessions, key, doc->revision);
  }
}

std::string CurationService::authenticate(std::string_view token) const {
  if (token.empty()) throw Error(ErrorCode::kUnauthenticated, "missing bearer token");
  const auto doc = store_.documents().get(Collection::kSessions, session_key(token));
  if (!doc) throw Error(ErrorCode::kUnauthenticated, "unknown or revoked token");
  if (parse_rfc3339(doc->body.at("expiresAt").get<std::string>()) <= options_.clock()) {
    throw Error(ErrorCode::kUnauthenticated, "token expired");
  }
  return doc->body.at("userId").get<std::string>();
}

json CurationService::workspace(std::string_view userId) const {
  const auto user = store_.get_user(userId);
  if (!user) throw Error(ErrorCode::kUnauthenticated, "unknown user: " + std::string(userId));

  auto mine = store_.list_tasks(Filter{}.where("assignee", std::string(userId)));
  std::map<TaskType, std::pair<std::size_t, std::size_t>> counters{
      {TaskType::kTranslation, {0, 0}}, {TaskType::kCopyedit, {0, 0}}};
  std::vector<const AnnotationTask*> open;
  for (const auto& [task, revision] : mine) {
    if (task.status == TaskStatus::kAssigned) {
      ++counters[task.type].first;
      open.push_back(&task);
    } else if (task.status == TaskStatus::kCompleted) {
      ++counters[task.type].second;
    }
  }
  std::sort(open.begin(), open.end(), [](const auto* a, const auto* b) {
    return std::tie(a->priority, a->round, a->taskId) < std::tie(b->priority, b->round, b->taskId);
  });

  json directions = json::object();
  auto note = [&](const LanguageTag& tag) {
    directions[tag.code()] = to_string(store_.direction_of(tag));
  };
  json items = json::array();
  for (const auto* task : open) {
    const auto segment = store_.get_segment(task->datasetId, task->segmentId);
    const auto workflow = store_.get_workflow(task->workflowId);
    if (!segment || !workflow) continue;
    const LanguageTag& target = workflow->value.targetLanguage;
    json sources = json::array();
    for (const auto& tag : user->preferredSourceLanguages) {
      const auto it = segment->sources.find(tag);
      if (it == segment->sources.end() || tag == target) continue;
      sources.push_back(text_field(store_, tag, &it->second));
      note(tag);
    }
    note(target);
    json item{{"taskId", task->taskId},
              {"workflowId", task->workflowId},
              {"datasetId", task->datasetId},
              {"segmentId", task->segmentId},
              {"type", to_string(task->type)},
              {"round", task->round},
              {"priority", task->priority},
              {"leaseExpiresAt", format_rfc3339(*task->leaseExpiresAt)},
              {"sources", std::move(sources)},
              {"target", text_field(store_, target, nullptr)},
              {"seed", nullptr}};
    if (task->type == TaskType::kCopyedit) {
      if (const auto prior = segment->text_at_or_before(task->round)) {
        json seed = text_field(store_, target, &*prior);
        seed["version"] = "v" + std::to_string(task->round);
        item["seed"] = std::move(seed);
      }
    }
    items.push_back(std::move(item));
  }

  json counterJson = json::object();
  for (const auto& [type, c] : counters) {
    counterJson[std::string(to_string(type))] = {{"open", c.first}, {"completed", c.second}};
  }
  return json{{"userId", userId},
              {"tasks", std::move(items)},
              {"counters", std::move(counterJson)},
              {"languageDirections", std::move(directions)}};
}

std::mutex& CurationService::user_mutex(std::string_view userId) {
  std::lock_guard lock(users_mu_);
  auto it = user_mu_.find(userId);
  if (it == user_mu_.end()) {
    it = user_mu_.emplace(std::string(userId), std::make_unique<std::mutex>()).first;
  }
  return *it->second;
}

std::vector<SubmissionResult> CurationService::submit(std::string_view userId,
                                                      std::span<const json> envelopes) {
  std::lock_guard lock(user_mutex(userId));
  std::vector<SubmissionResult> results;
  results.reserve(envelopes.size());
  for (const auto& raw : envelopes) results.push_back(apply(userId, raw));
  return results;
}

SubmissionResult CurationService::apply(std::string_view userId, const json& raw) {
  SubmissionResult result;
  SubmissionEnvelope env;
  try {
    env = SubmissionEnvelope::from_json(raw);
  } catch (const Error& e) {
    if (raw.is_object() && raw.contains("clientOpId") && raw["clientOpId"].is_string()) {
      result.clientOpId = raw["clientOpId"].get<std::string>();
    }
    result.outcome = SubmissionOutcome::kMalformed;
    result.message = e.what();
    return result;
  }
  result.clientOpId = env.clientOpId;

  auto& docs = store_.documents();
  const std::string dedupId = std::string(userId) + "/" + env.clientOpId;
  if (docs.get(Collection::kSubmissions, dedupId)) {
    result.outcome = SubmissionOutcome::kDuplicate;
    return result;
  }

  // Offline work is judged at the time it was done, never later than now.
  const Timestamp at = std::min(env.clientTimestamp, options_.clock());
  std::optional<SubmissionOutcome> recorded;
  const auto task = store_.get_task(env.taskId);
  if (!task) {
    result.outcome = SubmissionOutcome::kNotFound;
    result.message = "unknown task: " + env.taskId;
  } else if ((env.action == SubmissionEnvelope::Action::kSubmit &&
              task->value.completedByOp == env.clientOpId && task->value.assignee == userId) ||
             (env.action == SubmissionEnvelope::Action::kSkip &&
              std::any_of(task->value.skips.begin(), task->value.skips.end(),
                          [&](const SkipRecord& s) {
                            return s.clientOpId == env.clientOpId && s.userId == userId;
                          }))) {
    // Applied earlier but the dedup record was never written.
    result.outcome = SubmissionOutcome::kDuplicate;
    recorded = SubmissionOutcome::kApplied;
  } else {
    try {
      if (env.action == SubmissionEnvelope::Action::kSubmit) {
        tasks_.complete_task(env.taskId, userId, *env.text, at, env.clientOpId);
      } else {
        tasks_.skip_task(env.taskId, userId, at, env.clientOpId);
      }
      result.outcome = SubmissionOutcome::kApplied;
    } catch (const Error& e) {
      result.message = e.what();
      switch (e.code()) {
        case ErrorCode::kLeaseViolation: result.outcome = SubmissionOutcome::kLeaseViolation; break;
        case ErrorCode::kNotFound: result.outcome = SubmissionOutcome::kNotFound; break;
        case ErrorCode::kInvalidArgument:
          result.outcome = SubmissionOutcome::kMalformed;
          return result;
        default: throw;
      }
    }
  }
  if (options_.faultHook && result.outcome == SubmissionOutcome::kApplied) {
    options_.faultHook("after-apply");
  }
  if (!recorded) recorded = result.outcome;

  const json record{{"userId", userId},
                    {"clientOpId", env.clientOpId},
                    {"taskId", env.taskId},
                    {"action", env.action == SubmissionEnvelope::Action::kSubmit ? "submit" : "skip"},
                    {"clientTimestamp", format_rfc3339(env.clientTimestamp)},
                    {"outcome", to_string(*recorded)}};
  docs.compare_and_swap(Collection::kSubmissions, dedupId, 0, record);
  return result;
}

json CurationService::language_directions(std::optional<std::string_view> tag) const {
  json directions = json::object();
  if (tag) {
    const auto parsed = LanguageTag::parse(*tag);
    directions[parsed.code()] = to_string(store_.direction_of(parsed));
  } else {
    for (const auto& [t, d] : store_.directions()) directions[t.code()] = to_string(d);
  }
  return json{{"directions", std::move(directions)}, {"default", "LTR"}};
}

}  // namespace parcur::api
