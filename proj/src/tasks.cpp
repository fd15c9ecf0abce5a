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

#include "parcur/tasks.hpp"

#include <algorithm>
#include <map>

#include "parcur/error.hpp"
#include "parcur/unicode.hpp"

namespace parcur {

CompletionHistory::CompletionHistory(std::span<const AnnotationTask> tasks) {
  for (const auto& t : tasks) {
    if (t.status == TaskStatus::kCompleted) record(t);
  }
}

void CompletionHistory::record(const AnnotationTask& completed) {
  if (completed.assignee) {
    done_.emplace(*completed.assignee, completed.datasetId, completed.segmentId);
  }
}

bool CompletionHistory::has_completed(std::string_view userId, std::string_view datasetId,
                                      std::string_view segmentId) const {
  return done_.contains(std::make_tuple(std::string(userId), std::string(datasetId),
                                        std::string(segmentId)));
}

bool is_eligible(const UserProfile& user, const AnnotationTask& task,
                 const CompletionHistory& history, std::size_t openAssignments) {
  if (task.type == TaskType::kTranslation) {
    if (!user.isActiveTranslator) return false;
  } else {
    if (!user.isActiveVerifier) return false;
    if (user.verifierLevel < task.round) return false;
  }
  if (history.has_completed(user.userId, task.datasetId, task.segmentId)) return false;
  return openAssignments < std::size_t(std::max(user.maxOpenTasks, 0));
}

bool is_eligible(const UserProfile& user, const AnnotationTask& task,
                 std::span<const AnnotationTask> priorCompletions, std::size_t openAssignments) {
  CompletionHistory history;
  for (const auto& t : priorCompletions) {
    if (t.status == TaskStatus::kCompleted && t.assignee == user.userId) history.record(t);
  }
  return is_eligible(user, task, history, openAssignments);
}

std::size_t TaskManager::revoke_expired(Timestamp now, const DatasetScope& scope) {
  std::size_t revoked = 0;
  for (auto& [task, revision] : store_.list_tasks(Filter{}.where("status", "assigned"))) {
    if (scope && !scope(task.datasetId)) continue;
    if (!task.leaseExpiresAt || *task.leaseExpiresAt >= now) continue;
    task.status = TaskStatus::kUnassigned;
    task.assignee.reset();
    task.leaseExpiresAt.reset();
    if (store_.update_task(task, revision)) ++revoked;
  }
  return revoked;
}

std::vector<Assignment> TaskManager::assign_tasks(Timestamp now, const DatasetScope& scope) {
  std::vector<Assignment> out;
  const auto users = store_.list_users();
  if (users.empty()) return out;

  std::map<std::string, std::size_t, std::less<>> open;
  CompletionHistory history;
  std::vector<Versioned<AnnotationTask>> pending;
  for (auto& v : store_.list_tasks()) {
    switch (v.value.status) {
      case TaskStatus::kAssigned:
        if (v.value.assignee) ++open[*v.value.assignee];
        break;
      case TaskStatus::kCompleted: history.record(v.value); break;
      case TaskStatus::kUnassigned:
        if (!scope || scope(v.value.datasetId)) pending.push_back(std::move(v));
        break;
    }
  }
  std::sort(pending.begin(), pending.end(), [](const auto& a, const auto& b) {
    return std::tie(a.value.priority, a.value.round, a.value.taskId) <
           std::tie(b.value.priority, b.value.round, b.value.taskId);
  });

  for (auto& [task, revision] : pending) {
    const UserProfile* best = nullptr;
    std::tuple<bool, std::size_t> bestKey{};
    for (const auto& user : users) {
      const std::size_t load = open[user.userId];
      if (!is_eligible(user, task, history, load)) continue;
      const bool skipped = std::any_of(task.skips.begin(), task.skips.end(),
                                       [&](const SkipRecord& s) { return s.userId == user.userId; });
      // users are listed by id, so a strict comparison keeps the smaller id on ties
      const std::tuple<bool, std::size_t> key{skipped, load};
      if (best == nullptr || key < bestKey) {
        best = &user;
        bestKey = key;
      }
    }
    if (best == nullptr) continue;
    task.status = TaskStatus::kAssigned;
    task.assignee = best->userId;
    task.leaseExpiresAt = now + options_.leasePeriod;
    if (store_.update_task(task, revision)) {
      ++open[best->userId];
      out.push_back({task.taskId, best->userId});
    }
  }
  return out;
}

CompletionResult TaskManager::complete_task(std::string_view taskId, std::string_view userId,
                                            std::string_view resultText, Timestamp now,
                                            std::string_view clientOpId) {
  if (resultText.find_first_of("\r\n") != std::string_view::npos) {
    throw Error(ErrorCode::kInvalidArgument, "result text must be a single line");
  }
  const std::string text = unicode::nfc(resultText);
  for (;;) {
    auto current = store_.get_task(taskId);
    if (!current) throw Error(ErrorCode::kNotFound, "unknown task: " + std::string(taskId));
    auto& [task, revision] = *current;
    if (task.status != TaskStatus::kAssigned || task.assignee != userId) {
      throw Error(ErrorCode::kLeaseViolation,
                  "task " + task.taskId + " is not leased to " + std::string(userId));
    }
    if (*task.leaseExpiresAt < now) {
      throw Error(ErrorCode::kLeaseViolation, "lease on task " + task.taskId + " has expired");
    }
    const auto segment = store_.get_segment(task.datasetId, task.segmentId);
    if (!segment) {
      throw Error(ErrorCode::kNotFound, "segment of task " + task.taskId + " is missing");
    }
    if (task.type == TaskType::kCopyedit) {
      const auto previous = segment->text_at_or_before(task.round);
      if (!previous || int(segment->targetVersions.size()) < task.round) {
        throw Error(ErrorCode::kIntegrity,
                    "segment lacks v" + std::to_string(task.round) + " for task " + task.taskId);
      }
      task.editedFlag = text != *previous;
    }
    task.status = TaskStatus::kCompleted;
    task.resultText = text;
    task.completedAt = now;
    if (!clientOpId.empty()) task.completedByOp = std::string(clientOpId);
    if (!store_.update_task(task, revision)) continue;
    auto updated = store_.append_target_version(task.datasetId, task.segmentId,
                                                task.produced_version(), text, userId, now);
    return {std::move(task), std::move(updated)};
  }
}

AnnotationTask TaskManager::skip_task(std::string_view taskId, std::string_view userId,
                                      Timestamp now, std::string_view clientOpId) {
  for (;;) {
    auto current = store_.get_task(taskId);
    if (!current) throw Error(ErrorCode::kNotFound, "unknown task: " + std::string(taskId));
    auto& [task, revision] = *current;
    if (task.status != TaskStatus::kAssigned || task.assignee != userId) {
      throw Error(ErrorCode::kLeaseViolation,
                  "task " + task.taskId + " is not leased to " + std::string(userId));
    }
    task.status = TaskStatus::kUnassigned;
    task.assignee.reset();
    task.leaseExpiresAt.reset();
    task.skips.push_back(SkipRecord{std::string(userId), now, std::string(clientOpId)});
    if (store_.update_task(task, revision)) return task;
  }
}

}  // namespace parcur
