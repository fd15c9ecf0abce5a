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
#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "parcur/corpus.hpp"
#include "parcur/model.hpp"

namespace parcur {

/// Which (user, segment) pairs already have a completed task.
class CompletionHistory {
 public:
  CompletionHistory() = default;
  explicit CompletionHistory(std::span<const AnnotationTask> tasks);

  void record(const AnnotationTask& completed);
  bool has_completed(std::string_view userId, std::string_view datasetId,
                     std::string_view segmentId) const;

 private:
  std::set<std::tuple<std::string, std::string, std::string>, std::less<>> done_;
};

/// True iff the user holds the task's role, has a sufficient verifier level
/// for the round, has not completed a task on the same segment, and is below
/// their open-assignment cap.
bool is_eligible(const UserProfile& user, const AnnotationTask& task,
                 const CompletionHistory& history, std::size_t openAssignments);

/// Convenience form taking the user's prior completed tasks directly.
bool is_eligible(const UserProfile& user, const AnnotationTask& task,
                 std::span<const AnnotationTask> priorCompletions, std::size_t openAssignments);

struct TaskManagerOptions {
  std::chrono::seconds leasePeriod = std::chrono::hours(48);
};

struct Assignment {
  std::string taskId;
  std::string userId;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct CompletionResult {
  AnnotationTask task;
  MultilingualSegment segment;
};

class TaskManager {
 public:
  explicit TaskManager(CorpusStore& store, TaskManagerOptions options = {})
      : store_(store), options_(options) {}

  const TaskManagerOptions& options() const noexcept { return options_; }

  /// Returns every assigned task whose lease ended before `now` to the pool.
  std::size_t revoke_expired(Timestamp now, const DatasetScope& scope = {});

  /// Leases unassigned tasks in (priority, round, taskId) order. Among the
  /// eligible users, those who skipped the task come last, then fewer open
  /// assignments, then smaller userId.
  std::vector<Assignment> assign_tasks(Timestamp now, const DatasetScope& scope = {});

  /// Records `resultText` and appends the produced target version. The task
  /// must be assigned to `userId` with a lease that has not ended at `now`,
  /// otherwise Error(kLeaseViolation).
  CompletionResult complete_task(std::string_view taskId, std::string_view userId,
                                 std::string_view resultText, Timestamp now,
                                 std::string_view clientOpId = {});

  AnnotationTask skip_task(std::string_view taskId, std::string_view userId, Timestamp now,
                           std::string_view clientOpId = {});

 private:
  CorpusStore& store_;
  TaskManagerOptions options_;
};

}  // namespace parcur
