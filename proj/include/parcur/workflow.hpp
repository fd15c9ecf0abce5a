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

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "parcur/corpus.hpp"
#include "parcur/model.hpp"

namespace parcur {

struct TaskSpec {
  TaskType type = TaskType::kTranslation;
  int round = 0;

  friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
};

struct WorkflowRuleOutcome {
  enum class Action { kCreateTask, kComplete, kNoop };

  Action action = Action::kNoop;
  std::optional<TaskSpec> taskToCreate;

  static WorkflowRuleOutcome create(TaskType type, int round) {
    return {Action::kCreateTask, TaskSpec{type, round}};
  }
  static WorkflowRuleOutcome complete() { return {Action::kComplete, std::nullopt}; }
  static WorkflowRuleOutcome noop() { return {Action::kNoop, std::nullopt}; }

  friend bool operator==(const WorkflowRuleOutcome&, const WorkflowRuleOutcome&) = default;
};

/// The curation rule for one segment: translate once, copyedit twice, and
/// copyedit a third time iff either of the first two rounds changed the text.
/// `tasks` are all tasks of `workflow` in any order. Throws Error(kIntegrity)
/// when the history could not have been produced by this rule.
WorkflowRuleOutcome next_action(const Workflow& workflow, std::span<const AnnotationTask> tasks);

struct AdvanceReport {
  std::size_t actions = 0;
  std::size_t tasksCreated = 0;
  std::size_t workflowsCompleted = 0;
  /// `workflowId: message` for each workflow that could not be advanced.
  std::vector<std::string> failures;
};

class WorkflowEngine {
 public:
  explicit WorkflowEngine(CorpusStore& store) : store_(store) {}

  /// Visits active workflows in ascending priority and applies next_action
  /// to each. Task creation is keyed by a deterministic task id, so repeated
  /// or racing passes create each task once.
  AdvanceReport advance_all(Timestamp now, const DatasetScope& scope = {});

 private:
  CorpusStore& store_;
};

}  // namespace parcur
