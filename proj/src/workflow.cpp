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

#include "parcur/workflow.hpp"

#include <algorithm>
#include <map>

#include "parcur/error.hpp"
#include "parcur/unicode.hpp"

namespace parcur {

namespace {

[[noreturn]] void integrity(const Workflow& w, const std::string& what) {
  throw Error(ErrorCode::kIntegrity, "workflow " + w.workflowId + ": " + what);
}

bool changed(const AnnotationTask& before, const AnnotationTask& after) {
  return unicode::nfc(*before.resultText) != unicode::nfc(*after.resultText);
}

// A completion commits the task first and appends the target version second;
// if the process stopped in between, the version is appended here before the
// workflow moves on.
void repair_versions(CorpusStore& store, const Workflow& w, std::span<const AnnotationTask> tasks) {
  std::vector<const AnnotationTask*> done;
  for (const auto& t : tasks) {
    if (t.status == TaskStatus::kCompleted) done.push_back(&t);
  }
  if (done.empty()) return;
  std::sort(done.begin(), done.end(), [](const auto* a, const auto* b) { return a->round < b->round; });
  auto segment = store.get_segment(w.datasetId, w.segmentId);
  if (!segment) integrity(w, "segment is missing");
  for (const auto* t : done) {
    if (int(segment->targetVersions.size()) >= t->produced_version()) continue;
    if (!t->assignee || !t->completedAt) {
      integrity(w, "completed task " + t->taskId + " lacks its author or time");
    }
    *segment = store.append_target_version(w.datasetId, w.segmentId, t->produced_version(),
                                           *t->resultText, *t->assignee, *t->completedAt);
  }
}

}  // namespace

WorkflowRuleOutcome next_action(const Workflow& workflow, std::span<const AnnotationTask> tasks) {
  std::vector<const AnnotationTask*> byRound;
  for (const auto& t : tasks) {
    if (t.workflowId != workflow.workflowId) integrity(workflow, "foreign task " + t.taskId);
    const bool typeOk = t.type == TaskType::kTranslation ? t.round == 0 : (t.round >= 1 && t.round <= 3);
    if (!typeOk) integrity(workflow, "task " + t.taskId + " has a round that does not fit its type");
    byRound.push_back(&t);
  }
  std::sort(byRound.begin(), byRound.end(),
            [](const auto* a, const auto* b) { return a->round < b->round; });
  for (std::size_t i = 0; i < byRound.size(); ++i) {
    if (byRound[i]->round != int(i)) {
      integrity(workflow, "round " + std::to_string(i) + " is missing or duplicated");
    }
  }

  bool outstanding = false;
  for (std::size_t i = 0; i < byRound.size(); ++i) {
    const auto& t = *byRound[i];
    if (t.status == TaskStatus::kCompleted) {
      if (!t.resultText) integrity(workflow, "completed task " + t.taskId + " has no result");
      if (outstanding) integrity(workflow, "task " + t.taskId + " completed after an open round");
    } else {
      outstanding = true;
    }
  }
  if (outstanding || workflow.status == WorkflowStatus::kCompleted) {
    if (workflow.status == WorkflowStatus::kCompleted && outstanding) {
      integrity(workflow, "completed workflow has an open task");
    }
    return WorkflowRuleOutcome::noop();
  }

  switch (byRound.size()) {
    case 0: return WorkflowRuleOutcome::create(TaskType::kTranslation, 0);
    case 1: return WorkflowRuleOutcome::create(TaskType::kCopyedit, 1);
    case 2: return WorkflowRuleOutcome::create(TaskType::kCopyedit, 2);
    case 3: {
      const bool edited = changed(*byRound[0], *byRound[1]) || changed(*byRound[1], *byRound[2]);
      return edited ? WorkflowRuleOutcome::create(TaskType::kCopyedit, 3)
                    : WorkflowRuleOutcome::complete();
    }
    case 4: {
      const bool edited = changed(*byRound[0], *byRound[1]) || changed(*byRound[1], *byRound[2]);
      if (!edited) integrity(workflow, "round 3 exists although rounds 1 and 2 made no edit");
      return WorkflowRuleOutcome::complete();
    }
    default: integrity(workflow, "more than three copyedit rounds");
  }
}

AdvanceReport WorkflowEngine::advance_all([[maybe_unused]] Timestamp now,
                                          const DatasetScope& scope) {
  AdvanceReport report;
  auto workflows = store_.list_workflows(Filter{}.where("status", "active"));
  std::stable_sort(workflows.begin(), workflows.end(), [](const auto& a, const auto& b) {
    return a.value.priority < b.value.priority;
  });

  std::map<std::string, std::vector<AnnotationTask>, std::less<>> tasksByWorkflow;
  for (auto& t : store_.list_tasks()) {
    tasksByWorkflow[t.value.workflowId].push_back(std::move(t.value));
  }

  for (const auto& [workflow, revision] : workflows) {
    if (scope && !scope(workflow.datasetId)) continue;
    try {
      const auto it = tasksByWorkflow.find(workflow.workflowId);
      const std::span<const AnnotationTask> history =
          it == tasksByWorkflow.end() ? std::span<const AnnotationTask>{}
                                      : std::span<const AnnotationTask>(it->second);
      const auto outcome = next_action(workflow, history);
      if (outcome.action != WorkflowRuleOutcome::Action::kNoop) {
        repair_versions(store_, workflow, history);
      }
      switch (outcome.action) {
        case WorkflowRuleOutcome::Action::kNoop: break;
        case WorkflowRuleOutcome::Action::kCreateTask: {
          AnnotationTask task;
          task.taskId = task_id_for(workflow.workflowId, outcome.taskToCreate->round);
          task.workflowId = workflow.workflowId;
          task.datasetId = workflow.datasetId;
          task.segmentId = workflow.segmentId;
          task.type = outcome.taskToCreate->type;
          task.round = outcome.taskToCreate->round;
          task.priority = workflow.priority;
          if (store_.create_task(task)) {
            ++report.actions;
            ++report.tasksCreated;
          }
          break;
        }
        case WorkflowRuleOutcome::Action::kComplete: {
          Workflow done = workflow;
          done.status = WorkflowStatus::kCompleted;
          if (store_.update_workflow(done, revision)) {
            ++report.actions;
            ++report.workflowsCompleted;
          }
          break;
        }
      }
    } catch (const std::exception& e) {
      report.failures.push_back(workflow.workflowId + ": " + e.what());
    }
  }
  return report;
}

}  // namespace parcur
