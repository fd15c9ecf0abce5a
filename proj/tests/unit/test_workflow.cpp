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

#include <doctest.h>

#include <random>

#include "parcur/error.hpp"
#include "parcur/store.hpp"
#include "parcur/tasks.hpp"
#include "parcur/workflow.hpp"
#include "../support/simulation.hpp"

using namespace parcur;
using namespace std::chrono;
using Action = WorkflowRuleOutcome::Action;

namespace {

// Expected outcome for a well-formed history, looked up from the rule table:
// (completed rounds, any round open, round-1 or round-2 edited) -> outcome.
std::optional<WorkflowRuleOutcome> rule_table(std::size_t completed, bool open, bool edited,
                                              bool workflowDone) {
  if (open || workflowDone) return WorkflowRuleOutcome::noop();
  struct Row {
    std::size_t completed;
    int edited;  // -1: either
    WorkflowRuleOutcome outcome;
  };
  static const Row table[] = {
      {0, -1, WorkflowRuleOutcome::create(TaskType::kTranslation, 0)},
      {1, -1, WorkflowRuleOutcome::create(TaskType::kCopyedit, 1)},
      {2, -1, WorkflowRuleOutcome::create(TaskType::kCopyedit, 2)},
      {3, 1, WorkflowRuleOutcome::create(TaskType::kCopyedit, 3)},
      {3, 0, WorkflowRuleOutcome::complete()},
      {4, 1, WorkflowRuleOutcome::complete()},
  };
  for (const auto& row : table) {
    if (row.completed == completed && (row.edited < 0 || row.edited == int(edited))) {
      return row.outcome;
    }
  }
  return std::nullopt;  // not a reachable state
}

AnnotationTask make_task(const Workflow& w, int round, TaskStatus status, std::string text) {
  AnnotationTask t;
  t.taskId = task_id_for(w.workflowId, round);
  t.workflowId = w.workflowId;
  t.datasetId = w.datasetId;
  t.segmentId = w.segmentId;
  t.type = round == 0 ? TaskType::kTranslation : TaskType::kCopyedit;
  t.round = round;
  t.status = status;
  if (status != TaskStatus::kUnassigned) {
    t.assignee = "u" + std::to_string(round);
    t.leaseExpiresAt = sys_days(year{2024} / 1 / 1);
  }
  if (status == TaskStatus::kCompleted) {
    t.resultText = std::move(text);
    t.completedAt = sys_days(year{2024} / 1 / 1);
  }
  return t;
}

}  // namespace

TEST_SUITE("workflow") {
  TEST_CASE("rule examples") {
    Workflow w;
    w.workflowId = "d/00000000";
    CHECK(next_action(w, {}) == WorkflowRuleOutcome::create(TaskType::kTranslation, 0));

    std::vector<AnnotationTask> h = {make_task(w, 0, TaskStatus::kCompleted, "a"),
                                     make_task(w, 1, TaskStatus::kCompleted, "a"),
                                     make_task(w, 2, TaskStatus::kCompleted, "a")};
    CHECK(next_action(w, h) == WorkflowRuleOutcome::complete());
    h[2].resultText = "b";
    CHECK(next_action(w, h) == WorkflowRuleOutcome::create(TaskType::kCopyedit, 3));
    // canonically equivalent spellings are not an edit
    h[0].resultText = h[1].resultText = "\xC3\xA9";
    h[2].resultText = "e\xCC\x81";
    CHECK(next_action(w, h) == WorkflowRuleOutcome::complete());
    h[2].status = TaskStatus::kAssigned;
    CHECK(next_action(w, h) == WorkflowRuleOutcome::noop());
  }

  TEST_CASE("malformed histories are integrity errors") {
    Workflow w;
    w.workflowId = "w";
    auto expect_integrity = [&](const std::vector<AnnotationTask>& h) {
      try {
        next_action(w, h);
        FAIL("no error");
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::kIntegrity);
      }
    };
    expect_integrity({make_task(w, 1, TaskStatus::kCompleted, "a")});
    expect_integrity({make_task(w, 0, TaskStatus::kCompleted, "a"),
                      make_task(w, 0, TaskStatus::kCompleted, "a")});
    expect_integrity({make_task(w, 0, TaskStatus::kAssigned, ""),
                      make_task(w, 1, TaskStatus::kCompleted, "a")});
    expect_integrity({make_task(w, 0, TaskStatus::kCompleted, "a"),
                      make_task(w, 1, TaskStatus::kCompleted, "a"),
                      make_task(w, 2, TaskStatus::kCompleted, "a"),
                      make_task(w, 3, TaskStatus::kCompleted, "a")});
    auto foreign = make_task(w, 0, TaskStatus::kCompleted, "a");
    foreign.workflowId = "other";
    expect_integrity({foreign});
    w.status = WorkflowStatus::kCompleted;
    expect_integrity({make_task(w, 0, TaskStatus::kUnassigned, "")});
  }

  TEST_CASE("next_action matches the rule table on 1000 random histories") {
    std::mt19937 rng(2024);
    const char* texts[] = {"a", "b", "\xC3\xA9", "e\xCC\x81"};
    std::size_t checked = 0;
    for (int i = 0; i < 1000; ++i) {
      Workflow w;
      w.workflowId = "d/" + segment_id_for_position(i);
      w.status = rng() % 5 == 0 ? WorkflowStatus::kCompleted : WorkflowStatus::kActive;
      const std::size_t rounds = rng() % 5;
      // completed prefix, then at most one open round
      const std::size_t done = rounds == 0 ? 0 : rounds - (rng() % 3 == 0 ? 1 : 0);
      std::vector<AnnotationTask> history;
      for (std::size_t r = 0; r < rounds; ++r) {
        const auto status = r < done ? TaskStatus::kCompleted
                                     : (rng() % 2 ? TaskStatus::kAssigned : TaskStatus::kUnassigned);
        history.push_back(make_task(w, int(r), status, texts[rng() % 4]));
      }
      std::shuffle(history.begin(), history.end(), rng);
      std::vector<std::string> byRound(rounds);
      for (const auto& t : history) byRound[t.round] = t.resultText.value_or("");
      auto canon = [](const std::string& s) { return s == "e\xCC\x81" ? std::string("\xC3\xA9") : s; };
      const bool edited = done >= 3 && (canon(byRound[0]) != canon(byRound[1]) ||
                                        canon(byRound[1]) != canon(byRound[2]));
      const bool open = done < rounds;
      const auto expected = rule_table(done, open, edited, w.status == WorkflowStatus::kCompleted);
      INFO("case " << i << " rounds=" << rounds << " done=" << done);
      if (expected && !(open && w.status == WorkflowStatus::kCompleted)) {
        CHECK(next_action(w, history) == *expected);
        ++checked;
      } else {
        CHECK_THROWS_AS(next_action(w, history), Error);
      }
    }
    CHECK(checked > 700);
  }

  TEST_CASE("advance_all creates, completes and is idempotent") {
    auto docs = make_memory_store();
    CorpusStore store(*docs);
    for (auto& u : testing::mixed_users()) store.put_user(u);
    testing::seed_dataset(store, "d", 3);
    testing::seed_dataset(store, "e", 2);
    WorkflowEngine engine(store);
    const Timestamp now = sys_days(year{2024} / 2 / 1);

    auto only_d = [](std::string_view ds) { return ds == "d"; };
    auto report = engine.advance_all(now, only_d);
    CHECK(report.tasksCreated == 3);
    CHECK(engine.advance_all(now, only_d).actions == 0);
    CHECK(engine.advance_all(now).tasksCreated == 2);
    CHECK(engine.advance_all(now).actions == 0);

    // Drive d/00000000 through three unedited rounds.
    TaskManager tasks(store);
    for (int round = 0; round < 3; ++round) {
      tasks.assign_tasks(now);
      const auto t = store.get_task(task_id_for("d/00000000", round))->value;
      REQUIRE(t.status == TaskStatus::kAssigned);
      tasks.complete_task(t.taskId, *t.assignee, "same", now);
      report = engine.advance_all(now);
      CHECK(report.failures.empty());
    }
    CHECK(store.get_workflow("d/00000000")->value.status == WorkflowStatus::kCompleted);
    CHECK_FALSE(store.get_task("d/00000000/r3"));
    CHECK(engine.advance_all(now).actions == 0);
  }

  TEST_CASE("advance_all repairs a version lost between the two writes") {
    auto docs = make_memory_store();
    CorpusStore store(*docs);
    for (auto& u : testing::mixed_users()) store.put_user(u);
    testing::seed_dataset(store, "d", 1);
    WorkflowEngine engine(store);
    const Timestamp now = sys_days(year{2024} / 2 / 1);
    engine.advance_all(now);

    // A completed translation whose v1 was never appended.
    auto [task, revision] = *store.get_task("d/00000000/r0");
    task.status = TaskStatus::kCompleted;
    task.assignee = "user1";
    task.leaseExpiresAt = now + hours(1);
    task.resultText = "draft";
    task.completedAt = now;
    REQUIRE(store.update_task(task, revision));

    const auto report = engine.advance_all(now);
    CHECK(report.failures.empty());
    CHECK(report.tasksCreated == 1);
    const auto segment = store.get_segment("d", "00000000");
    REQUIRE(segment->targetVersions.size() == 1);
    CHECK(segment->targetVersions[0].text == "draft");
    CHECK(segment->targetVersions[0].authorUserId == "user1");
  }

  TEST_CASE("advance_all reports corrupt workflows and carries on") {
    auto docs = make_memory_store();
    CorpusStore store(*docs);
    testing::seed_dataset(store, "d", 2);
    AnnotationTask orphan;
    orphan.taskId = "d/00000000/r2";
    orphan.workflowId = "d/00000000";
    orphan.datasetId = "d";
    orphan.segmentId = "00000000";
    orphan.type = TaskType::kCopyedit;
    orphan.round = 2;
    store.create_task(orphan);
    WorkflowEngine engine(store);
    const auto report = engine.advance_all(sys_days(year{2024} / 2 / 1));
    CHECK(report.failures.size() == 1);
    CHECK(report.tasksCreated == 1);
  }
}
