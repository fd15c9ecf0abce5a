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

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "parcur/admin.hpp"
#include "parcur/align.hpp"
#include "parcur/error.hpp"
#include "parcur/managers.hpp"
#include "parcur/metrics.hpp"
#include "parcur/service.hpp"
#include "parcur/store.hpp"
#include "parcur/tasks.hpp"
#include "parcur/unicode.hpp"
#include "parcur/workflow.hpp"
#include "../support/files.hpp"
#include "../support/oracles.hpp"
#include "../support/simulation.hpp"

using namespace parcur;
using namespace std::chrono;
using api::CurationService;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
  std::vector<std::string> problems;

  void fail(std::string why) {
    pass = false;
    if (problems.size() < 5) problems.push_back(std::move(why));
  }
};

std::u32string random_string(std::mt19937_64& rng, std::size_t maxLength,
                             const std::u32string& alphabet) {
  std::u32string s(rng() % (maxLength + 1), U'a');
  for (auto& c : s) c = alphabet[rng() % alphabet.size()];
  return s;
}

std::u32string perturb(std::mt19937_64& rng, std::u32string s, int edits,
                       const std::u32string& alphabet) {
  for (int e = 0; e < edits; ++e) {
    const char32_t c = alphabet[rng() % alphabet.size()];
    switch (rng() % 3) {
      case 0: s.insert(s.begin() + std::ptrdiff_t(rng() % (s.size() + 1)), c); break;
      case 1:
        if (!s.empty()) s.erase(s.begin() + std::ptrdiff_t(rng() % s.size()));
        break;
      default:
        if (!s.empty()) s[rng() % s.size()] = c;
    }
  }
  return s;
}

// ---------------------------------------------------------------------------

// A finished 1000-segment simulation shared by the export criterion.
struct SimulationRun {
  testing::TempDir dir;
  std::unique_ptr<DocumentStore> docs;
  std::unique_ptr<CorpusStore> store;
};

Verdict workflow_simulation(SimulationRun& run) {
  Verdict v;
  const auto started = steady_clock::now();
  run.docs = make_sqlite_store((run.dir / "simulation.db").string());
  run.store = std::make_unique<CorpusStore>(*run.docs);
  testing::SimulationOptions o;
  o.segments = 1000;
  o.seed = 20240301;
  const auto stats = testing::run_simulation(*run.store, o);
  const auto violations = testing::audit_dataset(*run.store, o.datasetId);
  const double seconds = duration<double>(steady_clock::now() - started).count();

  if (!stats.allCompleted) v.fail("not every workflow completed");
  for (const auto& u : stats.unexpected) v.fail("unexpected outcome: " + u);
  for (const auto& m : violations) v.fail("audit: " + m);
  if (violations.size() > 5) v.fail(std::to_string(violations.size()) + " audit violations");
  if (seconds >= 60.0) v.fail("runtime " + std::to_string(seconds) + " s");

  std::map<std::size_t, std::size_t> copyedits;
  std::map<std::string, std::size_t> perWorkflow;
  for (const auto& [t, rev] : run.store->list_tasks()) {
    if (t.type == TaskType::kCopyedit && t.status == TaskStatus::kCompleted) {
      ++perWorkflow[t.workflowId];
    }
  }
  for (const auto& [w, n] : perWorkflow) ++copyedits[n];
  std::ostringstream d;
  d << o.segments << " segments, " << o.users.size() << " users, " << stats.ticks << " ticks, "
    << stats.completions << " completions, " << stats.skips << " skips, " << stats.abandoned
    << " abandoned, " << stats.lateRejected << " late rejected; copyedits 2:" << copyedits[2]
    << " 3:" << copyedits[3] << "; audit violations " << violations.size() << "; "
    << std::fixed;
  d.precision(1);
  d << seconds << " s (limit 60 s)";
  v.detail = d.str();
  return v;
}

// ---------------------------------------------------------------------------

Verdict assignment_oracle() {
  Verdict v;
  std::mt19937_64 rng(7);
  std::size_t agreed = 0, rectangular = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t rows = 1 + rng() % 7, cols = 1 + rng() % 7;
    if (rows != cols) ++rectangular;
    // narrow value ranges on some trials force ties
    const std::int64_t range = trial % 3 == 0 ? 3 : 100;
    std::vector<std::vector<std::int64_t>> m(rows, std::vector<std::int64_t>(cols));
    for (auto& row : m) {
      for (auto& x : row) x = std::int64_t(rng() % std::uint64_t(range));
    }
    const auto got = align::solve_assignment(align::CostMatrix::from_rows(m));
    const auto want = testing::brute_force_assignment(m, cols);
    std::int64_t recomputed = 0;
    for (std::size_t r = 0; r < rows; ++r) {
      if (got.assignment[r]) recomputed += m[r][*got.assignment[r]];
    }
    if (got.totalCost == want.cost && recomputed == want.cost &&
        got.matched() == std::min(rows, cols)) {
      ++agreed;
    } else {
      v.fail("matrix " + std::to_string(trial) + ": cost " + std::to_string(got.totalCost) +
             " vs exhaustive " + std::to_string(want.cost));
    }
  }

  const std::u32string alphabet = U"abcdefghߊߓߕ";
  std::size_t recovered = 0;
  const int corpora = 300;
  for (int trial = 0; trial < corpora; ++trial) {
    const std::size_t n = 1 + rng() % 7;
    std::vector<std::u32string> lines;
    while (lines.size() < n) {
      auto candidate = random_string(rng, 24, alphabet);
      if (candidate.size() < 8) continue;
      const bool far = std::all_of(lines.begin(), lines.end(), [&](const auto& l) {
        return align::edit_distance(candidate, l) > 6;
      });
      if (far) lines.push_back(std::move(candidate));
    }
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::string> consensus, variant;
    for (const auto& l : lines) consensus.push_back(unicode::to_utf8(l));
    for (std::size_t i = 0; i < n; ++i) {
      variant.push_back(unicode::to_utf8(perturb(rng, lines[perm[i]], int(rng() % 3), alphabet)));
    }
    const auto r = align::solve_assignment(align::build_cost_matrix(variant, consensus, 1));
    bool ok = true;
    for (std::size_t i = 0; i < n; ++i) ok = ok && r.assignment[i] == perm[i];
    if (ok) {
      ++recovered;
    } else {
      v.fail("corpus " + std::to_string(trial) + " permutation not recovered");
    }
  }
  v.detail = std::to_string(agreed) + "/500 matrices match exhaustive search (" +
             std::to_string(rectangular) + " rectangular, sizes <= 7x7); " +
             std::to_string(recovered) + "/" + std::to_string(corpora) +
             " shuffled corpora recovered exactly (n <= 7, <= 2 edits, distance > 6)";
  return v;
}

// ---------------------------------------------------------------------------

Verdict edit_distance_kernel() {
  Verdict v;
  std::mt19937_64 rng(11);
  const std::u32string alphabet = U"abcߊߓ߸ é";
  std::size_t agreed = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto a = random_string(rng, 30, alphabet);
    const auto b = trial % 4 == 0 ? perturb(rng, a, 1 + int(rng() % 4), alphabet)
                                  : random_string(rng, 30, alphabet);
    const auto got = align::edit_distance(a, b);
    const auto utf8 = align::edit_distance(unicode::to_utf8(a), unicode::to_utf8(b));
    const auto want = testing::recursive_edit_distance(a, b);
    if (got == want && utf8 == want) {
      ++agreed;
    } else {
      v.fail("pair " + std::to_string(trial) + ": " + std::to_string(got) + " vs " +
             std::to_string(want));
    }
  }

  // every string up to length 7 over {a, b}, plus up to length 4 over three
  // letters, against breadth-first search over edit scripts
  std::size_t pairs = 0, exact = 0;
  auto exhaustive = [&](const std::u32string& letters, std::size_t maxLength) {
    std::vector<std::u32string> all{U""};
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (all[i].size() == maxLength) continue;
      for (char32_t c : letters) all.push_back(all[i] + c);
    }
    for (const auto& s : all) {
      const auto dist = testing::edit_script_distances(s, letters, maxLength);
      for (const auto& t : all) {
        ++pairs;
        const auto it = dist.find(t);
        if (it != dist.end() && it->second == align::edit_distance(s, t)) {
          ++exact;
        } else if (v.problems.size() < 5) {
          v.fail("script search disagrees on " + unicode::to_utf8(s) + " -> " +
                 unicode::to_utf8(t));
        }
      }
    }
  };
  exhaustive(U"ab", 7);
  exhaustive(U"aߊé", 4);
  if (exact != pairs) v.pass = false;
  v.detail = std::to_string(agreed) + "/1000 random pairs (length <= 30) equal the recursive oracle; " +
             std::to_string(exact) + "/" + std::to_string(pairs) +
             " exhaustive pairs (length <= 7) equal edit-script search; tolerance 0";
  return v;
}

// ---------------------------------------------------------------------------

// One randomized trace of user actions, replayed online (each action sent as
// it happens) and offline (queued, batched, duplicated, with a crash).
struct Action {
  Timestamp at;
  std::string userId;
  json envelope;
};

const std::vector<Collection> kComparable = {
    Collection::kDatasets, Collection::kWorkflows, Collection::kAnnotationTasks,
    Collection::kUsers,    Collection::kConfig,    Collection::kManifests,
    Collection::kSubmissions};

std::vector<Action> epoch_actions(std::mt19937_64& rng, CorpusStore& store, Timestamp start,
                                  seconds tick, int& opCounter, int trace) {
  std::vector<Action> actions;
  std::uniform_int_distribution<long> offset(1, tick.count() - 2);
  auto op = [&] { return "t" + std::to_string(trace) + "-op" + std::to_string(++opCounter); };
  for (const auto& [task, rev] : store.list_tasks(Filter{}.where("status", "assigned"))) {
    const unsigned roll = unsigned(rng() % 100);
    if (roll < 15) continue;  // idle this epoch; the lease may lapse
    const Timestamp at = start + seconds(offset(rng));
    Action a{at, *task.assignee, {}};
    if (roll < 25) {
      a.envelope = {{"clientOpId", op()}, {"taskId", task.taskId}, {"action", "skip"}};
    } else {
      std::string text = "ߒ " + task.segmentId;
      if (const auto seg = store.get_segment(task.datasetId, task.segmentId);
          seg && seg->latest_version() && rng() % 2 == 0) {
        text = seg->latest_version()->text;
      } else if (task.round > 0) {
        text += " r" + std::to_string(task.round);
      }
      a.envelope = {{"clientOpId", op()}, {"taskId", task.taskId}, {"action", "submit"},
                    {"text", text}};
    }
    a.envelope["clientTimestamp"] = format_rfc3339(at);
    actions.push_back(a);
    if (roll >= 95) {
      // a second, conflicting op on the same task by its assignee
      Action again = a;
      again.at = at + seconds(1);
      again.envelope["clientOpId"] = op();
      again.envelope["clientTimestamp"] = format_rfc3339(again.at);
      actions.push_back(again);
    }
  }
  if (rng() % 3 == 0) {
    actions.push_back({start + seconds(5), "user1",
                       {{"clientOpId", op()}, {"taskId", "sync/99999999/r0"},
                        {"action", "skip"}, {"clientTimestamp", format_rfc3339(start + seconds(5))}}});
  }
  std::sort(actions.begin(), actions.end(), [](const Action& a, const Action& b) {
    return std::tie(a.at, a.userId) < std::tie(b.at, b.userId);
  });
  return actions;
}

struct TraceOutcome {
  bool equal = false;
  bool completed = false;
  std::size_t actions = 0, duplicatesSent = 0, crashes = 0;
  std::string firstDifference;
};

TraceOutcome dual_run(int trace, const fs::path& dir) {
  std::mt19937_64 rng(1000 + std::uint64_t(trace));
  const seconds tick = hours(1);
  const TaskManagerOptions leases{minutes(90)};
  const Timestamp t0 = sys_days(year{2024} / 7 / 1);
  const std::size_t segments = 4 + rng() % 9;

  auto online = make_memory_store();
  CorpusStore onlineStore(*online);
  const fs::path offlinePath = dir / ("trace" + std::to_string(trace) + ".db");
  auto offline = make_sqlite_store(offlinePath.string());
  auto offlineStore = std::make_unique<CorpusStore>(*offline);
  for (CorpusStore* s : {&onlineStore, offlineStore.get()}) {
    for (const auto& u : testing::mixed_users()) s->put_user(u);
    testing::seed_dataset(*s, "sync", segments);
  }

  Timestamp onlineNow = t0;
  CurationService onlineService(onlineStore, leases,
                                api::ServiceOptions{hours(24), [&] { return onlineNow; }, {}});

  TraceOutcome out;
  int opCounter = 0;
  // crash once, at a random applied envelope of the whole trace
  const std::size_t crashAt = 1 + rng() % 40;
  std::size_t appliedSeen = 0;

  for (int epoch = 0; epoch < 60; ++epoch) {
    const Timestamp passTime = t0 + epoch * tick;
    run_manager_pass(onlineStore, leases, passTime);
    run_manager_pass(*offlineStore, leases, passTime);
    if (onlineStore.list_workflows(Filter{}.where("status", "active")).empty()) break;

    const auto actions = epoch_actions(rng, onlineStore, passTime, tick, opCounter, trace);
    out.actions += actions.size();
    for (const auto& a : actions) {
      onlineNow = a.at;
      onlineService.submit(a.userId, std::vector<json>{a.envelope});
    }

    // Offline: every user syncs at the end of the epoch.
    std::map<std::string, std::vector<json>> queues;
    for (const auto& a : actions) queues[a.userId].push_back(a.envelope);
    std::vector<std::pair<std::string, std::vector<json>>> batches;
    for (auto& [user, queue] : queues) {
      std::size_t i = 0;
      while (i < queue.size()) {
        const std::size_t n = 1 + rng() % 3;
        std::vector<json> batch(queue.begin() + std::ptrdiff_t(i),
                                queue.begin() + std::ptrdiff_t(std::min(queue.size(), i + n)));
        if (i > 0 && rng() % 3 == 0) {
          batch.insert(batch.begin(), queue[rng() % i]);  // resend of an acknowledged op
          ++out.duplicatesSent;
        }
        batches.emplace_back(user, std::move(batch));
        i += n;
      }
    }
    // Users' batches interleave arbitrarily; each user's stay in order.
    std::vector<std::size_t> order;
    {
      std::map<std::string, std::vector<std::size_t>> byUser;
      for (std::size_t b = 0; b < batches.size(); ++b) byUser[batches[b].first].push_back(b);
      std::vector<std::string> slots;
      for (const auto& [u, list] : byUser) slots.insert(slots.end(), list.size(), u);
      std::shuffle(slots.begin(), slots.end(), rng);
      std::map<std::string, std::size_t> next;
      for (const auto& u : slots) order.push_back(byUser[u][next[u]++]);
    }

    Timestamp offlineNow = passTime + tick - seconds(1);
    for (std::size_t b : order) {
      const auto& [user, batch] = batches[b];
      bool crashed = false;
      {
        api::ServiceOptions so{hours(24), [&] { return offlineNow; }, {}};
        if (out.crashes == 0) {
          so.faultHook = [&](std::string_view point) {
            if (point == "after-apply" && ++appliedSeen == crashAt) {
              throw std::runtime_error("simulated crash");
            }
          };
        }
        CurationService service(*offlineStore, leases, so);
        try {
          service.submit(user, batch);
        } catch (const std::runtime_error&) {
          crashed = true;
        }
      }
      if (crashed) {
        ++out.crashes;
        // restart from disk and resend the whole unacknowledged batch
        offlineStore.reset();
        offline.reset();
        offline = make_sqlite_store(offlinePath.string());
        offlineStore = std::make_unique<CorpusStore>(*offline);
        CurationService service(*offlineStore, leases,
                                api::ServiceOptions{hours(24), [&] { return offlineNow; }, {}});
        service.submit(user, batch);
      }
    }
  }
  out.completed = onlineStore.list_workflows(Filter{}.where("status", "active")).empty();
  const std::string a = dump_store(*online, kComparable);
  const std::string b = dump_store(*offline, kComparable);
  out.equal = a == b;
  if (!out.equal) {
    std::size_t i = 0;
    while (i < a.size() && i < b.size() && a[i] == b[i]) ++i;
    const std::size_t from = a.rfind('\n', i) == std::string::npos ? 0 : a.rfind('\n', i) + 1;
    out.firstDifference = a.substr(from, std::min<std::size_t>(200, a.size() - from));
  }
  return out;
}

Verdict exactly_once() {
  Verdict v;
  testing::TempDir dir;
  std::size_t equal = 0, completed = 0, actions = 0, duplicates = 0, crashes = 0;
  for (int trace = 0; trace < 100; ++trace) {
    const auto r = dual_run(trace, dir.path());
    actions += r.actions;
    duplicates += r.duplicatesSent;
    crashes += r.crashes;
    if (r.completed) ++completed;
    if (r.equal) {
      ++equal;
    } else {
      v.fail("trace " + std::to_string(trace) + " differs near: " + r.firstDifference);
    }
  }
  if (crashes < 50) v.fail("only " + std::to_string(crashes) + " traces exercised a crash");
  v.detail = std::to_string(equal) + "/100 traces byte-identical (" + std::to_string(actions) +
             " actions, " + std::to_string(duplicates) + " resent ops, " +
             std::to_string(crashes) + " crash-restarts, " + std::to_string(completed) +
             " traces ran to completion)";
  return v;
}

// ---------------------------------------------------------------------------

Verdict export_integrity(SimulationRun& run) {
  Verdict v;
  if (!run.store) {
    v.fail("no simulation store");
    return v;
  }
  testing::TempDir out;
  const auto files = admin::export_dataset(*run.store, {"sim", out.path(), true, false});
  std::set<std::string> names;
  for (const auto& f : files) {
    names.insert(f.filename().string());
    const auto lines = testing::read_lines(f);
    if (lines.size() != 1000) {
      v.fail(f.filename().string() + " has " + std::to_string(lines.size()) + " lines");
    }
  }
  for (const char* want : {"nqo_Nkoo", "nqo_Nkoo.v1", "nqo_Nkoo.v2", "nqo_Nkoo.v3",
                           "nqo_Nkoo.v4"}) {
    if (!names.contains(want)) v.fail(std::string("missing ") + want);
  }
  // the final file equals the last stored version of every segment
  const auto finals = testing::read_lines(out / "sim/nqo_Nkoo");
  for (const auto& seg : run.store->list_segments("sim")) {
    const std::size_t i = std::stoul(seg.segmentId);
    if (!seg.latest_version() || i >= finals.size() || finals[i] != seg.latest_version()->text) {
      v.fail("final line " + seg.segmentId + " is not the last version");
      break;
    }
  }

  const std::regex format(R"(^\d{1,3}% / \d+\.\d{2} ± \d+\.\d{2}$)");
  const auto stats = admin::dataset_stats(*run.store, "sim");
  std::vector<std::string> rendered;
  for (const auto& r : stats.rounds) {
    if (!r) {
      v.fail("a copyedit round has no statistics");
      continue;
    }
    const std::string s = metrics::format_round(*r);
    rendered.push_back(s);
    if (!std::regex_match(s, format)) v.fail("badly formatted statistics: " + s);
  }

  testing::TempDir fixture;
  auto docs = make_memory_store();
  CorpusStore store(*docs);
  testing::complete_seed10(store);
  admin::export_dataset(store, {"seed10", fixture.path(), true, false});
  std::string summary = "lines,words,file\n";
  for (const auto& f : metrics::corpus_summary(fixture.path(), "seed10")) {
    summary += std::to_string(f.lines) + "," + std::to_string(f.words) + "," + f.file + "\n";
  }
  const std::string expected =
      testing::read_file(testing::fixture_dir() / "seed10/expected_summary.csv");
  if (summary != expected) v.fail("ten-segment summary differs from hand counts:\n" + summary);

  std::string joined;
  for (const auto& s : rendered) joined += (joined.empty() ? "" : "; ") + s;
  v.detail = std::to_string(files.size()) + " files of 1000 lines; rounds " + joined +
             "; ten-segment summary matches hand counts (" +
             std::to_string(std::count(expected.begin(), expected.end(), '\n') - 1) + " files)";
  return v;
}

// ---------------------------------------------------------------------------

Verdict idempotence() {
  Verdict v;
  auto docs = make_memory_store();
  CorpusStore store(*docs);
  testing::SimulationOptions o;
  o.segments = 400;
  o.seed = 99;
  std::size_t checked = 0;
  o.afterPass = [&](Timestamp now) {
    TaskManager tasks(store, TaskManagerOptions{o.leasePeriod});
    WorkflowEngine engine(store);
    const std::string before = dump_store(*docs, kComparable);
    const auto revoked = tasks.revoke_expired(now);
    const auto advanced = engine.advance_all(now);
    const auto assigned = tasks.assign_tasks(now);
    ++checked;
    if (revoked + advanced.actions + assigned.size() != 0) {
      v.fail("pass at " + format_rfc3339(now) + " took " +
             std::to_string(revoked + advanced.actions + assigned.size()) + " actions");
    }
    if (dump_store(*docs, kComparable) != before) {
      v.fail("repeat pass at " + format_rfc3339(now) + " changed the store");
    }
  };
  const auto stats = testing::run_simulation(store, o);
  if (!stats.allCompleted) v.fail("simulation did not finish");
  v.detail = std::to_string(checked) + " repeated passes over a " + std::to_string(o.segments) +
             "-segment simulation took zero actions and left the store unchanged";
  return v;
}

}  // namespace

int main() {
  int failed = 0;
  auto report = [&](const char* name, const std::function<Verdict()>& check) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    std::cout << (v.pass ? "PASS " : "FAIL ") << name << ": " << v.detail << '\n';
    for (const auto& p : v.problems) std::cout << "    " << p << '\n';
    std::cout.flush();
    if (!v.pass) ++failed;
  };

  SimulationRun simulation;
  report("workflow-simulation", [&] { return workflow_simulation(simulation); });
  report("assignment-oracle", assignment_oracle);
  report("edit-distance-kernel", edit_distance_kernel);
  report("exactly-once-sync", exactly_once);
  report("export-integrity", [&] { return export_integrity(simulation); });
  report("idempotence", idempotence);
  return failed;
}
