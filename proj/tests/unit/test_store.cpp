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

#include <functional>
#include <map>
#include <random>

#include "parcur/error.hpp"
#include "parcur/store.hpp"
#include "../support/files.hpp"

using namespace parcur;
using nlohmann::json;

namespace {

struct Backend {
  const char* name;
  std::function<std::unique_ptr<DocumentStore>(const testing::TempDir&)> open;
};

const Backend kBackends[] = {
    {"memory", [](const testing::TempDir&) { return make_memory_store(); }},
    {"sqlite", [](const testing::TempDir& d) { return make_sqlite_store((d / "s.db").string()); }},
};

}  // namespace

TEST_SUITE("store") {
  TEST_CASE("compare-and-swap semantics") {
    for (const auto& backend : kBackends) {
      SUBCASE(backend.name) {
        testing::TempDir dir;
        auto store = backend.open(dir);
        CHECK_FALSE(store->get(Collection::kUsers, "a"));
        CHECK(store->compare_and_swap(Collection::kUsers, "a", 0, json{{"v", 1}}) == 1u);
        CHECK_FALSE(store->compare_and_swap(Collection::kUsers, "a", 0, json{{"v", 2}}));
        CHECK_FALSE(store->compare_and_swap(Collection::kUsers, "a", 5, json{{"v", 2}}));
        CHECK(store->compare_and_swap(Collection::kUsers, "a", 1, json{{"v", 2}}) == 2u);
        const auto doc = store->get(Collection::kUsers, "a");
        REQUIRE(doc);
        CHECK(doc->revision == 2);
        CHECK(doc->body == json{{"v", 2}});
        CHECK_FALSE(store->get(Collection::kWorkflows, "a"));
        CHECK_FALSE(store->erase(Collection::kUsers, "a", 1));
        CHECK(store->erase(Collection::kUsers, "a", 2));
        CHECK_FALSE(store->get(Collection::kUsers, "a"));
        CHECK(store->compare_and_swap(Collection::kUsers, "a", 0, json{{"v", 3}}) == 1u);
      }
    }
  }

  TEST_CASE("listing is ordered by id and honours byte prefixes") {
    for (const auto& backend : kBackends) {
      SUBCASE(backend.name) {
        testing::TempDir dir;
        auto store = backend.open(dir);
        for (const char* id : {"b/2", "a/1", "b/10", "b\xC3\xA9/1", "b/1", "c"}) {
          store->compare_and_swap(Collection::kDatasets, id, 0, json{{"id", id}});
        }
        std::vector<std::string> ids;
        for (const auto& d : store->list(Collection::kDatasets, {}, "b/")) ids.push_back(d.id);
        CHECK(ids == std::vector<std::string>{"b/1", "b/10", "b/2"});
        ids.clear();
        for (const auto& d : store->list(Collection::kDatasets, {}, "b\xC3")) ids.push_back(d.id);
        CHECK(ids == std::vector<std::string>{"b\xC3\xA9/1"});
        CHECK(store->list(Collection::kDatasets).size() == 6);
        CHECK(store->list(Collection::kDatasets).front().id == "a/1");
      }
    }
  }

  TEST_CASE("random operations match a reference map") {
    for (const auto& backend : kBackends) {
      SUBCASE(backend.name) {
        testing::TempDir dir;
        auto store = backend.open(dir);
        std::map<std::string, std::pair<std::uint64_t, json>> model;
        std::mt19937 rng(7);
        for (int step = 0; step < 2000; ++step) {
          const std::string id = "k" + std::to_string(rng() % 40);
          const auto it = model.find(id);
          const std::uint64_t current = it == model.end() ? 0 : it->second.first;
          // Mostly correct revisions, sometimes stale ones.
          const std::uint64_t expected = rng() % 4 == 0 ? current + 1 : current;
          if (rng() % 5 == 0) {
            const bool ok = store->erase(Collection::kConfig, id, expected);
            CHECK(ok == (current != 0 && expected == current));
            if (ok) model.erase(id);
          } else {
            const json body{{"step", step}, {"text", "v\xC3\xA9" + std::to_string(rng() % 9)}};
            const auto rev = store->compare_and_swap(Collection::kConfig, id, expected, body);
            CHECK(rev.has_value() == (expected == current));
            if (rev) {
              CHECK(*rev == current + 1);
              model[id] = {*rev, body};
            }
          }
        }
        const auto all = store->list(Collection::kConfig);
        REQUIRE(all.size() == model.size());
        auto m = model.begin();
        for (const auto& d : all) {
          CHECK(d.id == m->first);
          CHECK(d.revision == m->second.first);
          CHECK(d.body == m->second.second);
          ++m;
        }
      }
    }
  }

  TEST_CASE("filters agree with a brute-force scan over 10000 tasks") {
    for (const auto& backend : kBackends) {
      SUBCASE(backend.name) {
        testing::TempDir dir;
        auto store = backend.open(dir);
        std::mt19937 rng(11);
        const char* statuses[] = {"unassigned", "assigned", "completed"};
        std::vector<json> bodies;
        for (int i = 0; i < 10000; ++i) {
          json b{{"status", statuses[rng() % 3]}, {"datasetId", "d" + std::to_string(rng() % 4)},
                 {"round", int(rng() % 4)}};
          if (b["status"] != "unassigned") b["assignee"] = "u" + std::to_string(rng() % 8);
          bodies.push_back(b);
        }
        std::vector<std::pair<std::string, json>> rows;
        for (int i = 0; i < 10000; ++i) {
          char id[32];
          std::snprintf(id, sizeof id, "t%05d", i);
          rows.emplace_back(id, bodies[i]);
          store->compare_and_swap(Collection::kAnnotationTasks, id, 0, bodies[i]);
        }
        const std::vector<Filter> filters = {
            Filter{}.where("status", "assigned"),
            Filter{}.where("status", "completed").where("assignee", "u3"),
            Filter{}.where("datasetId", "d2").where("round", 3),
            Filter{}.where("assignee", "nobody"),
            Filter{},
        };
        for (const auto& f : filters) {
          std::vector<std::string> expected;
          for (const auto& [id, body] : rows) {
            bool ok = true;
            for (const auto& [field, value] : f.equals) {
              ok = ok && body.contains(field) && body[field] == value;
            }
            if (ok) expected.push_back(id);
          }
          std::vector<std::string> got;
          for (const auto& d : store->list(Collection::kAnnotationTasks, f)) got.push_back(d.id);
          CHECK(got == expected);
        }
      }
    }
  }

  TEST_CASE("sqlite store persists across reopen") {
    testing::TempDir dir;
    const auto path = (dir / "p.db").string();
    {
      auto store = make_sqlite_store(path);
      store->compare_and_swap(Collection::kUsers, "alice", 0, json{{"n", "\xDF\x8A"}});
      store->compare_and_swap(Collection::kUsers, "alice", 1, json{{"n", "\xDF\x8B"}});
    }
    auto store = open_store("sqlite:" + path);
    const auto doc = store->get(Collection::kUsers, "alice");
    REQUIRE(doc);
    CHECK(doc->revision == 2);
    CHECK(doc->body["n"] == "\xDF\x8B");
  }

  TEST_CASE("dataset locks exclude other holders") {
    testing::TempDir dir;
    auto memory = make_memory_store();
    {
      const auto held = memory->lock_dataset("d", true);
      REQUIRE(held);
      CHECK_FALSE(memory->lock_dataset("d", false));
      CHECK(memory->lock_dataset("e", false));
    }
    CHECK(memory->lock_dataset("d", false));

    const auto path = (dir / "l.db").string();
    auto a = make_sqlite_store(path);
    auto b = make_sqlite_store(path);
    {
      const auto held = a->lock_dataset("d", false);
      REQUIRE(held);
      CHECK_FALSE(b->lock_dataset("d", false));
    }
    CHECK(b->lock_dataset("d", false));
  }

  TEST_CASE("dump is identical across backends") {
    testing::TempDir dir;
    auto memory = make_memory_store();
    auto sqlite = make_sqlite_store((dir / "d.db").string());
    for (auto* s : {memory.get(), sqlite.get()}) {
      s->compare_and_swap(Collection::kWorkflows, "w2", 0, json{{"b", 1}, {"a", "x"}});
      s->compare_and_swap(Collection::kWorkflows, "w1", 0, json{{"z", {1, 2}}});
      s->compare_and_swap(Collection::kWorkflows, "w1", 1, json{{"z", {3}}});
      s->compare_and_swap(Collection::kSessions, "t", 0, json{{"secret", true}});
    }
    const std::vector<Collection> cols = {Collection::kWorkflows};
    CHECK(dump_store(*memory, cols) == dump_store(*sqlite, cols));
    CHECK(dump_store(*memory, cols) ==
          "workflows\tw1\t2\t{\"z\":[3]}\nworkflows\tw2\t1\t{\"a\":\"x\",\"b\":1}\n");
  }

  TEST_CASE("uri parsing") {
    CHECK(open_store("memory:"));
    CHECK_THROWS_AS(parse_public_collection("sessions"), Error);
    CHECK(parse_public_collection("annotation-tasks") == Collection::kAnnotationTasks);
  }
}
