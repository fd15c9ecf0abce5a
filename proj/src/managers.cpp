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

#include "parcur/managers.hpp"

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "parcur/error.hpp"
#include "parcur/workflow.hpp"

namespace parcur {

Settings Settings::from_json_text(std::string_view text) {
  Settings s;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("settings are not JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::kInvalidArgument, "settings must be a JSON object");
  try {
    if (j.contains("leasePeriodHours")) {
      s.leasePeriod = std::chrono::seconds(
          std::int64_t(j.at("leasePeriodHours").get<double>() * 3600.0));
    }
    if (j.contains("managerPeriodSeconds")) {
      s.managerPeriod = std::chrono::seconds(j.at("managerPeriodSeconds").get<std::int64_t>());
    }
    if (j.contains("tokenTtlDays")) {
      s.tokenTtl =
          std::chrono::seconds(std::int64_t(j.at("tokenTtlDays").get<double>() * 86400.0));
    }
    s.host = j.value("host", s.host);
    s.port = j.value("port", s.port);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("bad settings value: ") + e.what());
  }
  if (s.leasePeriod.count() <= 0 || s.managerPeriod.count() <= 0 || s.tokenTtl.count() <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "settings periods must be positive");
  }
  return s;
}

Settings Settings::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::kNotFound, "cannot read config " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

PassReport run_manager_pass(CorpusStore& store, const TaskManagerOptions& options,
                            Timestamp now) {
  PassReport report;
  std::vector<std::unique_ptr<DatasetLock>> held;
  std::set<std::string, std::less<>> busy;
  for (const auto& m : store.list_manifests()) {
    if (auto lock = store.documents().lock_dataset(m.datasetId, false)) {
      held.push_back(std::move(lock));
    } else {
      busy.insert(m.datasetId);
      report.skippedDatasets.push_back(m.datasetId);
    }
  }
  const DatasetScope scope = [&busy](std::string_view id) { return !busy.contains(id); };

  TaskManager tasks(store, options);
  WorkflowEngine engine(store);
  report.revoked = tasks.revoke_expired(now, scope);
  auto advanced = engine.advance_all(now, scope);
  report.workflowActions = advanced.actions;
  report.failures = std::move(advanced.failures);
  report.assigned = tasks.assign_tasks(now, scope).size();
  return report;
}

PeriodicManagers::PeriodicManagers(CorpusStore& store, TaskManagerOptions options,
                                   std::chrono::seconds period, std::function<Timestamp()> clock)
    : store_(store), options_(options), period_(period), clock_(std::move(clock)) {}

PeriodicManagers::~PeriodicManagers() { stop(); }

void PeriodicManagers::start() {
  std::lock_guard lock(mu_);
  if (worker_.joinable()) return;
  stopping_ = false;
  worker_ = std::thread([this] {
    std::unique_lock lock(mu_);
    while (!stopping_) {
      lock.unlock();
      try {
        run_manager_pass(store_, options_, clock_());
      } catch (const std::exception& e) {
        std::cerr << "managers pass failed: " << e.what() << '\n';
      }
      lock.lock();
      cv_.wait_for(lock, period_, [this] { return stopping_; });
    }
  });
}

void PeriodicManagers::stop() {
  {
    std::lock_guard lock(mu_);
    stopping_ = true;
  }
  cv_.notify_all();
  if (worker_.joinable()) worker_.join();
}

}  // namespace parcur
