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
#include <condition_variable>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "parcur/corpus.hpp"
#include "parcur/tasks.hpp"

namespace parcur {

/// Operator settings, read from the `--config` JSON file. Keys:
/// leasePeriodHours, managerPeriodSeconds, tokenTtlDays, host, port.
struct Settings {
  std::chrono::seconds leasePeriod = std::chrono::hours(48);
  std::chrono::seconds managerPeriod = std::chrono::seconds(60);
  std::chrono::seconds tokenTtl = std::chrono::hours(24 * 7);
  std::string host = "127.0.0.1";
  int port = 8080;

  static Settings from_json_text(std::string_view text);
  static Settings load(const std::filesystem::path& file);
};

struct PassReport {
  std::size_t revoked = 0;
  std::size_t workflowActions = 0;
  std::size_t assigned = 0;
  std::vector<std::string> failures;
  std::vector<std::string> skippedDatasets;
};

/// One managers tick: revoke expired leases, advance workflows, then assign.
/// Datasets currently locked by an admin command are left for the next tick.
PassReport run_manager_pass(CorpusStore& store, const TaskManagerOptions& options,
                            Timestamp now);

/// Runs run_manager_pass every `period` on a background thread.
class PeriodicManagers {
 public:
  PeriodicManagers(CorpusStore& store, TaskManagerOptions options, std::chrono::seconds period,
                   std::function<Timestamp()> clock = &now_utc);
  ~PeriodicManagers();

  void start();
  void stop();

 private:
  CorpusStore& store_;
  TaskManagerOptions options_;
  std::chrono::seconds period_;
  std::function<Timestamp()> clock_;
  std::mutex mu_;
  std::condition_variable cv_;
  bool stopping_ = false;
  std::thread worker_;
};

}  // namespace parcur
