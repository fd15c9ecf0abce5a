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

// parcur-server: runs the curation HTTP API with the periodic managers.

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <csignal>
#include <thread>

#include "cli_common.hpp"

using namespace parcur_cli;

namespace {
std::atomic<bool> stop_requested{false};
extern "C" void on_signal(int) { stop_requested = true; }
}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Serve the curation API"};
  app.require_subcommand(1);
  std::string storeUri = default_store();
  std::string configPath;
  app.add_option("--store", storeUri, "Store path or URL (sqlite:<path>, memory:)");
  app.add_option("--config", configPath, "Settings JSON file")->check(CLI::ExistingFile);

  auto* serve = app.add_subcommand("serve", "Serve HTTP until interrupted");
  std::string host;
  int port = -1;
  bool noManagers = false;
  serve->add_option("--host", host, "Bind address (default from settings)");
  serve->add_option("--port", port, "Port, 0 picks a free one (default from settings)");
  serve->add_flag("--no-managers", noManagers, "Do not run the periodic managers");

  auto* tick = app.add_subcommand("tick", "Run one revoke/advance/assign pass and exit");

  auto* direction = app.add_subcommand("set-direction", "Configure a language's text direction");
  std::string tag, dir;
  direction->add_option("tag", tag, "Language tag")->required();
  direction->add_option("direction", dir, "LTR or RTL")
      ->required()
      ->check(CLI::IsMember({"LTR", "RTL"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kSuccess : kUserError;
  }

  return run([&] {
    Store store(storeUri, configPath);
    if (tick->parsed()) {
      char* summary = nullptr;
      check(parcur_run_managers(store.get(), &summary));
      emit(summary);
      std::fputc('\n', stdout);
    } else if (direction->parsed()) {
      check(parcur_set_direction(store.get(), tag.c_str(), dir.c_str()));
      std::cout << tag << ' ' << dir << '\n';
    } else if (serve->parsed()) {
      parcur_server* server = nullptr;
      check(parcur_server_start(store.get(), host.empty() ? nullptr : host.c_str(), port,
                                !noManagers, &server));
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cout << "listening on port " << parcur_server_port(server) << std::endl;
      while (!stop_requested) std::this_thread::sleep_for(std::chrono::milliseconds(200));
      parcur_server_stop(server);
    }
  });
}
