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

// Shared plumbing for the command-line tools. Everything goes through the C
// interface in parcur.h.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "parcur/parcur.h"

namespace parcur_cli {

enum ExitCode { kSuccess = 0, kUserError = 1, kSystemError = 2 };

/// Carries a failed status out of a command handler.
struct Failure : std::runtime_error {
  parcur_status status;
  Failure(parcur_status s, const std::string& what) : std::runtime_error(what), status(s) {}
};

inline void check(parcur_status status) {
  if (status != PARCUR_OK) {
    throw Failure(status, std::string(parcur_status_name(status)) + ": " + parcur_last_error());
  }
}

inline int exit_code_for(parcur_status status) {
  switch (status) {
    case PARCUR_OK: return kSuccess;
    case PARCUR_E_IO:
    case PARCUR_E_INTERNAL:
    case PARCUR_E_INTEGRITY: return kSystemError;
    default: return kUserError;
  }
}

/// Takes ownership of a C string and prints it to stdout.
inline void emit(char* text) {
  if (!text) return;
  std::fputs(text, stdout);
  parcur_string_free(text);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure(PARCUR_E_NOT_FOUND, "cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

/// RAII wrapper over parcur_store.
class Store {
 public:
  Store(const std::string& uri, const std::string& configPath) {
    const std::string settings = configPath.empty() ? std::string() : read_file(configPath);
    check(parcur_store_open(uri.c_str(), configPath.empty() ? nullptr : settings.c_str(), &h_));
  }
  ~Store() { parcur_store_close(h_); }
  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;
  parcur_store* get() const noexcept { return h_; }

 private:
  parcur_store* h_ = nullptr;
};

/// Default store location when --store is absent.
inline std::string default_store() {
  const char* env = std::getenv("PARCUR_STORE");
  return env && *env ? env : "parcur.db";
}

/// Runs a command body and converts failures into exit codes.
template <typename F>
int run(F&& body) {
  try {
    body();
    return kSuccess;
  } catch (const Failure& f) {
    std::cerr << "error: " << f.what() << '\n';
    return exit_code_for(f.status);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSystemError;
  }
}

}  // namespace parcur_cli
