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

#include "parcur/parcur.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <memory>
#include <string>

#include "parcur/admin.hpp"
#include "parcur/align.hpp"
#include "parcur/error.hpp"
#include "parcur/managers.hpp"
#include "parcur/metrics.hpp"
#include "parcur/service.hpp"
#include "parcur/store.hpp"
#include "parcur/unicode.hpp"

struct parcur_store {
  std::unique_ptr<parcur::DocumentStore> docs;
  std::unique_ptr<parcur::CorpusStore> corpus;
  parcur::Settings settings;
};

struct parcur_server {
  std::unique_ptr<parcur::api::CurationService> service;
  std::unique_ptr<parcur::api::HttpServer> http;
  std::unique_ptr<parcur::PeriodicManagers> managers;
  int port = 0;
};

namespace {

thread_local std::string last_error;

parcur_status fail(parcur_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs `f`, mapping exceptions to status codes.
template <typename F>
parcur_status guard(F&& f) noexcept {
  try {
    last_error.clear();
    f();
    return PARCUR_OK;
  } catch (const parcur::Error& e) {
    return fail(static_cast<parcur_status>(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(PARCUR_E_INVALID_ARGUMENT, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(PARCUR_E_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(PARCUR_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(PARCUR_E_INTERNAL, e.what());
  } catch (...) {
    return fail(PARCUR_E_INTERNAL, "unknown failure");
  }
}

void require(const void* p, const char* what) {
  if (!p) throw parcur::Error(parcur::ErrorCode::kInvalidArgument, std::string(what) + " is NULL");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

void put_string(char** out, const std::string& s) {
  require(out, "output pointer");
  *out = dup_string(s);
}

std::string opt(const char* s) { return s ? std::string(s) : std::string(); }

parcur::TaskManagerOptions task_options(const parcur_store* store) {
  parcur::TaskManagerOptions o;
  o.leasePeriod = store->settings.leasePeriod;
  return o;
}

std::vector<parcur::LanguageTag> parse_tags(std::string_view csv) {
  std::vector<parcur::LanguageTag> tags;
  while (!csv.empty()) {
    const auto comma = csv.find(',');
    const auto item = csv.substr(0, comma);
    if (!item.empty()) tags.push_back(parcur::LanguageTag::parse(item));
    if (comma == std::string_view::npos) break;
    csv.remove_prefix(comma + 1);
  }
  return tags;
}

}  // namespace

extern "C" {

const char* parcur_version(void) { return "0.3.0"; }

const char* parcur_status_name(parcur_status status) {
  if (status == PARCUR_OK) return "ok";
  if (status < PARCUR_E_INVALID_ARGUMENT || status > PARCUR_E_INTERNAL) return "unknown";
  return parcur::to_string(static_cast<parcur::ErrorCode>(status)).data();
}

const char* parcur_last_error(void) { return last_error.c_str(); }

void parcur_string_free(char* s) { std::free(s); }

parcur_status parcur_store_open(const char* uri, const char* settings_json, parcur_store** out) {
  return guard([&] {
    require(uri, "uri");
    require(out, "output pointer");
    auto handle = std::make_unique<parcur_store>();
    if (settings_json) handle->settings = parcur::Settings::from_json_text(settings_json);
    handle->docs = parcur::open_store(uri);
    handle->corpus = std::make_unique<parcur::CorpusStore>(*handle->docs);
    *out = handle.release();
  });
}

void parcur_store_close(parcur_store* store) { delete store; }

parcur_status parcur_load_dataset(parcur_store* store, const char* dataset_id, const char* dir,
                                  const char* tags, const char* corpus, const char* split,
                                  int replace, size_t* imported) {
  return guard([&] {
    require(store, "store");
    require(dataset_id, "dataset_id");
    require(dir, "dir");
    require(tags, "tags");
    parcur::admin::LoadOptions o;
    o.datasetId = dataset_id;
    o.dir = dir;
    o.languageTags = parse_tags(tags);
    o.corpus = opt(corpus);
    o.split = opt(split);
    o.replace = replace != 0;
    const auto n = parcur::admin::load_dataset(*store->corpus, o);
    if (imported) *imported = n;
  });
}

parcur_status parcur_create_workflows(parcur_store* store, const char* dataset_id,
                                      const char* target_language, int64_t priority_start,
                                      size_t* created) {
  return guard([&] {
    require(store, "store");
    require(dataset_id, "dataset_id");
    require(target_language, "target_language");
    const auto n = parcur::admin::create_workflows(
        *store->corpus, dataset_id, parcur::LanguageTag::parse(target_language), priority_start);
    if (created) *created = n;
  });
}

parcur_status parcur_system_report(parcur_store* store, char** csv) {
  return guard([&] {
    require(store, "store");
    put_string(csv, parcur::admin::render_system_report(parcur::admin::system_report(*store->corpus)));
  });
}

parcur_status parcur_export_dataset(parcur_store* store, const char* dataset_id,
                                    const char* out_dir, int with_edits, int partial,
                                    size_t* files_written) {
  return guard([&] {
    require(store, "store");
    require(dataset_id, "dataset_id");
    require(out_dir, "out_dir");
    parcur::admin::ExportOptions o;
    o.datasetId = dataset_id;
    o.outDir = out_dir;
    o.withEdits = with_edits != 0;
    o.partial = partial != 0;
    const auto files = parcur::admin::export_dataset(*store->corpus, o);
    if (files_written) *files_written = files.size();
  });
}

parcur_status parcur_accounting_statements(parcur_store* store, const char* from_month,
                                           const char* to_month, char** csv) {
  return guard([&] {
    require(store, "store");
    put_string(csv, parcur::admin::render_accounting_csv(parcur::admin::accounting_statements(
                        *store->corpus, opt(from_month), opt(to_month))));
  });
}

parcur_status parcur_stats(parcur_store* store, const char* dataset_id, char** csv) {
  return guard([&] {
    require(store, "store");
    std::vector<parcur::admin::DatasetStats> stats;
    if (dataset_id) {
      stats.push_back(parcur::admin::dataset_stats(*store->corpus, dataset_id));
    } else {
      for (const auto& m : store->corpus->list_manifests()) {
        stats.push_back(parcur::admin::dataset_stats(*store->corpus, m.datasetId));
      }
    }
    put_string(csv, parcur::admin::render_stats_csv(stats));
  });
}

parcur_status parcur_corpus_summary(const char* export_dir, const char* corpus, char** csv) {
  return guard([&] {
    require(export_dir, "export_dir");
    require(corpus, "corpus");
    std::string out = "lines,words,file\n";
    for (const auto& f : parcur::metrics::corpus_summary(export_dir, corpus)) {
      out += std::to_string(f.lines) + "," + std::to_string(f.words) + "," + f.file + "\n";
    }
    put_string(csv, out);
  });
}

parcur_status parcur_user_add(parcur_store* store, const char* profile_json,
                              const char* password) {
  return guard([&] {
    require(store, "store");
    require(profile_json, "profile_json");
    const auto user = nlohmann::json::parse(profile_json).get<parcur::UserProfile>();
    parcur::validate(user);
    store->corpus->put_user(user);
    if (password) parcur::api::CurationService::set_password(*store->corpus, user.userId, password);
  });
}

parcur_status parcur_set_direction(parcur_store* store, const char* tag, const char* direction) {
  return guard([&] {
    require(store, "store");
    require(tag, "tag");
    require(direction, "direction");
    store->corpus->set_direction(parcur::LanguageTag::parse(tag),
                                 parcur::parse_direction(direction));
  });
}

parcur_status parcur_run_managers(parcur_store* store, char** summary_json) {
  return guard([&] {
    require(store, "store");
    const auto r = parcur::run_manager_pass(*store->corpus, task_options(store), parcur::now_utc());
    const nlohmann::json j{{"revoked", r.revoked},
                           {"workflowActions", r.workflowActions},
                           {"assigned", r.assigned},
                           {"failures", r.failures},
                           {"skippedDatasets", r.skippedDatasets}};
    if (summary_json) *summary_json = dup_string(j.dump());
  });
}

parcur_status parcur_align_files(const char* consensus_path, const char* ref_path,
                                 const char* const* target_paths, size_t n_targets,
                                 const char* out_dir, const char* report_path,
                                 char** summary_json) {
  return guard([&] {
    namespace fs = std::filesystem;
    require(consensus_path, "consensus_path");
    require(ref_path, "ref_path");
    require(out_dir, "out_dir");
    if (n_targets > 0) require(target_paths, "target_paths");
    const auto consensus = parcur::admin::read_lines(consensus_path);
    const auto ref = parcur::admin::read_lines(ref_path);
    std::vector<std::vector<std::string>> targets;
    std::vector<fs::path> names;
    for (size_t i = 0; i < n_targets; ++i) {
      require(target_paths[i], "target path");
      targets.push_back(parcur::admin::read_lines(target_paths[i]));
      names.push_back(fs::path(target_paths[i]).filename());
    }
    const auto result = parcur::align::realign_corpus(consensus, ref, targets);
    fs::create_directories(out_dir);
    for (size_t i = 0; i < n_targets; ++i) {
      parcur::admin::write_lines(fs::path(out_dir) / names[i], result.targets[i]);
    }
    if (report_path) {
      std::vector<std::string> rows;
      std::string csv = parcur::align::render_report_csv(result.report);
      if (!csv.empty() && csv.back() == '\n') csv.pop_back();
      std::string::size_type start = 0;
      for (;;) {
        const auto nl = csv.find('\n', start);
        rows.push_back(csv.substr(start, nl - start));
        if (nl == std::string::npos) break;
        start = nl + 1;
      }
      parcur::admin::write_lines(report_path, rows);
    }
    if (summary_json) {
      const nlohmann::json j{{"totalCost", result.report.totalCost},
                             {"matched", result.report.matched},
                             {"droppedConsensusLines", result.report.droppedConsensusLines.size()},
                             {"droppedVariantLines", result.report.droppedVariantLines.size()}};
      *summary_json = dup_string(j.dump());
    }
  });
}

parcur_status parcur_edit_distance(const char* a, const char* b, size_t* distance) {
  return guard([&] {
    require(a, "a");
    require(b, "b");
    require(distance, "distance");
    *distance = parcur::align::edit_distance(parcur::unicode::nfc(a), parcur::unicode::nfc(b));
  });
}

parcur_status parcur_word_count(const char* text, const char* language, size_t* words) {
  return guard([&] {
    require(text, "text");
    require(language, "language");
    require(words, "words");
    *words = parcur::metrics::word_count(parcur::unicode::nfc(text),
                                         parcur::LanguageTag::parse(language));
  });
}

parcur_status parcur_server_start(parcur_store* store, const char* host, int port,
                                  int run_managers, parcur_server** out) {
  return guard([&] {
    require(store, "store");
    require(out, "output pointer");
    auto server = std::make_unique<parcur_server>();
    parcur::api::ServiceOptions so;
    so.tokenTtl = store->settings.tokenTtl;
    server->service = std::make_unique<parcur::api::CurationService>(
        *store->corpus, task_options(store), std::move(so));
    server->http = std::make_unique<parcur::api::HttpServer>(*server->service);
    server->port = server->http->start(host ? host : store->settings.host,
                                       port < 0 ? store->settings.port : port);
    if (run_managers) {
      server->managers = std::make_unique<parcur::PeriodicManagers>(
          *store->corpus, task_options(store), store->settings.managerPeriod);
      server->managers->start();
    }
    *out = server.release();
  });
}

int parcur_server_port(const parcur_server* server) { return server ? server->port : -1; }

void parcur_server_stop(parcur_server* server) {
  if (!server) return;
  if (server->managers) server->managers->stop();
  server->http->stop();
  delete server;
}

}  // extern "C"
