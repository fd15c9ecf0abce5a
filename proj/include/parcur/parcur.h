/*
 * Copyright 2026 The parcur Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to the parcur curation core.
 *
 * Every function returns a parcur_status. On failure a thread-local message
 * is available from parcur_last_error(). Strings returned through `char**`
 * out-parameters are owned by the caller and released with
 * parcur_string_free(). Handles are opaque and not shared between threads
 * unless stated otherwise.
 */
#ifndef PARCUR_H
#define PARCUR_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define PARCUR_API __declspec(dllexport)
#else
#  define PARCUR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef int parcur_status;

enum {
  PARCUR_OK = 0,
  PARCUR_E_INVALID_ARGUMENT = 1,
  PARCUR_E_NOT_FOUND = 2,
  PARCUR_E_CONFLICT = 3,
  PARCUR_E_PROTOCOL = 4,
  PARCUR_E_INTEGRITY = 5,
  PARCUR_E_LEASE_VIOLATION = 6,
  PARCUR_E_FORMAT = 7,
  PARCUR_E_PRECONDITION = 8,
  PARCUR_E_UNAUTHENTICATED = 9,
  PARCUR_E_IO = 10,
  PARCUR_E_INTERNAL = 11
};

typedef struct parcur_store parcur_store;
typedef struct parcur_server parcur_server;

PARCUR_API const char* parcur_version(void);
PARCUR_API const char* parcur_status_name(parcur_status status);
/* Message of the last failure on the calling thread ("" if none). */
PARCUR_API const char* parcur_last_error(void);
PARCUR_API void parcur_string_free(char* s);

/*
 * Opens a store. `uri` is "memory:", "sqlite:<path>" or a plain path.
 * `settings_json` may be NULL; otherwise a JSON object with the keys
 * leasePeriodHours, managerPeriodSeconds, tokenTtlDays, host, port.
 * A store handle may be used from several threads.
 */
PARCUR_API parcur_status parcur_store_open(const char* uri, const char* settings_json,
                                           parcur_store** out);
PARCUR_API void parcur_store_close(parcur_store* store);

/* `tags` is a comma-separated list; `corpus` and `split` may be NULL. */
PARCUR_API parcur_status parcur_load_dataset(parcur_store* store, const char* dataset_id,
                                             const char* dir, const char* tags,
                                             const char* corpus, const char* split,
                                             int replace, size_t* imported);
PARCUR_API parcur_status parcur_create_workflows(parcur_store* store, const char* dataset_id,
                                                 const char* target_language,
                                                 int64_t priority_start, size_t* created);
PARCUR_API parcur_status parcur_system_report(parcur_store* store, char** csv);
PARCUR_API parcur_status parcur_export_dataset(parcur_store* store, const char* dataset_id,
                                               const char* out_dir, int with_edits,
                                               int partial, size_t* files_written);
/* Months are "YYYY-MM" or NULL for unbounded. */
PARCUR_API parcur_status parcur_accounting_statements(parcur_store* store,
                                                      const char* from_month,
                                                      const char* to_month, char** csv);
/* NULL dataset_id reports every dataset. */
PARCUR_API parcur_status parcur_stats(parcur_store* store, const char* dataset_id, char** csv);
/* Table of `lines,words,file` for an export directory. */
PARCUR_API parcur_status parcur_corpus_summary(const char* export_dir, const char* corpus,
                                               char** csv);

/* `profile_json` follows the users collection schema; password may be NULL. */
PARCUR_API parcur_status parcur_user_add(parcur_store* store, const char* profile_json,
                                         const char* password);
/* direction is "LTR" or "RTL". */
PARCUR_API parcur_status parcur_set_direction(parcur_store* store, const char* tag,
                                              const char* direction);
/* One revoke/advance/assign tick at the current time; JSON summary. */
PARCUR_API parcur_status parcur_run_managers(parcur_store* store, char** summary_json);

/*
 * Realigns `n_targets` target files against a consensus reference and writes
 * them to `out_dir` under their base names. `report_path` may be NULL.
 * `summary_json` may be NULL.
 */
PARCUR_API parcur_status parcur_align_files(const char* consensus_path, const char* ref_path,
                                            const char* const* target_paths, size_t n_targets,
                                            const char* out_dir, const char* report_path,
                                            char** summary_json);

PARCUR_API parcur_status parcur_edit_distance(const char* a, const char* b, size_t* distance);
PARCUR_API parcur_status parcur_word_count(const char* text, const char* language,
                                           size_t* words);

/*
 * Starts the HTTP API and, when `run_managers` is non-zero, the periodic
 * managers, on background threads. `port` 0 picks a free port; a negative
 * port and a NULL host fall back to the store settings.
 */
PARCUR_API parcur_status parcur_server_start(parcur_store* store, const char* host, int port,
                                             int run_managers, parcur_server** out);
PARCUR_API int parcur_server_port(const parcur_server* server);
PARCUR_API void parcur_server_stop(parcur_server* server);

#ifdef __cplusplus
}
#endif

#endif /* PARCUR_H */
