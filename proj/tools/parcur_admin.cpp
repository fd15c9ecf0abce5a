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

// parcur-admin: operator commands over a curation store.

#include <CLI11.hpp>
#include <json.hpp>

#include <optional>
#include <vector>

#include "cli_common.hpp"

using namespace parcur_cli;

int main(int argc, char** argv) {
  CLI::App app{"Administer a parallel-text curation store"};
  app.require_subcommand(1);
  std::string storeUri = default_store();
  std::string configPath;
  app.add_option("--store", storeUri, "Store path or URL (sqlite:<path>, memory:)");
  app.add_option("--config", configPath, "Settings JSON file")->check(CLI::ExistingFile);

  // load-dataset
  auto* load = app.add_subcommand("load-dataset", "Import line-parallel text files");
  std::string loadDir, loadId, loadTags, loadCorpus, loadSplit;
  bool loadReplace = false;
  load->add_option("path", loadDir, "Directory holding <tag>[.<split>] files")->required();
  load->add_option("--dataset", loadId, "Dataset id")->required();
  load->add_option("--langs", loadTags, "Comma-separated language tags")->required();
  load->add_option("--corpus", loadCorpus, "Corpus name used for export (default: dataset id)");
  load->add_option("--split", loadSplit, "File name suffix, e.g. dev");
  load->add_flag("--replace", loadReplace, "Replace a dataset that has no workflows yet");

  // create-workflows
  auto* create = app.add_subcommand("create-workflows", "Create one workflow per segment");
  std::string createId, createTarget;
  std::int64_t createPriority = 0;
  create->add_option("--dataset", createId, "Dataset id")->required();
  create->add_option("--target", createTarget, "Target language tag")->required();
  create->add_option("--priority-start", createPriority, "Priority of the first segment");

  auto* report = app.add_subcommand("system-report", "Workflow and task counts per dataset");

  // export-dataset
  auto* exportCmd = app.add_subcommand("export-dataset", "Write final and versioned files");
  std::string exportId, exportDir;
  bool exportNoEdits = false, exportPartial = false;
  exportCmd->add_option("--dataset", exportId, "Dataset id")->required();
  exportCmd->add_option("--out-dir", exportDir, "Output directory")->required();
  exportCmd->add_flag("--no-edits", exportNoEdits, "Skip the .vN version files");
  exportCmd->add_flag("--partial", exportPartial, "Allow unfinished workflows");

  // accounting-statements
  auto* accounting = app.add_subcommand("accounting-statements", "Completed tasks per month");
  std::string fromMonth, toMonth;
  accounting->add_option("--from", fromMonth, "First month, YYYY-MM");
  accounting->add_option("--to", toMonth, "Last month, YYYY-MM");

  // align
  auto* align = app.add_subcommand("align", "Reorder variant files to a consensus reference");
  std::string consensus, ref, outDir, reportPath;
  std::vector<std::string> targets;
  align->add_option("--consensus", consensus, "Consensus reference file")
      ->required()
      ->check(CLI::ExistingFile);
  align->add_option("--ref", ref, "Variant reference file")->required()->check(CLI::ExistingFile);
  align->add_option("--target", targets, "Files parallel to --ref")->check(CLI::ExistingFile);
  align->add_option("--out-dir", outDir, "Output directory")->required();
  align->add_option("--report", reportPath, "CSV report path");

  // stats
  auto* stats = app.add_subcommand("stats", "Copyedit statistics, or file summaries of an export");
  std::string statsId, summaryDir, summaryCorpus;
  stats->add_option("--dataset", statsId, "Only this dataset");
  auto* summaryOpt =
      stats->add_option("--summary", summaryDir, "Summarize an export directory instead");
  stats->add_option("--corpus", summaryCorpus, "Corpus subdirectory for --summary")
      ->needs(summaryOpt);

  // user add
  auto* user = app.add_subcommand("user", "Manage user profiles");
  user->require_subcommand(1);
  auto* userAdd = user->add_subcommand("add", "Create or replace a user profile");
  std::string userId, password, preferred, uiLanguage;
  bool translator = false, verifier = false;
  int level = 0, maxOpen = 10;
  userAdd->add_option("id", userId, "User id")->required();
  userAdd->add_flag("--translator", translator, "Active translator");
  userAdd->add_flag("--verifier", verifier, "Active verifier");
  userAdd->add_option("--level", level, "Verifier level 0-3")->check(CLI::Range(0, 3));
  userAdd->add_option("--sources", preferred, "Preferred source languages, comma-separated");
  userAdd->add_option("--ui-language", uiLanguage, "Interface language tag");
  userAdd->add_option("--max-open", maxOpen, "Maximum open tasks")->check(CLI::PositiveNumber);
  userAdd->add_option("--password", password, "Login password");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kSuccess : kUserError;
  }

  if (align->parsed()) {
    return run([&] {
      std::vector<const char*> paths;
      for (const auto& t : targets) paths.push_back(t.c_str());
      char* summary = nullptr;
      check(parcur_align_files(consensus.c_str(), ref.c_str(), paths.data(), paths.size(),
                               outDir.c_str(), reportPath.empty() ? nullptr : reportPath.c_str(),
                               &summary));
      emit(summary);
      std::fputc('\n', stdout);
    });
  }
  if (stats->parsed() && !summaryDir.empty()) {
    return run([&] {
      if (summaryCorpus.empty()) summaryCorpus = statsId;
      if (summaryCorpus.empty()) throw Failure(PARCUR_E_INVALID_ARGUMENT, "--summary needs --corpus");
      char* csv = nullptr;
      check(parcur_corpus_summary(summaryDir.c_str(), summaryCorpus.c_str(), &csv));
      emit(csv);
    });
  }

  return run([&] {
    Store store(storeUri, configPath);
    if (load->parsed()) {
      size_t n = 0;
      check(parcur_load_dataset(store.get(), loadId.c_str(), loadDir.c_str(), loadTags.c_str(),
                                loadCorpus.empty() ? nullptr : loadCorpus.c_str(),
                                loadSplit.empty() ? nullptr : loadSplit.c_str(), loadReplace, &n));
      std::cout << "imported " << n << " segments into " << loadId << '\n';
    } else if (create->parsed()) {
      size_t n = 0;
      check(parcur_create_workflows(store.get(), createId.c_str(), createTarget.c_str(),
                                    createPriority, &n));
      std::cout << "created " << n << " workflows for " << createId << '\n';
    } else if (report->parsed()) {
      char* csv = nullptr;
      check(parcur_system_report(store.get(), &csv));
      emit(csv);
    } else if (exportCmd->parsed()) {
      size_t n = 0;
      check(parcur_export_dataset(store.get(), exportId.c_str(), exportDir.c_str(),
                                  !exportNoEdits, exportPartial, &n));
      std::cout << "wrote " << n << " files under " << exportDir << '\n';
    } else if (accounting->parsed()) {
      char* csv = nullptr;
      check(parcur_accounting_statements(store.get(), fromMonth.empty() ? nullptr : fromMonth.c_str(),
                                         toMonth.empty() ? nullptr : toMonth.c_str(), &csv));
      emit(csv);
    } else if (stats->parsed()) {
      char* csv = nullptr;
      check(parcur_stats(store.get(), statsId.empty() ? nullptr : statsId.c_str(), &csv));
      emit(csv);
    } else if (userAdd->parsed()) {
      nlohmann::json profile{{"userId", userId},
                             {"isActiveTranslator", translator},
                             {"isActiveVerifier", verifier},
                             {"verifierLevel", level},
                             {"maxOpenTasks", maxOpen},
                             {"preferredSourceLanguages", nlohmann::json::array()}};
      std::stringstream list(preferred);
      for (std::string tag; std::getline(list, tag, ',');) {
        if (!tag.empty()) profile["preferredSourceLanguages"].push_back(tag);
      }
      if (!uiLanguage.empty()) profile["uiLanguage"] = uiLanguage;
      check(parcur_user_add(store.get(), profile.dump().c_str(),
                            password.empty() ? nullptr : password.c_str()));
      std::cout << "saved user " << userId << '\n';
    }
  });
}
