// tools/lfvctc_main.cc

// Copyright 2026 The lfvctc Authors
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

// Command-line front end. Links only the public C interface.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "lfvctc/lfvctc.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

void print_line(const char* line, void*) { std::cerr << line << '\n'; }

int report_failure(const std::string& stage, lfv_status status) {
  std::cerr << "lfvctc " << stage << ": " << lfv_status_name(status) << ": " << lfv_last_error()
            << '\n';
  return status == LFV_ERR_USAGE || status == LFV_ERR_CONFIG ? kExitUsage : kExitRuntime;
}

// Owns an lfv_config handle.
class ConfigHandle {
 public:
  ConfigHandle() = default;
  ConfigHandle(const ConfigHandle&) = delete;
  ConfigHandle& operator=(const ConfigHandle&) = delete;
  ~ConfigHandle() { lfv_config_destroy(config_); }
  lfv_config** out() { return &config_; }
  const lfv_config* get() const { return config_; }
  lfv_config* get() { return config_; }

 private:
  lfv_config* config_ = nullptr;
};

// Owns a string allocated by the library.
class LibString {
 public:
  LibString() = default;
  LibString(const LibString&) = delete;
  LibString& operator=(const LibString&) = delete;
  ~LibString() { lfv_string_free(text_); }
  char** out() { return &text_; }
  const char* get() const { return text_ ? text_ : ""; }

 private:
  char* text_ = nullptr;
};

struct GlobalOptions {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out;
};

// Loads the configuration named by --config (or the defaults), applying
// --seed as the only seed. Returns an exit code; kExitOk on success.
int load_config(const GlobalOptions& global, ConfigHandle& config) {
  lfv_status status;
  if (global.config_path.empty()) {
    status = lfv_config_create(config.out());
  } else {
    if (!std::filesystem::exists(global.config_path)) {
      std::cerr << "lfvctc: config file not found: " << global.config_path << '\n';
      return kExitUsage;
    }
    status = lfv_config_load(global.config_path.c_str(), config.out());
  }
  if (status != LFV_OK) return report_failure("config", status);
  if (global.seed_given) {
    status = lfv_config_set(config.get(), "seeds", std::to_string(global.seed).c_str());
    if (status != LFV_OK) return report_failure("config", status);
  }
  return kExitOk;
}

// First configured seed, used by the single-run stages when --seed is absent.
std::uint64_t stage_seed(const GlobalOptions& global) { return global.seed_given ? global.seed : 1; }

int require_out(const GlobalOptions& global, const std::string& what) {
  if (!global.out.empty()) return kExitOk;
  std::cerr << "lfvctc: --out <" << what << "> is required\n";
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multilingual CTC acoustic models with language feature vectors", "lfvctc"};
  app.require_subcommand(1);

  GlobalOptions global;
  app.add_option("--config", global.config_path, "experiment configuration file");
  app.add_option_function<std::uint64_t>(
      "--seed",
      [&global](std::uint64_t seed) {
        global.seed = seed;
        global.seed_given = true;
      },
      "random seed (overrides the configured seed list)");
  app.add_option("--out", global.out, "output file or directory");
  app.set_version_flag("--version", std::string(lfv_version()));

  auto* gen = app.add_subcommand("gen-data", "generate the synthetic corpus");

  auto* train_lfv = app.add_subcommand("train-lfv", "train the LFV extractor");
  std::string lfv_train_manifest, lfv_heldout_manifest;
  train_lfv->add_option("--train", lfv_train_manifest, "training manifest")->required();
  train_lfv->add_option("--heldout", lfv_heldout_manifest, "held-out manifest for accuracy");

  auto* extract = app.add_subcommand("extract-lfv", "compute LFVs for a manifest");
  std::string extractor_path, extract_manifest, granularity_name = "utterance";
  extract->add_option("--extractor", extractor_path, "extractor file")->required();
  extract->add_option("--manifest", extract_manifest, "manifest")->required();
  extract->add_option("--granularity", granularity_name, "utterance or frame")
      ->check(CLI::IsMember({"utterance", "frame"}));

  auto* train_am = app.add_subcommand("train-am", "train an acoustic model");
  std::string am_manifest, am_lfv, condition = "baseline", data_size = "full";
  train_am->add_option("--manifest", am_manifest, "training manifest")->required();
  train_am->add_option("--lfv", am_lfv, "LFV file (append and modulate)");
  train_am->add_option("--condition", condition, "baseline, append or modulate")
      ->check(CLI::IsMember({"baseline", "append", "modulate"}));
  train_am->add_option("--data-size", data_size, "full or low_resource");

  auto* decode = app.add_subcommand("decode", "decode a manifest");
  std::string model_path, decode_manifest, decode_lfv, lm_path;
  double lambda = 0.0;
  std::size_t beam = 8;
  decode->add_option("--model", model_path, "acoustic model checkpoint")->required();
  decode->add_option("--manifest", decode_manifest, "manifest")->required();
  decode->add_option("--lfv", decode_lfv, "LFV file");
  decode->add_option("--lm", lm_path, "character language model");
  decode->add_option("--lambda", lambda, "language model weight")->check(CLI::NonNegativeNumber);
  decode->add_option("--beam", beam, "beam width")->check(CLI::PositiveNumber);

  auto* score = app.add_subcommand("score", "score hypotheses against references");
  std::string ref_path, hyp_path, level = "token", score_condition = "-";
  score->add_option("--ref", ref_path, "reference transcripts")->required();
  score->add_option("--hyp", hyp_path, "hypothesis transcripts")->required();
  score->add_option("--level", level, "token or word")
      ->check(CLI::IsMember({"token", "word"}));
  score->add_option("--condition", score_condition, "label for the condition column");

  auto* train_lm = app.add_subcommand("train-lm", "train a character language model");
  std::string lm_manifest, lm_language;
  train_lm->add_option("--manifest", lm_manifest, "manifest with transcripts")->required();
  train_lm->add_option("--language", lm_language, "restrict to one language");

  auto* run = app.add_subcommand("run-experiment", "run the full comparison");

  auto* report = app.add_subcommand("report", "print the tables of a results directory");
  std::string results_dir;
  report->add_option("--results", results_dir, "results directory (defaults to --out)");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  ConfigHandle config;
  const std::uint64_t seed = stage_seed(global);
  lfv_status status = LFV_OK;
  std::string stage;

  if (*gen) {
    stage = "gen-data";
    if (int rc = require_out(global, "dir"); rc != kExitOk) return rc;
    if (int rc = load_config(global, config); rc != kExitOk) return rc;
    status = lfv_generate_corpus(config.get(), seed, global.out.c_str());
  } else if (*train_lfv) {
    stage = "train-lfv";
    if (int rc = require_out(global, "file"); rc != kExitOk) return rc;
    if (int rc = load_config(global, config); rc != kExitOk) return rc;
    double accuracy = 0.0;
    status = lfv_train_extractor(
        config.get(), seed, lfv_train_manifest.c_str(),
        lfv_heldout_manifest.empty() ? nullptr : lfv_heldout_manifest.c_str(), global.out.c_str(),
        &accuracy, print_line, nullptr);
    if (status == LFV_OK && !lfv_heldout_manifest.empty()) {
      std::cout << "heldout_frame_accuracy\t" << accuracy << '\n';
    }
  } else if (*extract) {
    stage = "extract-lfv";
    if (int rc = require_out(global, "file"); rc != kExitOk) return rc;
    status = lfv_extract_lfv_file(
        extractor_path.c_str(), extract_manifest.c_str(),
        granularity_name == "frame" ? LFV_GRANULARITY_FRAME : LFV_GRANULARITY_UTTERANCE,
        global.out.c_str());
  } else if (*train_am) {
    stage = "train-am";
    if (int rc = require_out(global, "file"); rc != kExitOk) return rc;
    if (int rc = load_config(global, config); rc != kExitOk) return rc;
    status = lfv_train_acoustic_model(config.get(), seed, am_manifest.c_str(),
                                      am_lfv.empty() ? nullptr : am_lfv.c_str(),
                                      condition.c_str(), data_size.c_str(), global.out.c_str(),
                                      print_line, nullptr);
  } else if (*decode) {
    stage = "decode";
    if (int rc = require_out(global, "file"); rc != kExitOk) return rc;
    status = lfv_decode(model_path.c_str(), decode_manifest.c_str(),
                        decode_lfv.empty() ? nullptr : decode_lfv.c_str(),
                        lm_path.empty() ? nullptr : lm_path.c_str(), lambda, beam,
                        global.out.c_str());
  } else if (*score) {
    stage = "score";
    LibString tsv;
    status = lfv_score_files(ref_path.c_str(), hyp_path.c_str(), level.c_str(),
                             score_condition.c_str(), tsv.out(), print_line, nullptr);
    if (status == LFV_OK) std::cout << tsv.get();
  } else if (*train_lm) {
    stage = "train-lm";
    if (int rc = require_out(global, "file"); rc != kExitOk) return rc;
    if (int rc = load_config(global, config); rc != kExitOk) return rc;
    double perplexity = 0.0;
    status = lfv_train_lm(config.get(), seed, lm_manifest.c_str(),
                          lm_language.empty() ? nullptr : lm_language.c_str(),
                          global.out.c_str(), &perplexity, print_line, nullptr);
    if (status == LFV_OK) std::cout << "final_perplexity\t" << perplexity << '\n';
  } else if (*run) {
    stage = "run-experiment";
    if (int rc = require_out(global, "dir"); rc != kExitOk) return rc;
    if (int rc = load_config(global, config); rc != kExitOk) return rc;
    status = lfv_run_experiment(config.get(), global.out.c_str(), print_line, nullptr);
  } else if (*report) {
    stage = "report";
    const std::string dir = results_dir.empty() ? global.out : results_dir;
    if (dir.empty()) {
      std::cerr << "lfvctc: report needs --results <dir> or --out <dir>\n";
      return kExitUsage;
    }
    LibString table;
    status = lfv_format_report(dir.c_str(), table.out());
    if (status == LFV_OK) std::cout << table.get();
  }

  return status == LFV_OK ? kExitOk : report_failure(stage, status);
}
