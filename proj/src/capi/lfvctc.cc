// capi/lfvctc.cc

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

#include "lfvctc/lfvctc.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "ctc/ctc.h"
#include "decode/scoring.h"
#include "experiment/config.h"
#include "experiment/experiment.h"
#include "experiment/pipeline.h"
#include "experiment/report.h"
#include "layers/acoustic_model.h"
#include "lfv/extractor.h"
#include "numerics/errors.h"

struct lfv_config {
  lfv::ExperimentConfig config;
};

struct lfv_model {
  lfv::AcousticModel model;
};

struct lfv_extractor {
  lfv::LfvExtractor extractor;
};

namespace {

thread_local std::string g_last_error;

lfv_status status_of(lfv::ErrorKind kind) {
  switch (kind) {
    case lfv::ErrorKind::kUsage: return LFV_ERR_USAGE;
    case lfv::ErrorKind::kConfig: return LFV_ERR_CONFIG;
    case lfv::ErrorKind::kFormat: return LFV_ERR_FORMAT;
    case lfv::ErrorKind::kIo: return LFV_ERR_IO;
    case lfv::ErrorKind::kShape: return LFV_ERR_SHAPE;
    case lfv::ErrorKind::kInfeasible: return LFV_ERR_INFEASIBLE;
    case lfv::ErrorKind::kTraining: return LFV_ERR_TRAINING;
  }
  return LFV_ERR_INTERNAL;
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
lfv_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return LFV_OK;
  } catch (const lfv::Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown error";
  }
  return LFV_ERR_INTERNAL;
}

void require(bool ok, const char* what) {
  if (!ok) throw lfv::UsageError(what);
}

std::string opt(const char* s) { return s ? std::string(s) : std::string(); }

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

lfv::LogFn log_adapter(lfv_log_fn fn, void* user) {
  if (!fn) return {};
  return [fn, user](const std::string& line) { fn(line.c_str(), user); };
}

}  // namespace

extern "C" {

const char* lfv_version(void) { return "1.0.0"; }

const char* lfv_last_error(void) { return g_last_error.c_str(); }

const char* lfv_status_name(lfv_status status) {
  switch (status) {
    case LFV_OK: return "ok";
    case LFV_ERR_USAGE: return "usage error";
    case LFV_ERR_CONFIG: return "config error";
    case LFV_ERR_FORMAT: return "format error";
    case LFV_ERR_IO: return "i/o error";
    case LFV_ERR_SHAPE: return "shape error";
    case LFV_ERR_INFEASIBLE: return "infeasible labels";
    case LFV_ERR_TRAINING: return "training error";
    case LFV_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void lfv_string_free(char* s) { std::free(s); }

lfv_status lfv_config_create(lfv_config** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be NULL");
    *out = new lfv_config{};
  });
}

lfv_status lfv_config_load(const char* path, lfv_config** out) {
  return guarded([&] {
    require(path && out, "path and out must not be NULL");
    *out = new lfv_config{lfv::load_experiment_config(path)};
  });
}

lfv_status lfv_config_parse(const char* text, lfv_config** out) {
  return guarded([&] {
    require(text && out, "text and out must not be NULL");
    *out = new lfv_config{lfv::parse_experiment_config(text)};
  });
}

lfv_status lfv_config_set(lfv_config* config, const char* key, const char* value) {
  return guarded([&] {
    require(config && key && value, "config, key and value must not be NULL");
    // Re-parse the canonical text with the override appended so that the
    // same validation applies.
    const std::string text = lfv::format_experiment_config(config->config) + key + " = " +
                             value + "\n";
    config->config = lfv::parse_experiment_config(text, "<override>");
  });
}

lfv_status lfv_config_format(const lfv_config* config, char** out_text) {
  return guarded([&] {
    require(config && out_text, "config and out_text must not be NULL");
    *out_text = dup_string(lfv::format_experiment_config(config->config));
  });
}

void lfv_config_destroy(lfv_config* config) { delete config; }

lfv_status lfv_generate_corpus(const lfv_config* config, uint64_t seed, const char* out_dir) {
  return guarded([&] {
    require(config && out_dir, "config and out_dir must not be NULL");
    lfv::gen_data_stage(config->config, seed, out_dir);
  });
}

lfv_status lfv_train_extractor(const lfv_config* config, uint64_t seed,
                               const char* train_manifest, const char* heldout_manifest,
                               const char* out_path, double* heldout_accuracy, lfv_log_fn log,
                               void* user) {
  return guarded([&] {
    require(config && train_manifest && out_path, "config, manifest and out_path are required");
    const double acc = lfv::train_lfv_stage(config->config, seed, train_manifest,
                                            opt(heldout_manifest), out_path,
                                            log_adapter(log, user));
    if (heldout_accuracy) *heldout_accuracy = acc;
  });
}

lfv_status lfv_extract_lfv_file(const char* extractor_path, const char* manifest,
                                lfv_granularity granularity, const char* out_path) {
  return guarded([&] {
    require(extractor_path && manifest && out_path, "paths must not be NULL");
    require(granularity == LFV_GRANULARITY_UTTERANCE || granularity == LFV_GRANULARITY_FRAME,
            "invalid granularity");
    lfv::extract_lfv_stage(extractor_path, manifest,
                           static_cast<lfv::LfvGranularity>(granularity), out_path);
  });
}

lfv_status lfv_train_acoustic_model(const lfv_config* config, uint64_t seed,
                                    const char* manifest, const char* lfv_path,
                                    const char* condition, const char* data_size,
                                    const char* out_path, lfv_log_fn log, void* user) {
  return guarded([&] {
    require(config && manifest && condition && out_path,
            "config, manifest, condition and out_path are required");
    const lfv::DataSize size =
        data_size && *data_size ? lfv::parse_data_size(data_size) : lfv::DataSize::kFull;
    lfv::train_am_stage(config->config, seed, manifest, opt(lfv_path),
                        lfv::parse_adaptation(condition), size, out_path,
                        log_adapter(log, user));
  });
}

lfv_status lfv_decode(const char* model_path, const char* manifest, const char* lfv_path,
                      const char* lm_path, double lambda, size_t beam, const char* out_hyp_path) {
  return guarded([&] {
    require(model_path && manifest && out_hyp_path, "model, manifest and output are required");
    require(lambda >= 0, "lambda must be >= 0");
    require(beam >= 1, "beam must be >= 1");
    lfv::FusionOptions options;
    options.lambda = lambda;
    options.beam = beam;
    lfv::decode_stage(model_path, manifest, opt(lfv_path), opt(lm_path), options, out_hyp_path);
  });
}

lfv_status lfv_train_lm(const lfv_config* config, uint64_t seed, const char* manifest,
                        const char* language, const char* out_path, double* final_perplexity,
                        lfv_log_fn log, void* user) {
  return guarded([&] {
    require(config && manifest && out_path, "config, manifest and out_path are required");
    const auto ppl = lfv::train_lm_stage(config->config, seed, manifest, opt(language), out_path,
                                         log_adapter(log, user));
    if (final_perplexity) *final_perplexity = ppl.empty() ? 0.0 : ppl.back();
  });
}

lfv_status lfv_score_files(const char* ref_path, const char* hyp_path, const char* level,
                           const char* condition, char** out_tsv, lfv_log_fn warn, void* user) {
  return guarded([&] {
    require(ref_path && hyp_path && level && out_tsv, "paths, level and out_tsv are required");
    *out_tsv = dup_string(lfv::score_stage(ref_path, hyp_path, lfv::parse_score_level(level),
                                           condition ? condition : "-",
                                           log_adapter(warn, user)));
  });
}

lfv_status lfv_run_experiment(const lfv_config* config, const char* out_dir, lfv_log_fn log,
                              void* user) {
  return guarded([&] {
    require(config && out_dir, "config and out_dir must not be NULL");
    lfv::run_experiment(config->config, out_dir, log_adapter(log, user));
  });
}

lfv_status lfv_format_report(const char* results_dir, char** out_text) {
  return guarded([&] {
    require(results_dir && out_text, "results_dir and out_text must not be NULL");
    *out_text = dup_string(lfv::format_report_table(lfv::read_report_dir(results_dir)));
  });
}

lfv_status lfv_model_load(const char* path, lfv_model** out) {
  return guarded([&] {
    require(path && out, "path and out must not be NULL");
    *out = new lfv_model{lfv::load_checkpoint(path)};
  });
}

lfv_status lfv_model_info(const lfv_model* model, size_t* vocab_size, size_t* feature_dim,
                          size_t* lfv_dim) {
  return guarded([&] {
    require(model != nullptr, "model must not be NULL");
    const auto& c = model->model.config();
    if (vocab_size) *vocab_size = c.vocab_size;
    if (feature_dim) *feature_dim = c.input_feature_dim;
    if (lfv_dim) *lfv_dim = c.lfv_dim;
  });
}

lfv_status lfv_model_forward(const lfv_model* model, const double* features, size_t frames,
                             size_t feature_dim, const double* lfv, size_t lfv_rows,
                             size_t lfv_dim, double* out_log_probs, size_t out_capacity,
                             size_t* out_frames) {
  return guarded([&] {
    require(model && features && out_frames, "model, features and out_frames are required");
    lfv::Tensor x({frames, feature_dim},
                  std::vector<double>(features, features + frames * feature_dim));
    lfv::Tensor v;
    if (lfv) {
      require(lfv_rows >= 1, "lfv_rows must be >= 1");
      std::vector<double> data(lfv, lfv + lfv_rows * lfv_dim);
      v = lfv_rows == 1 ? lfv::Tensor({lfv_dim}, std::move(data))
                        : lfv::Tensor({lfv_rows, lfv_dim}, std::move(data));
    }
    const lfv::Tensor lp = model->model.Forward({&x, lfv ? &v : nullptr});
    *out_frames = lp.rows();
    if (!out_log_probs) return;
    require(out_capacity >= lp.size(), "output buffer too small");
    std::copy(lp.values().begin(), lp.values().end(), out_log_probs);
  });
}

void lfv_model_destroy(lfv_model* model) { delete model; }

lfv_status lfv_extractor_load(const char* path, lfv_extractor** out) {
  return guarded([&] {
    require(path && out, "path and out must not be NULL");
    *out = new lfv_extractor{lfv::LfvExtractor::Load(path)};
  });
}

lfv_status lfv_extractor_compute(const lfv_extractor* extractor, const double* features,
                                 size_t frames, size_t feature_dim, lfv_granularity granularity,
                                 double* out, size_t out_capacity, size_t* out_rows,
                                 size_t* out_dim) {
  return guarded([&] {
    require(extractor && features, "extractor and features are required");
    lfv::Tensor x({frames, feature_dim},
                  std::vector<double>(features, features + frames * feature_dim));
    const lfv::Tensor v = lfv::extract_lfv(extractor->extractor, x,
                                           static_cast<lfv::LfvGranularity>(granularity));
    if (out_rows) *out_rows = v.rank() == 1 ? 1 : v.rows();
    if (out_dim) *out_dim = v.rank() == 1 ? v.size() : v.cols();
    if (!out) return;
    require(out_capacity >= v.size(), "output buffer too small");
    std::copy(v.values().begin(), v.values().end(), out);
  });
}

void lfv_extractor_destroy(lfv_extractor* extractor) { delete extractor; }

lfv_status lfv_ctc_loss(const double* log_probs, size_t frames, size_t vocab, const int* labels,
                        size_t num_labels, double* out_loss) {
  return guarded([&] {
    require(log_probs && out_loss && (labels || num_labels == 0), "NULL argument");
    lfv::Tensor lp({frames, vocab}, std::vector<double>(log_probs, log_probs + frames * vocab));
    const lfv::LabelSequence seq(std::vector<int>(labels, labels + num_labels));
    *out_loss = lfv::ctc_loss(lp, seq).loss;
  });
}

lfv_status lfv_greedy_decode(const double* log_probs, size_t frames, size_t vocab,
                             int* out_tokens, size_t capacity, size_t* out_len) {
  return guarded([&] {
    require(log_probs && out_len, "log_probs and out_len are required");
    lfv::Tensor lp({frames, vocab}, std::vector<double>(log_probs, log_probs + frames * vocab));
    const auto tokens = lfv::greedy_decode(lp);
    *out_len = tokens.size();
    if (!out_tokens) return;
    require(capacity >= tokens.size(), "output buffer too small");
    std::copy(tokens.begin(), tokens.end(), out_tokens);
  });
}

lfv_status lfv_edit_distance(const char* const* ref, size_t ref_len, const char* const* hyp,
                             size_t hyp_len, lfv_score* out) {
  return guarded([&] {
    require(out && (ref || ref_len == 0) && (hyp || hyp_len == 0), "NULL argument");
    const auto r = lfv::edit_distance(std::vector<std::string>(ref, ref + ref_len),
                                      std::vector<std::string>(hyp, hyp + hyp_len));
    *out = lfv_score{r.substitutions, r.insertions, r.deletions, r.reference_length, r.rate,
                     r.empty_reference ? 1 : 0};
  });
}

}  // extern "C"
