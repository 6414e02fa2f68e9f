/* include/lfvctc/lfvctc.h */

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

/*
 * C interface to the lfvctc library. All objects are opaque handles created
 * and destroyed through this API. Every fallible call returns an lfv_status;
 * on failure lfv_last_error() describes the most recent error of the calling
 * thread. Strings returned through char** must be released with
 * lfv_string_free().
 */

#ifndef LFVCTC_LFVCTC_H_
#define LFVCTC_LFVCTC_H_

#include <stddef.h>
#include <stdint.h>

#if defined(LFVCTC_BUILDING_LIBRARY)
#define LFVCTC_API __attribute__((visibility("default")))
#else
#define LFVCTC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lfv_status {
  LFV_OK = 0,
  LFV_ERR_USAGE = 1,      /* invalid arguments or call sequence */
  LFV_ERR_CONFIG = 2,     /* invalid configuration */
  LFV_ERR_FORMAT = 3,     /* malformed input file or text */
  LFV_ERR_IO = 4,         /* file could not be opened, read or written */
  LFV_ERR_SHAPE = 5,      /* tensor dimensions do not match */
  LFV_ERR_INFEASIBLE = 6, /* label sequence cannot fit the frames */
  LFV_ERR_TRAINING = 7,   /* non-finite values during training */
  LFV_ERR_INTERNAL = 8
} lfv_status;

typedef enum lfv_granularity {
  LFV_GRANULARITY_UTTERANCE = 0,
  LFV_GRANULARITY_FRAME = 1
} lfv_granularity;

typedef struct lfv_config lfv_config;
typedef struct lfv_model lfv_model;
typedef struct lfv_extractor lfv_extractor;

typedef struct lfv_score {
  size_t substitutions;
  size_t insertions;
  size_t deletions;
  size_t reference_length;
  double rate;
  int empty_reference;
} lfv_score;

/* Receives one log line; `user` is passed through unchanged. */
typedef void (*lfv_log_fn)(const char* line, void* user);

LFVCTC_API const char* lfv_version(void);
LFVCTC_API const char* lfv_last_error(void);
LFVCTC_API const char* lfv_status_name(lfv_status status);
LFVCTC_API void lfv_string_free(char* s);

/* Configuration. */
LFVCTC_API lfv_status lfv_config_create(lfv_config** out);
LFVCTC_API lfv_status lfv_config_load(const char* path, lfv_config** out);
LFVCTC_API lfv_status lfv_config_parse(const char* text, lfv_config** out);
/* Applies one "key = value" setting and re-validates. */
LFVCTC_API lfv_status lfv_config_set(lfv_config* config, const char* key, const char* value);
LFVCTC_API lfv_status lfv_config_format(const lfv_config* config, char** out_text);
LFVCTC_API void lfv_config_destroy(lfv_config* config);

/* Pipeline stages. Optional path arguments accept NULL or "". */
LFVCTC_API lfv_status lfv_generate_corpus(const lfv_config* config, uint64_t seed,
                                          const char* out_dir);
LFVCTC_API lfv_status lfv_train_extractor(const lfv_config* config, uint64_t seed,
                                          const char* train_manifest,
                                          const char* heldout_manifest,
                                          const char* out_path, double* heldout_accuracy,
                                          lfv_log_fn log, void* user);
LFVCTC_API lfv_status lfv_extract_lfv_file(const char* extractor_path, const char* manifest,
                                           lfv_granularity granularity, const char* out_path);
/* condition: "baseline", "append" or "modulate"; data_size: "full" or
 * "low_resource" (selects the epoch budget). */
LFVCTC_API lfv_status lfv_train_acoustic_model(const lfv_config* config, uint64_t seed,
                                               const char* manifest, const char* lfv_path,
                                               const char* condition, const char* data_size,
                                               const char* out_path, lfv_log_fn log,
                                               void* user);
/* lambda and beam configure shallow fusion; without lm_path lambda is 0. */
LFVCTC_API lfv_status lfv_decode(const char* model_path, const char* manifest,
                                 const char* lfv_path, const char* lm_path, double lambda,
                                 size_t beam, const char* out_hyp_path);
/* language: restrict training text to one language (NULL for all). */
LFVCTC_API lfv_status lfv_train_lm(const lfv_config* config, uint64_t seed,
                                   const char* manifest, const char* language,
                                   const char* out_path, double* final_perplexity,
                                   lfv_log_fn log, void* user);
/* level: "token" or "word". Returns the score report TSV. */
LFVCTC_API lfv_status lfv_score_files(const char* ref_path, const char* hyp_path,
                                      const char* level, const char* condition,
                                      char** out_tsv, lfv_log_fn warn, void* user);
LFVCTC_API lfv_status lfv_run_experiment(const lfv_config* config, const char* out_dir,
                                         lfv_log_fn log, void* user);
/* Reads <results_dir>/report.tsv (and wer.tsv) and formats the median
 * tables. */
LFVCTC_API lfv_status lfv_format_report(const char* results_dir, char** out_text);

/* Acoustic model handles. */
LFVCTC_API lfv_status lfv_model_load(const char* path, lfv_model** out);
LFVCTC_API lfv_status lfv_model_info(const lfv_model* model, size_t* vocab_size,
                                     size_t* feature_dim, size_t* lfv_dim);
/* features: frames x feature_dim row-major. lfv: lfv_rows x lfv_dim with
 * lfv_rows 1 (utterance) or frames (per frame); NULL for the baseline.
 * Writes out_frames x vocab_size log-probabilities. */
LFVCTC_API lfv_status lfv_model_forward(const lfv_model* model, const double* features,
                                        size_t frames, size_t feature_dim, const double* lfv,
                                        size_t lfv_rows, size_t lfv_dim, double* out_log_probs,
                                        size_t out_capacity, size_t* out_frames);
LFVCTC_API void lfv_model_destroy(lfv_model* model);

/* LFV extractor handles. */
LFVCTC_API lfv_status lfv_extractor_load(const char* path, lfv_extractor** out);
LFVCTC_API lfv_status lfv_extractor_compute(const lfv_extractor* extractor,
                                            const double* features, size_t frames,
                                            size_t feature_dim, lfv_granularity granularity,
                                            double* out, size_t out_capacity, size_t* out_rows,
                                            size_t* out_dim);
LFVCTC_API void lfv_extractor_destroy(lfv_extractor* extractor);

/* Array utilities. log_probs: frames x vocab row-major, blank is id 0. */
LFVCTC_API lfv_status lfv_ctc_loss(const double* log_probs, size_t frames, size_t vocab,
                                   const int* labels, size_t num_labels, double* out_loss);
LFVCTC_API lfv_status lfv_greedy_decode(const double* log_probs, size_t frames, size_t vocab,
                                        int* out_tokens, size_t capacity, size_t* out_len);
LFVCTC_API lfv_status lfv_edit_distance(const char* const* ref, size_t ref_len,
                                        const char* const* hyp, size_t hyp_len,
                                        lfv_score* out);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* LFVCTC_LFVCTC_H_ */
