// experiment/pipeline.h

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

#ifndef LFVCTC_EXPERIMENT_PIPELINE_H_
#define LFVCTC_EXPERIMENT_PIPELINE_H_

#include <cstdint>
#include <string>

#include "decode/fused_decode.h"
#include "decode/scoring.h"
#include "experiment/config.h"
#include "experiment/training.h"

namespace lfv {

// File-to-file stages behind the individual CLI subcommands.

void gen_data_stage(const ExperimentConfig& config, std::uint64_t seed,
                    const std::string& out_dir);

// Returns the held-out frame accuracy (0 when no held-out manifest is given).
double train_lfv_stage(const ExperimentConfig& config, std::uint64_t seed,
                       const std::string& train_manifest, const std::string& heldout_manifest,
                       const std::string& out_path, const LogFn& log = {});

void extract_lfv_stage(const std::string& extractor_path, const std::string& manifest,
                       LfvGranularity granularity, const std::string& out_path);

// `lfv_path` may be empty for the baseline.
AmTrainingResult train_am_stage(const ExperimentConfig& config, std::uint64_t seed,
                                 const std::string& manifest, const std::string& lfv_path,
                                 Adaptation condition, DataSize size,
                                 const std::string& out_path, const LogFn& log = {});

// Writes hypotheses in the transcript exchange format. `lm_path` may be
// empty, in which case decoding runs with lambda 0.
void decode_stage(const std::string& model_path, const std::string& manifest,
                  const std::string& lfv_path, const std::string& lm_path,
                  const FusionOptions& options, const std::string& out_path);

// Trains on the transcripts of `language` (all languages when empty) and
// returns the per-epoch perplexities.
std::vector<double> train_lm_stage(const ExperimentConfig& config, std::uint64_t seed,
                                   const std::string& manifest, const std::string& language,
                                   const std::string& out_path, const LogFn& log = {});

// Score report TSV text.
std::string score_stage(const std::string& ref_path, const std::string& hyp_path,
                        ScoreLevel level, const std::string& condition, const LogFn& warn = {});

}  // namespace lfv

#endif  // LFVCTC_EXPERIMENT_PIPELINE_H_
