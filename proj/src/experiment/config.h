// experiment/config.h

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

#ifndef LFVCTC_EXPERIMENT_CONFIG_H_
#define LFVCTC_EXPERIMENT_CONFIG_H_

#include <cstdint>
#include <string>
#include <vector>

#include "corpus/synthetic.h"
#include "corpus/utterance.h"
#include "decode/char_lm.h"
#include "decode/fused_decode.h"
#include "experiment/training.h"
#include "layers/acoustic_model.h"
#include "lfv/extractor.h"

namespace lfv {

enum class DataSize { kFull, kLowResource };
const char* data_size_name(DataSize s);
DataSize parse_data_size(const std::string& name);

inline constexpr char kGenerateCorpus[] = "generate";

struct ExperimentConfig {
  // "generate" or a directory written by `gen-data`.
  std::string corpus_source = kGenerateCorpus;
  SyntheticConfig corpus;

  std::vector<UnitMode> unit_modes = {UnitMode::kGrapheme, UnitMode::kPhone};
  std::vector<DataSize> data_sizes = {DataSize::kFull, DataSize::kLowResource};
  std::vector<Adaptation> conditions = {Adaptation::kBaseline, Adaptation::kAppend,
                                        Adaptation::kModulate};
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};

  // Vocabulary, adaptation and LFV width are filled in per cell.
  AcousticModelConfig model;
  LfvGranularity append_granularity = LfvGranularity::kFrame;
  LfvGranularity modulate_granularity = LfvGranularity::kUtterance;

  LfvExtractorConfig lfv;
  TrainConfig train;
  // Epoch budget on the low-resource split; 0 reuses train.epochs.
  std::size_t low_resource_epochs = 120;

  CharLmConfig lm;
  FusionOptions decode;
  bool wer_enabled = true;
  std::string wer_language = "lang0";

  std::size_t EpochsFor(DataSize size) const;
  LfvGranularity GranularityFor(Adaptation a) const;
  // Model config of one condition for a vocabulary of `vocab_size` tokens.
  AcousticModelConfig ModelFor(Adaptation a, std::size_t vocab_size) const;
  // Throws ConfigError, including when a modulated layer's width is not a
  // multiple of the LFV dimension.
  void Validate() const;
};

// Flat "key = value" lines; '#' starts a comment; lists are comma separated.
// Unknown keys and malformed values throw ConfigError naming source:line.
ExperimentConfig parse_experiment_config(const std::string& text,
                                         const std::string& source = "<config>");
// Throws IoError when the file cannot be read.
ExperimentConfig load_experiment_config(const std::string& path);
// Canonical text; parsing it yields an equal configuration.
std::string format_experiment_config(const ExperimentConfig& config);

}  // namespace lfv

#endif  // LFVCTC_EXPERIMENT_CONFIG_H_
