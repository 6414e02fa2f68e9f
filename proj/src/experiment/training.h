// experiment/training.h

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

#ifndef LFVCTC_EXPERIMENT_TRAINING_H_
#define LFVCTC_EXPERIMENT_TRAINING_H_

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "corpus/utterance.h"
#include "decode/scoring.h"
#include "layers/acoustic_model.h"

namespace lfv {

struct TrainConfig {
  std::size_t epochs = 30;
  double learning_rate = 0.05;
  double momentum = 0.9;
  double clip_norm = 5.0;
  std::size_t batch_size = 15;
  // The learning rate halves after an epoch whose mean loss improved by less
  // than this fraction. Negative values disable halving.
  double halving_threshold = -1.0;
  void Validate() const;
};

struct AmTrainingResult {
  std::vector<double> epoch_losses;  // mean CTC loss per utterance
  std::vector<double> learning_rates;
  std::size_t skipped_utterances = 0;
};

using LogFn = std::function<void(const std::string&)>;

// Trains `model` with CTC on `utts`. `lfvs` is empty for the baseline or holds
// one LFV per utterance (same order). Utterances whose labels cannot fit the
// model's output frames are skipped and logged. Batch order depends only on
// `seed` and the utterances, so conditions sharing a seed see identical
// batches.
AmTrainingResult train_am(AcousticModel& model, std::span<const Utterance> utts,
                          const Vocabulary& vocab, std::span<const Tensor> lfvs,
                          const TrainConfig& config, std::uint64_t seed,
                          const LogFn& log = {});

// Greedy decode of every utterance; returns token strings.
std::vector<TranscriptRecord> decode_greedy(const AcousticModel& model,
                                            std::span<const Utterance> utts,
                                            const Vocabulary& vocab,
                                            std::span<const Tensor> lfvs);

std::vector<TranscriptRecord> references_of(std::span<const Utterance> utts);

}  // namespace lfv

#endif  // LFVCTC_EXPERIMENT_TRAINING_H_
