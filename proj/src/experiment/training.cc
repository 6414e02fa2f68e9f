// experiment/training.cc

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

#include "experiment/training.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ctc/ctc.h"
#include "numerics/errors.h"
#include "numerics/ops.h"
#include "numerics/optimizer.h"

namespace lfv {

void TrainConfig::Validate() const {
  if (epochs == 0) throw ConfigError("train.epochs must be positive");
  if (!(learning_rate > 0)) throw ConfigError("train.lr must be positive");
  if (momentum < 0 || momentum >= 1) throw ConfigError("train.momentum must be in [0, 1)");
  if (batch_size == 0) throw ConfigError("train.batch_size must be positive");
}

namespace {

ModelInput input_of(const Utterance& u, std::span<const Tensor> lfvs, std::size_t i) {
  return ModelInput{&u.features, lfvs.empty() ? nullptr : &lfvs[i]};
}

}  // namespace

AmTrainingResult train_am(AcousticModel& model, std::span<const Utterance> utts,
                          const Vocabulary& vocab, std::span<const Tensor> lfvs,
                          const TrainConfig& config, std::uint64_t seed,
                          const LogFn& log) {
  config.Validate();
  if (!lfvs.empty() && lfvs.size() != utts.size()) {
    throw UsageError("LFV count does not match utterance count");
  }
  AmTrainingResult result;

  std::vector<LabelSequence> labels;
  std::vector<Utterance> usable;
  std::vector<Tensor> usable_lfvs;
  for (std::size_t i = 0; i < utts.size(); ++i) {
    LabelSequence seq(vocab.Encode(utts[i].transcript));
    if (seq.MinFrames() > model.config().OutputFrames(utts[i].frames())) {
      ++result.skipped_utterances;
      if (log) log("skipping " + utts[i].id + ": transcript does not fit its frames");
      continue;
    }
    labels.push_back(std::move(seq));
    usable.push_back(utts[i]);
    if (!lfvs.empty()) usable_lfvs.push_back(lfvs[i]);
  }
  if (usable.empty()) throw TrainingError("no trainable utterances");

  // Keep the batches from sort_and_batch but reorder by sorted position so
  // labels and LFVs follow.
  const auto batches = sort_and_batch(usable, config.batch_size);
  auto rng = derived_rng(seed, "am/batch-order");
  std::vector<std::size_t> order(batches.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  NesterovOptimizer opt(model.Parameters(),
                        {config.learning_rate, config.momentum, config.clip_norm});
  double lr = config.learning_rate;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double total = 0.0;
    double norm_sum = 0.0;
    for (std::size_t b : order) {
      const auto& batch = batches[b];
      std::vector<ModelInput> inputs;
      for (std::size_t i : batch) inputs.push_back(input_of(usable[i], usable_lfvs, i));
      opt.BeginStep();
      ModelTrace trace;
      const auto log_probs = model.ForwardBatch(inputs, Mode::kTrain, &trace);
      std::vector<Tensor> grads;
      const double scale = 1.0 / double(batch.size());
      for (std::size_t k = 0; k < batch.size(); ++k) {
        CtcResult r = ctc_loss(log_probs[k], labels[batch[k]]);
        total += r.loss;
        for (double& g : r.grad.values()) g *= scale;
        grads.push_back(std::move(r.grad));
      }
      model.Backward(trace, grads);
      norm_sum += opt.FinishStep();
    }
    const double mean = total / double(usable.size());
    if (!std::isfinite(mean)) throw TrainingError("training loss diverged");
    result.epoch_losses.push_back(mean);
    result.learning_rates.push_back(lr);
    if (log) {
      std::ostringstream os;
      os << "epoch " << epoch + 1 << " loss " << mean << " lr " << lr
         << " grad_norm " << norm_sum / double(batches.size());
      log(os.str());
    }
    if (epoch > 0 && config.halving_threshold >= 0) {
      const double prev = result.epoch_losses[epoch - 1];
      if ((prev - mean) < config.halving_threshold * std::abs(prev)) {
        lr *= 0.5;
        opt.set_learning_rate(lr);
      }
    }
  }
  return result;
}

std::vector<TranscriptRecord> decode_greedy(const AcousticModel& model,
                                            std::span<const Utterance> utts,
                                            const Vocabulary& vocab,
                                            std::span<const Tensor> lfvs) {
  std::vector<TranscriptRecord> out;
  out.reserve(utts.size());
  for (std::size_t i = 0; i < utts.size(); ++i) {
    const Tensor lp = model.Forward(input_of(utts[i], lfvs, i));
    out.push_back({utts[i].id, utts[i].language, vocab.Decode(greedy_decode(lp))});
  }
  return out;
}

std::vector<TranscriptRecord> references_of(std::span<const Utterance> utts) {
  std::vector<TranscriptRecord> out;
  out.reserve(utts.size());
  for (const auto& u : utts) out.push_back({u.id, u.language, u.transcript});
  return out;
}

}  // namespace lfv
