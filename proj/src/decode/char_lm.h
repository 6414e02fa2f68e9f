// decode/char_lm.h

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

#ifndef LFVCTC_DECODE_CHAR_LM_H_
#define LFVCTC_DECODE_CHAR_LM_H_

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "layers/affine.h"
#include "layers/lstm.h"
#include "numerics/optimizer.h"
#include "numerics/tensor.h"

namespace lfv {

// Sentence start; also predicted after the last token as end of sentence.
inline constexpr char kSentenceStart[] = "<s>";

struct CharLmConfig {
  std::size_t embedding_dim = 16;
  std::size_t hidden = 128;
  std::size_t epochs = 10;
  std::size_t batch_size = 15;
  OptimizerOptions optimizer{0.5, 0.9, 5.0};
};

// Grapheme-level language model: embedding -> one LSTM layer -> softmax.
class CharRnnLm {
 public:
  // Recurrent state after consuming a prefix, with the distribution of the
  // next token.
  struct State {
    std::vector<double> h, c;
    std::vector<double> next_log_probs;
  };

  CharRnnLm() = default;
  // `symbols` excludes the sentence-start token, which takes id 0.
  CharRnnLm(const std::vector<std::string>& symbols, const CharLmConfig& config,
            std::uint64_t seed);

  const CharLmConfig& config() const { return config_; }
  std::size_t vocab_size() const { return symbols_.size(); }
  const std::vector<std::string>& symbols() const { return symbols_; }
  // -1 for unknown symbols.
  int token_id(const std::string& symbol) const;

  State Initial() const;
  State Advance(const State& state, int token) const;

  // Sum of log p over the tokens of `sentence` (ids, no <s>), excluding the
  // end-of-sentence prediction.
  double PrefixLogProb(const std::vector<int>& sentence) const;

  // Summed next-token cross-entropy of <s> sentence <s>; with `grad_scale`
  // nonzero, adds grad_scale * d(loss) to the parameters.
  double SequenceLoss(const std::vector<int>& sentence, double grad_scale = 0.0);

  ParameterList Parameters();

  void Save(const std::string& path) const;
  static CharRnnLm Load(const std::string& path);

 private:
  CharLmConfig config_;
  std::vector<std::string> symbols_;
  std::map<std::string, int> ids_;
  Parameter embedding_;  // [V x E]
  LstmDirection lstm_;
  AffineLayer output_;
};

struct LmTrainingResult {
  CharRnnLm lm;
  std::vector<double> epoch_perplexities;
};

// Trains on token sequences (word boundaries included). Throws UsageError on
// an empty corpus.
LmTrainingResult train_lm(std::span<const std::vector<std::string>> transcripts,
                          const CharLmConfig& config, std::uint64_t seed,
                          const std::function<void(const std::string&)>& log = {});

}  // namespace lfv

#endif  // LFVCTC_DECODE_CHAR_LM_H_
