// decode/fused_decode.h

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

#ifndef LFVCTC_DECODE_FUSED_DECODE_H_
#define LFVCTC_DECODE_FUSED_DECODE_H_

#include <string>
#include <vector>

#include "decode/char_lm.h"
#include "numerics/tensor.h"

namespace lfv {

struct FusionOptions {
  double lambda = 0.3;
  std::size_t beam = 8;
  // LM log-probability for acoustic tokens the LM has never seen.
  double unknown_log_prob = -20.0;
};

// Maps acoustic-model token ids to LM ids (-1 where the LM lacks the symbol).
// Index 0 (blank) is always -1.
std::vector<int> map_tokens_to_lm(const std::vector<std::string>& am_symbols,
                                  const CharRnnLm& lm);

// Prefix beam search over CTC outputs with shallow fusion. Prefix scores take
// the best single path (max, not sum) so that beam 1 with lambda 0 reproduces
// greedy decoding. Hypotheses rank by path score + lambda * LM log-prob; ties
// go to the lexicographically smaller prefix. `lm` may be null when lambda is
// 0. Returns collapsed token ids without blanks.
std::vector<int> fused_decode(const Tensor& log_probs, const CharRnnLm* lm,
                              const std::vector<int>& am_to_lm,
                              const FusionOptions& options);

}  // namespace lfv

#endif  // LFVCTC_DECODE_FUSED_DECODE_H_
