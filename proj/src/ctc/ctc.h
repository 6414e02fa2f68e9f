// ctc/ctc.h

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

#ifndef LFVCTC_CTC_CTC_H_
#define LFVCTC_CTC_CTC_H_

#include <vector>

#include "numerics/tensor.h"

namespace lfv {

// Blank is output 0 everywhere in the library.
inline constexpr int kBlank = 0;

// A CTC target: token ids without blanks.
class LabelSequence {
 public:
  LabelSequence() = default;
  // Throws UsageError if any token equals kBlank or is negative.
  explicit LabelSequence(std::vector<int> tokens);

  const std::vector<int>& tokens() const { return tokens_; }
  std::size_t size() const { return tokens_.size(); }

  // blank, t1, blank, t2, ..., blank (length 2L + 1).
  std::vector<int> Extended() const;

  // Fewest frames any alignment needs: L plus one separating blank per pair
  // of equal adjacent tokens.
  std::size_t MinFrames() const;

 private:
  std::vector<int> tokens_;
};

struct CtcResult {
  double loss = 0.0;  // -log p(labels | x)
  Tensor grad;        // dLoss / d(log_probs), [T x V]
};

// Forward-backward over the extended label sequence in the log domain.
// `log_probs` rows are log-distributions over V outputs. Throws
// InfeasibleLabelError when labels.MinFrames() > T.
CtcResult ctc_loss(const Tensor& log_probs, const LabelSequence& labels);

// Treats `log_probs` as logits of a row-wise log-softmax, perturbs each logit
// by +-h and +-2h (re-normalizing the row) and compares the five-point
// central difference of the loss with the analytic gradient chained through
// the log-softmax. Returns the max over coordinates of
// |a - n| / max(|a|, |n|, floor).
double ctc_grad_check(const Tensor& log_probs, const LabelSequence& labels,
                      double h = 1e-3, double floor = 1e-7);

// Best path: per-frame argmax (lowest id on ties), collapse repeats, then
// drop blanks.
std::vector<int> greedy_decode(const Tensor& log_probs);

// Collapse rule applied to an explicit frame-level path.
std::vector<int> collapse_path(const std::vector<int>& path);

}  // namespace lfv

#endif  // LFVCTC_CTC_CTC_H_
