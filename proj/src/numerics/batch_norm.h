// numerics/batch_norm.h

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

#ifndef LFVCTC_NUMERICS_BATCH_NORM_H_
#define LFVCTC_NUMERICS_BATCH_NORM_H_

#include <cstddef>
#include <vector>

#include "numerics/optimizer.h"
#include "numerics/tensor.h"

namespace lfv {

enum class Mode { kTrain, kEval };

struct BatchNormState {
  BatchNormState() = default;
  BatchNormState(const std::string& name, std::size_t channels);

  Parameter gamma;
  Parameter beta;
  Tensor running_mean;
  Tensor running_var;
  double epsilon = 1e-5;
  double momentum = 0.1;

  std::size_t channels() const { return running_mean.size(); }
};

struct BatchNormCache {
  Mode mode = Mode::kEval;
  Tensor normalized;  // x_hat, before gamma/beta
  std::vector<double> inv_std;
};

// x is [N x C]. In train mode normalizes with batch statistics (biased
// variance) and folds them into the running averages (unbiased variance);
// requires N >= 2. In eval mode uses the running statistics and leaves the
// state untouched.
Tensor batch_norm_forward(const Tensor& x, BatchNormState& state, Mode mode,
                          BatchNormCache* cache = nullptr);

// Eval-mode forward on a const state.
Tensor batch_norm_inference(const Tensor& x, const BatchNormState& state);

// Accumulates gamma/beta gradients and returns dL/dx.
Tensor batch_norm_backward(const BatchNormCache& cache, const Tensor& grad_out,
                           BatchNormState& state);

}  // namespace lfv

#endif  // LFVCTC_NUMERICS_BATCH_NORM_H_
