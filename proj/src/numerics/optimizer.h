// numerics/optimizer.h

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

#ifndef LFVCTC_NUMERICS_OPTIMIZER_H_
#define LFVCTC_NUMERICS_OPTIMIZER_H_

#include <span>
#include <string>
#include <vector>

#include "numerics/tensor.h"

namespace lfv {

// A trainable tensor with its gradient accumulator and momentum buffer.
struct Parameter {
  Parameter() = default;
  Parameter(std::string name, Tensor value);

  std::string name;
  Tensor value;
  Tensor grad;
  Tensor velocity;

  void ZeroGrad() { grad.SetZero(); }
};

using ParameterList = std::vector<Parameter*>;

// One Nesterov update in the velocity form:
//   velocity <- mu * velocity - lr * grad
//   value    <- value + velocity
// `grad` must have been evaluated at the lookahead point value + mu * velocity.
// The gradient is zeroed afterwards. Throws TrainingError naming the parameter
// when the gradient is not finite.
void nesterov_step(Parameter& param, double lr, double mu);

double global_grad_norm(std::span<Parameter* const> params);

// Rescales all gradients so their joint L2 norm is at most max_norm. Returns
// the norm before clipping.
double clip_global_norm(std::span<Parameter* const> params, double max_norm);

struct OptimizerOptions {
  double learning_rate = 0.2;
  double momentum = 0.9;
  // Global-norm clip threshold; <= 0 disables clipping.
  double clip_norm = 5.0;
};

// Drives the lookahead contract of nesterov_step:
//   BeginStep()   shifts every value to value + mu * velocity,
//   (caller runs forward/backward and accumulates grads),
//   FinishStep()  shifts back, clips and applies nesterov_step.
class NesterovOptimizer {
 public:
  NesterovOptimizer(ParameterList params, OptimizerOptions options);

  void BeginStep();
  // Returns the pre-clip gradient norm.
  double FinishStep();
  // Abandons a step started with BeginStep (gradients are discarded).
  void CancelStep();

  void set_learning_rate(double lr) { options_.learning_rate = lr; }
  double learning_rate() const { return options_.learning_rate; }
  const ParameterList& params() const { return params_; }

 private:
  void Shift(double sign);

  ParameterList params_;
  OptimizerOptions options_;
  bool in_step_ = false;
};

}  // namespace lfv

#endif  // LFVCTC_NUMERICS_OPTIMIZER_H_
