// numerics/optimizer.cc

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

#include "numerics/optimizer.h"

#include <cmath>

#include "numerics/errors.h"

namespace lfv {

Parameter::Parameter(std::string name_in, Tensor value_in)
    : name(std::move(name_in)),
      value(std::move(value_in)),
      grad(value.shape()),
      velocity(value.shape()) {}

void nesterov_step(Parameter& param, double lr, double mu) {
  if (!param.grad.AllFinite()) {
    throw TrainingError("non-finite gradient in parameter '" + param.name +
                        "'");
  }
  auto value = param.value.values();
  auto grad = param.grad.values();
  auto velocity = param.velocity.values();
  for (std::size_t i = 0; i < value.size(); ++i) {
    velocity[i] = mu * velocity[i] - lr * grad[i];
    value[i] = value[i] + velocity[i];
  }
  param.ZeroGrad();
}

double global_grad_norm(std::span<Parameter* const> params) {
  double sq = 0.0;
  for (const Parameter* p : params) {
    for (double g : p->grad.values()) sq += g * g;
  }
  return std::sqrt(sq);
}

double clip_global_norm(std::span<Parameter* const> params, double max_norm) {
  const double norm = global_grad_norm(params);
  if (max_norm > 0.0 && norm > max_norm && std::isfinite(norm)) {
    const double scale = max_norm / norm;
    for (Parameter* p : params) {
      for (double& g : p->grad.values()) g *= scale;
    }
  }
  return norm;
}

NesterovOptimizer::NesterovOptimizer(ParameterList params,
                                     OptimizerOptions options)
    : params_(std::move(params)), options_(options) {}

void NesterovOptimizer::Shift(double sign) {
  const double mu = options_.momentum;
  for (Parameter* p : params_) {
    auto value = p->value.values();
    auto velocity = p->velocity.values();
    for (std::size_t i = 0; i < value.size(); ++i) {
      value[i] += sign * mu * velocity[i];
    }
  }
}

void NesterovOptimizer::BeginStep() {
  if (in_step_) throw UsageError("BeginStep called twice");
  in_step_ = true;
  if (options_.momentum != 0.0) Shift(+1.0);
}

double NesterovOptimizer::FinishStep() {
  if (!in_step_) throw UsageError("FinishStep without BeginStep");
  in_step_ = false;
  if (options_.momentum != 0.0) Shift(-1.0);
  const double norm = clip_global_norm(params_, options_.clip_norm);
  for (Parameter* p : params_) {
    nesterov_step(*p, options_.learning_rate, options_.momentum);
  }
  return norm;
}

void NesterovOptimizer::CancelStep() {
  if (!in_step_) return;
  in_step_ = false;
  if (options_.momentum != 0.0) Shift(-1.0);
  for (Parameter* p : params_) p->ZeroGrad();
}

}  // namespace lfv
