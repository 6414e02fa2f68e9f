// numerics/batch_norm.cc

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

#include "numerics/batch_norm.h"

#include <cmath>

#include "numerics/errors.h"

namespace lfv {

BatchNormState::BatchNormState(const std::string& name, std::size_t channels)
    : gamma(name + ".gamma", Tensor::Vector(channels, 1.0)),
      beta(name + ".beta", Tensor::Vector(channels, 0.0)),
      running_mean(Tensor::Vector(channels, 0.0)),
      running_var(Tensor::Vector(channels, 1.0)) {}

namespace {

void CheckInput(const Tensor& x, const BatchNormState& state) {
  if (x.rank() != 2 || x.cols() != state.channels()) {
    throw ShapeError("batch_norm: input " + ShapeString(x.shape()) +
                     " does not match " + std::to_string(state.channels()) +
                     " channels");
  }
}

}  // namespace

Tensor batch_norm_inference(const Tensor& x, const BatchNormState& state) {
  CheckInput(x, state);
  const std::size_t n = x.rows(), c = x.cols();
  Tensor out(x.shape());
  for (std::size_t j = 0; j < c; ++j) {
    const double inv = 1.0 / std::sqrt(state.running_var[j] + state.epsilon);
    for (std::size_t i = 0; i < n; ++i) {
      out(i, j) = state.gamma.value[j] * (x(i, j) - state.running_mean[j]) * inv +
                  state.beta.value[j];
    }
  }
  return out;
}

Tensor batch_norm_forward(const Tensor& x, BatchNormState& state, Mode mode,
                          BatchNormCache* cache) {
  CheckInput(x, state);
  const std::size_t n = x.rows(), c = x.cols();
  if (mode == Mode::kEval) {
    if (cache) {
      cache->mode = Mode::kEval;
      cache->inv_std.assign(c, 0.0);
      cache->normalized = Tensor(x.shape());
      for (std::size_t j = 0; j < c; ++j) {
        cache->inv_std[j] = 1.0 / std::sqrt(state.running_var[j] + state.epsilon);
        for (std::size_t i = 0; i < n; ++i) {
          cache->normalized(i, j) =
              (x(i, j) - state.running_mean[j]) * cache->inv_std[j];
        }
      }
    }
    return batch_norm_inference(x, state);
  }
  if (n < 2) {
    throw UsageError("batch_norm: train mode needs at least 2 rows, got " +
                     std::to_string(n));
  }
  Tensor normalized(x.shape());
  Tensor out(x.shape());
  std::vector<double> inv_std(c);
  for (std::size_t j = 0; j < c; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += x(i, j);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = x(i, j) - mean;
      var += d * d;
    }
    var /= static_cast<double>(n);
    inv_std[j] = 1.0 / std::sqrt(var + state.epsilon);
    for (std::size_t i = 0; i < n; ++i) {
      normalized(i, j) = (x(i, j) - mean) * inv_std[j];
      out(i, j) = state.gamma.value[j] * normalized(i, j) + state.beta.value[j];
    }
    const double unbiased = var * static_cast<double>(n) / static_cast<double>(n - 1);
    state.running_mean[j] =
        (1.0 - state.momentum) * state.running_mean[j] + state.momentum * mean;
    state.running_var[j] =
        (1.0 - state.momentum) * state.running_var[j] + state.momentum * unbiased;
  }
  if (cache) {
    cache->mode = Mode::kTrain;
    cache->normalized = std::move(normalized);
    cache->inv_std = std::move(inv_std);
  }
  return out;
}

Tensor batch_norm_backward(const BatchNormCache& cache, const Tensor& grad_out,
                           BatchNormState& state) {
  RequireShape(grad_out, cache.normalized.shape(), "batch_norm_backward");
  const std::size_t n = grad_out.rows(), c = grad_out.cols();
  Tensor dx(grad_out.shape());
  for (std::size_t j = 0; j < c; ++j) {
    double sum_dy = 0.0, sum_dy_xhat = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sum_dy += grad_out(i, j);
      sum_dy_xhat += grad_out(i, j) * cache.normalized(i, j);
    }
    state.gamma.grad[j] += sum_dy_xhat;
    state.beta.grad[j] += sum_dy;
    const double g = state.gamma.value[j] * cache.inv_std[j];
    if (cache.mode == Mode::kEval) {
      for (std::size_t i = 0; i < n; ++i) dx(i, j) = g * grad_out(i, j);
      continue;
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      dx(i, j) = g * (grad_out(i, j) - inv_n * sum_dy -
                      cache.normalized(i, j) * inv_n * sum_dy_xhat);
    }
  }
  return dx;
}

}  // namespace lfv
