// numerics/ops.h

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

#ifndef LFVCTC_NUMERICS_OPS_H_
#define LFVCTC_NUMERICS_OPS_H_

#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "numerics/tensor.h"

namespace lfv {

// Log-domain zero.
inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

// log(sum(exp(values))) with max subtraction. Exact for inputs that contain
// kLogZero; an all-kLogZero input returns kLogZero. Throws UsageError on an
// empty input.
double log_sum_exp(std::span<const double> values);

// Two-argument form used inside the dynamic-programming recursions.
double log_add(double a, double b);

std::vector<double> softmax(std::span<const double> logits);

// Row-wise log-softmax of a rank-2 tensor.
Tensor log_softmax_rows(const Tensor& logits);

// Gradient of a loss through a row-wise log-softmax: given dL/d(log_probs)
// and the log_probs themselves, returns dL/d(logits).
Tensor log_softmax_backward(const Tensor& log_probs, const Tensor& grad);

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Fills `t` with uniform values in [-scale, scale].
void fill_uniform(Tensor& t, double scale, std::mt19937_64& rng);

// Deterministic stream derived from a run seed and a stable label, so that
// each parameter gets its own draw independent of declaration order.
std::mt19937_64 derived_rng(std::uint64_t seed, std::string_view label);

}  // namespace lfv

#endif  // LFVCTC_NUMERICS_OPS_H_
