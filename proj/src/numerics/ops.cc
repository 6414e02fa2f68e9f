// numerics/ops.cc

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

#include "numerics/ops.h"

#include <algorithm>
#include <cmath>

#include "numerics/errors.h"

namespace lfv {

double log_sum_exp(std::span<const double> values) {
  if (values.empty()) throw UsageError("log_sum_exp of an empty sequence");
  const double max = *std::max_element(values.begin(), values.end());
  if (max == kLogZero) return kLogZero;
  if (std::isinf(max)) return max;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - max);
  return max + std::log(sum);
}

double log_add(double a, double b) {
  if (a == kLogZero) return b;
  if (b == kLogZero) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> out(logits.size());
  if (logits.empty()) return out;
  const double max = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - max);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return out;
}

Tensor log_softmax_rows(const Tensor& logits) {
  Tensor out(logits.shape());
  for (std::size_t r = 0; r < logits.rows(); ++r) {
    const double norm = log_sum_exp(logits.row(r));
    auto src = logits.row(r);
    auto dst = out.row(r);
    for (std::size_t c = 0; c < src.size(); ++c) dst[c] = src[c] - norm;
  }
  return out;
}

Tensor log_softmax_backward(const Tensor& log_probs, const Tensor& grad) {
  RequireShape(grad, log_probs.shape(), "log_softmax_backward");
  Tensor out(log_probs.shape());
  for (std::size_t r = 0; r < log_probs.rows(); ++r) {
    auto lp = log_probs.row(r);
    auto g = grad.row(r);
    auto d = out.row(r);
    double total = 0.0;
    for (double v : g) total += v;
    for (std::size_t c = 0; c < lp.size(); ++c) {
      d[c] = g[c] - std::exp(lp[c]) * total;
    }
  }
  return out;
}

void fill_uniform(Tensor& t, double scale, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  for (double& v : t.values()) v = dist(rng);
}

std::mt19937_64 derived_rng(std::uint64_t seed, std::string_view label) {
  // FNV-1a over the label, mixed with the seed.
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(h),
                    static_cast<std::uint32_t>(h >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace lfv
