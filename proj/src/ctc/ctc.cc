// ctc/ctc.cc

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

#include "ctc/ctc.h"

#include <algorithm>
#include <cmath>

#include "numerics/errors.h"
#include "numerics/ops.h"

namespace lfv {

LabelSequence::LabelSequence(std::vector<int> tokens) : tokens_(std::move(tokens)) {
  for (int t : tokens_) {
    if (t == kBlank || t < 0) {
      throw UsageError("label sequence contains blank or negative id " +
                       std::to_string(t));
    }
  }
}

std::vector<int> LabelSequence::Extended() const {
  std::vector<int> ext(2 * tokens_.size() + 1, kBlank);
  for (std::size_t i = 0; i < tokens_.size(); ++i) ext[2 * i + 1] = tokens_[i];
  return ext;
}

std::size_t LabelSequence::MinFrames() const {
  std::size_t n = tokens_.size();
  for (std::size_t i = 1; i < tokens_.size(); ++i) {
    if (tokens_[i] == tokens_[i - 1]) ++n;
  }
  return n;
}

CtcResult ctc_loss(const Tensor& log_probs, const LabelSequence& labels) {
  if (log_probs.rank() != 2) throw ShapeError("ctc_loss: log_probs must be [T x V]");
  const std::size_t T = log_probs.rows(), V = log_probs.cols();
  if (labels.MinFrames() > T) {
    throw InfeasibleLabelError("ctc: label of length " +
                               std::to_string(labels.size()) + " needs at least " +
                               std::to_string(labels.MinFrames()) +
                               " frames, have " + std::to_string(T));
  }
  for (int tok : labels.tokens()) {
    if (static_cast<std::size_t>(tok) >= V) {
      throw ShapeError("ctc: token id " + std::to_string(tok) +
                       " outside vocabulary of " + std::to_string(V));
    }
  }
  const std::vector<int> ext = labels.Extended();
  const std::size_t S = ext.size();

  auto can_skip = [&](std::size_t s) {
    return s >= 2 && ext[s] != kBlank && ext[s] != ext[s - 2];
  };

  // alpha(t, s) includes the emission at t; beta(t, s) excludes it.
  Tensor alpha = Tensor::Matrix(T, S, kLogZero);
  Tensor beta = Tensor::Matrix(T, S, kLogZero);
  alpha(0, 0) = log_probs(0, ext[0]);
  if (S > 1) alpha(0, 1) = log_probs(0, ext[1]);
  for (std::size_t t = 1; t < T; ++t) {
    for (std::size_t s = 0; s < S; ++s) {
      double a = alpha(t - 1, s);
      if (s >= 1) a = log_add(a, alpha(t - 1, s - 1));
      if (can_skip(s)) a = log_add(a, alpha(t - 1, s - 2));
      if (a != kLogZero) alpha(t, s) = a + log_probs(t, ext[s]);
    }
  }
  beta(T - 1, S - 1) = 0.0;
  if (S > 1) beta(T - 1, S - 2) = 0.0;
  for (std::size_t t = T - 1; t-- > 0;) {
    for (std::size_t s = 0; s < S; ++s) {
      double b = beta(t + 1, s) + log_probs(t + 1, ext[s]);
      if (s + 1 < S) b = log_add(b, beta(t + 1, s + 1) + log_probs(t + 1, ext[s + 1]));
      if (s + 2 < S && can_skip(s + 2)) {
        b = log_add(b, beta(t + 1, s + 2) + log_probs(t + 1, ext[s + 2]));
      }
      beta(t, s) = b;
    }
  }
  double log_p = alpha(T - 1, S - 1);
  if (S > 1) log_p = log_add(log_p, alpha(T - 1, S - 2));
  if (!std::isfinite(log_p)) {
    throw InfeasibleLabelError("ctc: label has zero probability under the model");
  }

  CtcResult result;
  result.loss = -log_p;
  result.grad = Tensor::Matrix(T, V);
  std::vector<double> acc(V);
  for (std::size_t t = 0; t < T; ++t) {
    std::fill(acc.begin(), acc.end(), kLogZero);
    for (std::size_t s = 0; s < S; ++s) {
      acc[ext[s]] = log_add(acc[ext[s]], alpha(t, s) + beta(t, s));
    }
    for (std::size_t k = 0; k < V; ++k) {
      result.grad(t, k) = acc[k] == kLogZero ? 0.0 : -std::exp(acc[k] - log_p);
    }
  }
  return result;
}

double ctc_grad_check(const Tensor& log_probs, const LabelSequence& labels,
                      double h, double floor) {
  const CtcResult base = ctc_loss(log_probs, labels);
  const Tensor analytic = log_softmax_backward(log_probs, base.grad);
  double worst = 0.0;
  Tensor z = log_probs;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double orig = z[i];
    const auto at = [&](double offset) {
      z[i] = orig + offset;
      return ctc_loss(log_softmax_rows(z), labels).loss;
    };
    const double numeric =
        (8.0 * (at(h) - at(-h)) - (at(2.0 * h) - at(-2.0 * h))) / (12.0 * h);
    z[i] = orig;
    const double a = analytic[i];
    const double denom = std::max({std::abs(a), std::abs(numeric), floor});
    worst = std::max(worst, std::abs(a - numeric) / denom);
  }
  return worst;
}

std::vector<int> collapse_path(const std::vector<int>& path) {
  std::vector<int> out;
  int prev = -1;
  for (int k : path) {
    if (k != prev && k != kBlank) out.push_back(k);
    prev = k;
  }
  return out;
}

std::vector<int> greedy_decode(const Tensor& log_probs) {
  std::vector<int> path(log_probs.rows());
  for (std::size_t t = 0; t < log_probs.rows(); ++t) {
    auto row = log_probs.row(t);
    // max_element returns the first maximum, i.e. the lowest id.
    path[t] = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  return collapse_path(path);
}

}  // namespace lfv
