// tests/support/oracles.h

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

// Independent reference implementations used by the unit and acceptance
// tests. None of these share code with the library paths they check.

#ifndef LFVCTC_TESTS_SUPPORT_ORACLES_H_
#define LFVCTC_TESTS_SUPPORT_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "decode/char_lm.h"
#include "numerics/optimizer.h"
#include "numerics/tensor.h"

namespace lfv::testing {

// Collapses repeats then drops blanks (id 0).
inline std::vector<int> CollapseOracle(const std::vector<int>& path) {
  std::vector<int> out;
  int prev = -1;
  for (int s : path) {
    if (s != prev && s != 0) out.push_back(s);
    prev = s;
  }
  return out;
}

// -log of the summed probability of every length-T path over V symbols whose
// collapse equals `labels`. Returns +inf when no path collapses to `labels`.
inline double BruteForceCtcLoss(const Tensor& log_probs, const std::vector<int>& labels) {
  const std::size_t T = log_probs.rows(), V = log_probs.cols();
  std::vector<int> path(T, 0);
  double total = 0.0;
  bool any = false;
  while (true) {
    if (CollapseOracle(path) == labels) {
      double lp = 0.0;
      for (std::size_t t = 0; t < T; ++t) lp += log_probs(t, static_cast<std::size_t>(path[t]));
      total += std::exp(lp);
      any = true;
    }
    std::size_t t = 0;
    while (t < T && ++path[t] == static_cast<int>(V)) path[t++] = 0;
    if (t == T) break;
  }
  return any ? -std::log(total) : std::numeric_limits<double>::infinity();
}

// Best collapsed prefix over all V^T frame paths under
// path log-prob + lambda * LM log-prob of the collapsed tokens. Ties go to
// the lexicographically smaller prefix. `lm` may be null.
inline std::vector<int> ExhaustiveFusedBest(const Tensor& log_probs, const CharRnnLm* lm,
                                            const std::vector<int>& am_to_lm, double lambda,
                                            double unknown_log_prob) {
  const std::size_t T = log_probs.rows(), V = log_probs.cols();
  std::vector<int> path(T, 0), best;
  double best_score = -std::numeric_limits<double>::infinity();
  bool have = false;
  while (true) {
    double score = 0.0;
    for (std::size_t t = 0; t < T; ++t) score += log_probs(t, static_cast<std::size_t>(path[t]));
    const std::vector<int> prefix = CollapseOracle(path);
    if (lm != nullptr && lambda != 0.0) {
      CharRnnLm::State state = lm->Initial();
      for (int token : prefix) {
        const int id = am_to_lm[static_cast<std::size_t>(token)];
        score += lambda * (id < 0 ? unknown_log_prob
                                  : state.next_log_probs[static_cast<std::size_t>(id)]);
        state = lm->Advance(state, id < 0 ? 0 : id);
      }
    }
    if (!have || score > best_score || (score == best_score && prefix < best)) {
      best = prefix;
      best_score = score;
      have = true;
    }
    std::size_t t = 0;
    while (t < T && ++path[t] == static_cast<int>(V)) path[t++] = 0;
    if (t == T) break;
  }
  return best;
}

// Wagner-Fischer distance with unit costs.
template <typename Seq>
std::size_t DpEditDistance(const Seq& a, const Seq& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

// Row-normalized random log-probabilities.
inline Tensor RandomLogProbs(std::size_t T, std::size_t V, std::mt19937_64& rng,
                             double spread = 2.0) {
  std::normal_distribution<double> normal(0.0, spread);
  Tensor lp = Tensor::Matrix(T, V);
  for (std::size_t t = 0; t < T; ++t) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t v = 0; v < V; ++v) {
      lp(t, v) = normal(rng);
      m = std::max(m, lp(t, v));
    }
    double z = 0.0;
    for (std::size_t v = 0; v < V; ++v) z += std::exp(lp(t, v) - m);
    const double log_z = m + std::log(z);
    for (std::size_t v = 0; v < V; ++v) lp(t, v) -= log_z;
  }
  return lp;
}

inline Tensor RandomTensor(std::vector<std::size_t> shape, std::mt19937_64& rng,
                           double scale = 1.0) {
  Tensor t(std::move(shape));
  std::uniform_real_distribution<double> u(-scale, scale);
  for (double& v : t.values()) v = u(rng);
  return t;
}

inline double Dot(const Tensor& a, const Tensor& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Central-difference gradient check. A coordinate passes when
// |analytic - numeric| <= max(rel_tol * max(|analytic|, |numeric|), floor).
struct GradCheckResult {
  std::size_t checked = 0;
  std::size_t failures = 0;
  double worst_excess = 0.0;  // largest |diff| / allowed
  std::string worst;
  bool ok() const { return failures == 0 && checked > 0; }
};

struct GradCheckOptions {
  double step = 1e-5;
  double rel_tol = 1e-4;
  double floor = 1e-7;
  std::size_t max_coords = 0;  // 0 checks every coordinate
};

inline void CheckCoordinates(const std::string& name, double* values,
                             const double* analytic, std::size_t n,
                             const std::function<double()>& loss,
                             const GradCheckOptions& options, GradCheckResult& result) {
  std::size_t stride = 1;
  if (options.max_coords > 0 && n > options.max_coords) {
    stride = (n + options.max_coords - 1) / options.max_coords;
  }
  for (std::size_t i = 0; i < n; i += stride) {
    const double saved = values[i];
    values[i] = saved + options.step;
    const double up = loss();
    values[i] = saved - options.step;
    const double down = loss();
    values[i] = saved;
    const double numeric = (up - down) / (2.0 * options.step);
    const double diff = std::abs(numeric - analytic[i]);
    const double allowed = std::max(
        options.rel_tol * std::max(std::abs(numeric), std::abs(analytic[i])), options.floor);
    ++result.checked;
    if (diff > allowed) ++result.failures;
    if (diff / allowed > result.worst_excess) {
      result.worst_excess = diff / allowed;
      result.worst = name + "[" + std::to_string(i) + "] analytic " +
                     std::to_string(analytic[i]) + " numeric " + std::to_string(numeric);
    }
  }
}

// Checks every parameter's accumulated grad against `loss`, which must
// recompute the loss from the current parameter values without side effects.
inline GradCheckResult CheckParameters(const ParameterList& params,
                                       const std::function<double()>& loss,
                                       const GradCheckOptions& options = {}) {
  GradCheckResult result;
  for (Parameter* p : params) {
    const Tensor analytic = p->grad;
    CheckCoordinates(p->name, p->value.raw(), analytic.raw(), p->value.size(), loss, options,
                     result);
  }
  return result;
}

inline GradCheckResult CheckTensor(const std::string& name, Tensor& values,
                                   const Tensor& analytic, const std::function<double()>& loss,
                                   const GradCheckOptions& options = {}) {
  GradCheckResult result;
  CheckCoordinates(name, values.raw(), analytic.raw(), values.size(), loss, options, result);
  return result;
}

inline void Merge(GradCheckResult& into, const GradCheckResult& other) {
  into.checked += other.checked;
  into.failures += other.failures;
  if (other.worst_excess > into.worst_excess) {
    into.worst_excess = other.worst_excess;
    into.worst = other.worst;
  }
}

}  // namespace lfv::testing

#endif  // LFVCTC_TESTS_SUPPORT_ORACLES_H_
