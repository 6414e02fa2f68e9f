// tests/unit/ctc_test.cc

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

#include <cmath>
#include <random>
#include <vector>

#include "ctc/ctc.h"
#include "doctest.h"
#include "numerics/errors.h"
#include "tests/support/oracles.h"

namespace lfv {
namespace {

using testing::RandomLogProbs;

Tensor LogOf(std::size_t T, std::size_t V, std::vector<double> probs) {
  Tensor t({T, V}, std::move(probs));
  for (double& v : t.values()) v = std::log(v);
  return t;
}

TEST_CASE("label sequence structure") {
  const LabelSequence l({1, 2, 2});
  CHECK(l.Extended() == std::vector<int>{0, 1, 0, 2, 0, 2, 0});
  CHECK(l.MinFrames() == 4);
  CHECK(LabelSequence().MinFrames() == 0);
  CHECK_THROWS_AS(LabelSequence({1, 0}), UsageError);
}

TEST_CASE("single frame single label") {
  const CtcResult r = ctc_loss(LogOf(1, 2, {0.5, 0.5}), LabelSequence({1}));
  CHECK(r.loss == doctest::Approx(std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("two frames single label against the closed form") {
  const Tensor lp = LogOf(2, 2, {0.3, 0.7, 0.6, 0.4});
  const double p = 0.7 * 0.4 + 0.3 * 0.4 + 0.7 * 0.6;
  CHECK(std::abs(ctc_loss(lp, LabelSequence({1})).loss + std::log(p)) <= 1e-12);
  CHECK(std::abs(ctc_loss(lp, LabelSequence({1})).loss -
                 testing::BruteForceCtcLoss(lp, {1})) <= 1e-12);
}

TEST_CASE("infeasible labels raise a typed error") {
  std::mt19937_64 rng(1);
  CHECK_THROWS_AS(ctc_loss(RandomLogProbs(1, 2, rng), LabelSequence({1, 1})),
                  InfeasibleLabelError);
  CHECK_THROWS_AS(ctc_grad_check(RandomLogProbs(2, 3, rng), LabelSequence({1, 1})),
                  InfeasibleLabelError);
  CHECK_NOTHROW(ctc_loss(RandomLogProbs(3, 2, rng), LabelSequence({1, 1})));
}

TEST_CASE("empty label is the all-blank path") {
  const Tensor lp = LogOf(2, 2, {0.25, 0.75, 0.5, 0.5});
  CHECK(ctc_loss(lp, LabelSequence()).loss == doctest::Approx(-std::log(0.125)));
}

TEST_CASE("random instances agree with brute force") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t T = 1 + trial % 5, V = 2 + trial % 3;
    const Tensor lp = RandomLogProbs(T, V, rng);
    std::vector<int> labels;
    std::uniform_int_distribution<int> tok(1, static_cast<int>(V) - 1);
    for (std::size_t i = 0; i < trial % 3 + 1u; ++i) labels.push_back(tok(rng));
    const LabelSequence seq(labels);
    if (seq.MinFrames() > T) continue;
    const double loss = ctc_loss(lp, seq).loss;
    CHECK(loss >= 0.0);
    CHECK(std::abs(loss - testing::BruteForceCtcLoss(lp, labels)) <= 1e-10);
  }
}

TEST_CASE("gradient check on random feasible instances") {
  std::mt19937_64 rng(3);
  int checked = 0;
  for (int trial = 0; checked < 100; ++trial) {
    const std::size_t T = 2 + trial % 8, V = 2 + trial % 5;
    std::vector<int> labels;
    std::uniform_int_distribution<int> tok(1, static_cast<int>(V) - 1);
    for (std::size_t i = 0; i < 1 + trial % 4u; ++i) labels.push_back(tok(rng));
    const LabelSequence seq(labels);
    if (seq.MinFrames() > T) continue;
    ++checked;
    CHECK(ctc_grad_check(RandomLogProbs(T, V, rng), seq) < 1e-6);
  }
}

TEST_CASE("uniform posteriors give time-symmetric gradients") {
  const std::size_t T = 4;
  const Tensor lp({T, 3}, std::log(1.0 / 3.0));
  const CtcResult r = ctc_loss(lp, LabelSequence({2}));
  for (std::size_t v = 0; v < 3; ++v) {
    CHECK(r.grad(0, v) == doctest::Approx(r.grad(T - 1, v)).epsilon(1e-12));
    CHECK(r.grad(1, v) == doctest::Approx(r.grad(T - 2, v)).epsilon(1e-12));
  }
}

TEST_CASE("feasibility is monotone in T") {
  const LabelSequence seq({1, 1, 2, 2});
  bool feasible = false;
  std::mt19937_64 rng(4);
  for (std::size_t T = 1; T <= 8; ++T) {
    bool ok = true;
    try {
      ctc_loss(RandomLogProbs(T, 3, rng), seq);
    } catch (const InfeasibleLabelError&) {
      ok = false;
    }
    if (feasible) CHECK(ok);
    feasible = feasible || ok;
  }
  CHECK(feasible);
}

Tensor OneHotPath(const std::vector<int>& path, std::size_t V) {
  Tensor lp({path.size(), V}, std::log(1e-3));
  for (std::size_t t = 0; t < path.size(); ++t) {
    lp(t, static_cast<std::size_t>(path[t])) = std::log(1.0 - 1e-3 * double(V - 1));
  }
  return lp;
}

TEST_CASE("greedy decode examples") {
  CHECK(greedy_decode(OneHotPath({1, 1, 0, 2}, 3)) == std::vector<int>{1, 2});
  CHECK(greedy_decode(OneHotPath({0, 0, 0}, 3)).empty());
  CHECK(greedy_decode(OneHotPath({1, 0, 1}, 3)) == std::vector<int>{1, 1});
  CHECK(collapse_path({2, 2, 0, 0, 2, 1, 1}) == std::vector<int>{2, 2, 1});
}

TEST_CASE("greedy ties break toward the lowest id") {
  const Tensor lp({2, 3}, std::log(1.0 / 3.0));
  CHECK(greedy_decode(lp).empty());
}

TEST_CASE("greedy decode is idempotent on re-encoded output") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto tokens = greedy_decode(RandomLogProbs(9, 4, rng));
    std::vector<int> path;
    for (int t : tokens) {
      path.push_back(t);
      path.push_back(0);
    }
    if (path.empty()) path.push_back(0);
    CHECK(greedy_decode(OneHotPath(path, 4)) == tokens);
  }
}

}  // namespace
}  // namespace lfv
