// decode/fused_decode.cc

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

#include "decode/fused_decode.h"

#include <algorithm>
#include <map>
#include <memory>

#include "ctc/ctc.h"
#include "numerics/errors.h"
#include "numerics/ops.h"

namespace lfv {

std::vector<int> map_tokens_to_lm(const std::vector<std::string>& am_symbols,
                                  const CharRnnLm& lm) {
  std::vector<int> out(am_symbols.size(), -1);
  for (std::size_t i = 1; i < am_symbols.size(); ++i) out[i] = lm.token_id(am_symbols[i]);
  return out;
}

namespace {

struct Hypothesis {
  double blank = kLogZero;      // best path ending in blank
  double non_blank = kLogZero;  // best path ending in the last token
  double lm_score = 0.0;
  std::shared_ptr<const CharRnnLm::State> lm_state;
  std::shared_ptr<const CharRnnLm::State> parent_state;

  double acoustic() const { return std::max(blank, non_blank); }
};

double lm_token_score(const CharRnnLm::State& state, int am_token,
                      const std::vector<int>& am_to_lm, double unknown) {
  const int id = static_cast<std::size_t>(am_token) < am_to_lm.size()
                     ? am_to_lm[static_cast<std::size_t>(am_token)]
                     : -1;
  return id < 0 ? unknown : state.next_log_probs[static_cast<std::size_t>(id)];
}

}  // namespace

std::vector<int> fused_decode(const Tensor& log_probs, const CharRnnLm* lm,
                              const std::vector<int>& am_to_lm,
                              const FusionOptions& options) {
  if (log_probs.rank() != 2) throw ShapeError("fused_decode expects [T x V] log-probs");
  if (options.beam == 0) throw UsageError("beam width must be at least 1");
  const bool use_lm = lm != nullptr && options.lambda != 0.0;
  const std::size_t T = log_probs.rows();
  const std::size_t V = log_probs.cols();
  const double lambda = use_lm ? options.lambda : 0.0;

  using Beam = std::map<std::vector<int>, Hypothesis>;
  Beam beam;
  Hypothesis root;
  root.blank = 0.0;
  if (use_lm) root.lm_state = std::make_shared<CharRnnLm::State>(lm->Initial());
  beam.emplace(std::vector<int>{}, root);

  for (std::size_t t = 0; t < T; ++t) {
    Beam next;
    auto slot = [&](const std::vector<int>& prefix, const Hypothesis& from,
                    bool extends) -> Hypothesis& {
      auto [it, inserted] = next.try_emplace(prefix);
      if (inserted) {
        if (extends) {
          it->second.lm_score = from.lm_score;
          if (use_lm) {
            it->second.lm_score += lambda * lm_token_score(*from.lm_state, prefix.back(),
                                                           am_to_lm, options.unknown_log_prob);
            it->second.parent_state = from.lm_state;
          }
        } else {
          it->second.lm_score = from.lm_score;
          it->second.lm_state = from.lm_state;
        }
      }
      return it->second;
    };
    for (const auto& [prefix, hyp] : beam) {
      const double blank_score = hyp.acoustic() + log_probs(t, kBlank);
      Hypothesis& same = slot(prefix, hyp, false);
      same.blank = std::max(same.blank, blank_score);
      for (std::size_t c = 1; c < V; ++c) {
        const double y = log_probs(t, c);
        const int token = static_cast<int>(c);
        if (!prefix.empty() && prefix.back() == token) {
          Hypothesis& stay = slot(prefix, hyp, false);
          stay.non_blank = std::max(stay.non_blank, hyp.non_blank + y);
          if (hyp.blank != kLogZero) {
            std::vector<int> ext = prefix;
            ext.push_back(token);
            Hypothesis& grow = slot(ext, hyp, true);
            grow.non_blank = std::max(grow.non_blank, hyp.blank + y);
          }
        } else {
          std::vector<int> ext = prefix;
          ext.push_back(token);
          Hypothesis& grow = slot(ext, hyp, true);
          grow.non_blank = std::max(grow.non_blank, hyp.acoustic() + y);
        }
      }
    }

    std::vector<std::pair<const std::vector<int>*, double>> ranked;
    ranked.reserve(next.size());
    for (const auto& [prefix, hyp] : next) {
      ranked.emplace_back(&prefix, hyp.acoustic() + hyp.lm_score);
    }
    const std::size_t keep = std::min(options.beam, ranked.size());
    // Map order makes the comparison total: equal scores keep the smaller prefix.
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep),
                      ranked.end(), [](const auto& a, const auto& b) {
                        if (a.second != b.second) return a.second > b.second;
                        return *a.first < *b.first;
                      });
    Beam pruned;
    for (std::size_t i = 0; i < keep; ++i) {
      auto node = next.extract(*ranked[i].first);
      Hypothesis& h = node.mapped();
      if (use_lm && !h.lm_state) {
        h.lm_state = std::make_shared<CharRnnLm::State>(
            lm->Advance(*h.parent_state, am_to_lm[static_cast<std::size_t>(node.key().back())] < 0
                                             ? 0
                                             : am_to_lm[static_cast<std::size_t>(node.key().back())]));
      }
      h.parent_state.reset();
      pruned.insert(std::move(node));
    }
    beam = std::move(pruned);
  }

  const std::vector<int>* best = nullptr;
  double best_score = kLogZero;
  for (const auto& [prefix, hyp] : beam) {
    const double score = hyp.acoustic() + hyp.lm_score;
    if (best == nullptr || score > best_score) {
      best = &prefix;
      best_score = score;
    }
  }
  return best == nullptr ? std::vector<int>{} : *best;
}

}  // namespace lfv
