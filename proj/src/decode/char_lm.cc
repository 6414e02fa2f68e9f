// decode/char_lm.cc

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

#include "decode/char_lm.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "numerics/binary_io.h"
#include "numerics/eigen_view.h"
#include "numerics/errors.h"
#include "numerics/ops.h"

namespace lfv {

CharRnnLm::CharRnnLm(const std::vector<std::string>& symbols,
                     const CharLmConfig& config, std::uint64_t seed)
    : config_(config) {
  symbols_.push_back(kSentenceStart);
  for (const auto& s : symbols) {
    if (s == kSentenceStart) continue;
    symbols_.push_back(s);
  }
  for (std::size_t i = 0; i < symbols_.size(); ++i) ids_[symbols_[i]] = static_cast<int>(i);
  const std::size_t V = symbols_.size();
  embedding_ = Parameter("lm.embedding", Tensor::Matrix(V, config_.embedding_dim));
  auto rng = derived_rng(seed, embedding_.name);
  fill_uniform(embedding_.value, 0.1, rng);
  lstm_ = LstmDirection("lm.lstm", config_.embedding_dim, config_.hidden);
  lstm_.Initialize(seed, 0.08);
  output_ = AffineLayer("lm.output", config_.hidden, V);
  auto out_rng = derived_rng(seed, output_.weight.name);
  output_.Initialize(out_rng, std::sqrt(6.0 / double(config_.hidden + V)));
}

int CharRnnLm::token_id(const std::string& symbol) const {
  auto it = ids_.find(symbol);
  return it == ids_.end() ? -1 : it->second;
}

CharRnnLm::State CharRnnLm::Initial() const {
  State s;
  s.h.assign(config_.hidden, 0.0);
  s.c.assign(config_.hidden, 0.0);
  return Advance(s, 0);
}

CharRnnLm::State CharRnnLm::Advance(const State& state, int token) const {
  State next{state.h, state.c, {}};
  lstm_.Step(embedding_.value.row(static_cast<std::size_t>(token)), next.h, next.c);
  Tensor h({1, config_.hidden}, next.h);
  const Tensor logits = output_.Forward(h);
  const Tensor logp = log_softmax_rows(logits);
  next.next_log_probs.assign(logp.values().begin(), logp.values().end());
  return next;
}

double CharRnnLm::PrefixLogProb(const std::vector<int>& sentence) const {
  State s = Initial();
  double total = 0.0;
  for (int tok : sentence) {
    total += s.next_log_probs[static_cast<std::size_t>(tok)];
    s = Advance(s, tok);
  }
  return total;
}

double CharRnnLm::SequenceLoss(const std::vector<int>& sentence, double grad_scale) {
  const std::size_t n = sentence.size() + 1;
  const std::size_t E = config_.embedding_dim;
  std::vector<int> inputs{0};
  inputs.insert(inputs.end(), sentence.begin(), sentence.end());
  std::vector<int> targets(sentence.begin(), sentence.end());
  targets.push_back(0);

  Tensor x = Tensor::Matrix(n, E);
  for (std::size_t t = 0; t < n; ++t) {
    std::copy_n(&embedding_.value(static_cast<std::size_t>(inputs[t]), 0), E, &x(t, 0));
  }
  LstmCache cache;
  const Tensor hidden = lstm_.Forward(x, false, grad_scale != 0.0 ? &cache : nullptr);
  const Tensor logp = log_softmax_rows(output_.Forward(hidden));
  double loss = 0.0;
  for (std::size_t t = 0; t < n; ++t) loss -= logp(t, static_cast<std::size_t>(targets[t]));
  if (grad_scale == 0.0) return loss;

  Tensor dlogp = Tensor::Matrix(n, logp.cols());
  for (std::size_t t = 0; t < n; ++t) {
    dlogp(t, static_cast<std::size_t>(targets[t])) = -grad_scale;
  }
  const Tensor dh = output_.Backward(hidden, log_softmax_backward(logp, dlogp));
  const Tensor dx = lstm_.Backward(cache, dh);
  for (std::size_t t = 0; t < n; ++t) {
    double* g = &embedding_.grad(static_cast<std::size_t>(inputs[t]), 0);
    for (std::size_t e = 0; e < E; ++e) g[e] += dx(t, e);
  }
  return loss;
}

ParameterList CharRnnLm::Parameters() {
  ParameterList out{&embedding_};
  lstm_.CollectParameters(out);
  output_.CollectParameters(out);
  return out;
}

namespace {
constexpr char kLmMagic[] = "LFVCHLM1";
}

void CharRnnLm::Save(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open LM file for writing: " + path);
  BinaryWriter w(os);
  w.Bytes(kLmMagic);
  w.U32(1);
  w.U32(static_cast<std::uint32_t>(config_.embedding_dim));
  w.U32(static_cast<std::uint32_t>(config_.hidden));
  w.U32(static_cast<std::uint32_t>(symbols_.size() - 1));
  for (std::size_t i = 1; i < symbols_.size(); ++i) w.String(symbols_[i]);
  for (const Parameter* p : const_cast<CharRnnLm*>(this)->Parameters()) {
    w.TensorData(p->value);
  }
  if (!os) throw IoError("write failed: " + path);
}

CharRnnLm CharRnnLm::Load(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open LM file: " + path);
  BinaryReader r(is, path);
  r.ExpectMagic(kLmMagic);
  if (r.U32() != 1) throw FormatError(path + ": unsupported LM version");
  CharLmConfig config;
  config.embedding_dim = r.U32();
  config.hidden = r.U32();
  std::vector<std::string> symbols(r.U32());
  for (auto& s : symbols) s = r.String();
  CharRnnLm lm(symbols, config, 0);
  for (Parameter* p : lm.Parameters()) {
    Tensor t = r.TensorData();
    if (!t.SameShape(p->value)) throw FormatError(path + ": shape mismatch in " + p->name);
    p->value = std::move(t);
  }
  return lm;
}

LmTrainingResult train_lm(std::span<const std::vector<std::string>> transcripts,
                          const CharLmConfig& config, std::uint64_t seed,
                          const std::function<void(const std::string&)>& log) {
  if (transcripts.empty()) throw UsageError("LM training corpus is empty");
  std::set<std::string> symbol_set;
  for (const auto& t : transcripts) symbol_set.insert(t.begin(), t.end());
  LmTrainingResult result;
  result.lm = CharRnnLm(std::vector<std::string>(symbol_set.begin(), symbol_set.end()),
                        config, seed);
  CharRnnLm& lm = result.lm;
  std::vector<std::vector<int>> data;
  for (const auto& t : transcripts) {
    std::vector<int> ids;
    for (const auto& s : t) ids.push_back(lm.token_id(s));
    data.push_back(std::move(ids));
  }
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  auto rng = derived_rng(seed, "lm/shuffle");
  NesterovOptimizer opt(lm.Parameters(), config.optimizer);
  const std::size_t batch = std::max<std::size_t>(1, config.batch_size);
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double total_loss = 0.0, total_tokens = 0.0;
    for (std::size_t b = 0; b < order.size(); b += batch) {
      const std::size_t end = std::min(order.size(), b + batch);
      double tokens = 0.0;
      for (std::size_t i = b; i < end; ++i) tokens += double(data[order[i]].size() + 1);
      opt.BeginStep();
      for (std::size_t i = b; i < end; ++i) {
        total_loss += lm.SequenceLoss(data[order[i]], 1.0 / tokens);
      }
      opt.FinishStep();
      total_tokens += tokens;
    }
    result.epoch_perplexities.push_back(std::exp(total_loss / total_tokens));
    if (log) {
      std::ostringstream os;
      os << "lm epoch " << epoch + 1 << " perplexity " << result.epoch_perplexities.back();
      log(os.str());
    }
  }
  return result;
}

}  // namespace lfv
