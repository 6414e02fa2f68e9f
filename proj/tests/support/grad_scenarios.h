// tests/support/grad_scenarios.h

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

// Finite-difference scenarios for every differentiable component. Each
// returns the merged check result over parameters and inputs.

#ifndef LFVCTC_TESTS_SUPPORT_GRAD_SCENARIOS_H_
#define LFVCTC_TESTS_SUPPORT_GRAD_SCENARIOS_H_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ctc/ctc.h"
#include "decode/char_lm.h"
#include "layers/acoustic_model.h"
#include "layers/affine.h"
#include "layers/conv.h"
#include "layers/lfv_integration.h"
#include "layers/lstm.h"
#include "lfv/extractor.h"
#include "numerics/batch_norm.h"
#include "numerics/ops.h"
#include "tests/support/oracles.h"

namespace lfv::testing {

inline void ZeroGrads(const ParameterList& params) {
  for (Parameter* p : params) p->ZeroGrad();
}

inline GradCheckResult ConvGradCheck(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ConvLayerSpec spec;
  spec.kernel_time = 2;
  spec.kernel_freq = 3;
  spec.out_channels = 3;
  ConvLayer conv("conv", spec, 2);
  conv.Initialize(rng);
  Tensor x = RandomTensor({5, 6, 2}, rng);
  ConvCache cache;
  const Tensor y = conv.Forward(x, &cache);
  const Tensor w = RandomTensor(y.shape(), rng);
  ParameterList params;
  conv.CollectParameters(params);
  ZeroGrads(params);
  const Tensor dx = conv.Backward(cache, w);
  auto loss = [&] { return Dot(w, conv.Forward(x)); };
  GradCheckResult result = CheckParameters(params, loss);
  Merge(result, CheckTensor("conv.input", x, dx, loss));

  // Conv outputs after ReLU contain exact ties at zero, so the pool is
  // checked on a dense random input where it is differentiable.
  Tensor z = RandomTensor(y.shape(), rng);
  PoolCache pool_cache;
  const Tensor pooled = max_pool_freq(z, 2, &pool_cache);
  const Tensor wp = RandomTensor(pooled.shape(), rng);
  const Tensor dz = max_pool_freq_backward(pool_cache, wp);
  Merge(result, CheckTensor("pool.input", z, dz, [&] { return Dot(wp, max_pool_freq(z, 2)); }));
  return result;
}

inline GradCheckResult BiLstmGradCheck(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  BiLstmLayer layer("lstm", 3, 2);
  layer.Initialize(seed, 0.5);
  Tensor x = RandomTensor({5, 3}, rng);
  BiLstmCache cache;
  const Tensor y = layer.Forward(x, &cache);
  const Tensor w = RandomTensor(y.shape(), rng);
  ParameterList params;
  layer.CollectParameters(params);
  ZeroGrads(params);
  const Tensor dx = layer.Backward(cache, w);
  auto loss = [&] { return Dot(w, layer.Forward(x)); };
  GradCheckResult result = CheckParameters(params, loss);
  Merge(result, CheckTensor("lstm.input", x, dx, loss));
  return result;
}

inline GradCheckResult BatchNormGradCheck(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  BatchNormState state("bn", 3);
  state.gamma.value = RandomTensor({3}, rng);
  state.beta.value = RandomTensor({3}, rng);
  Tensor x = RandomTensor({6, 3}, rng);
  BatchNormCache cache;
  const Tensor y = batch_norm_forward(x, state, Mode::kTrain, &cache);
  const Tensor w = RandomTensor(y.shape(), rng);
  ZeroGrads({&state.gamma, &state.beta});
  const Tensor dx = batch_norm_backward(cache, w, state);
  auto loss = [&] { return Dot(w, batch_norm_forward(x, state, Mode::kTrain)); };
  GradCheckResult result = CheckParameters({&state.gamma, &state.beta}, loss);
  Merge(result, CheckTensor("bn.input", x, dx, loss));
  return result;
}

inline GradCheckResult ModulationGradCheck(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const ModulationSpec spec = make_modulation_spec(6, 3);
  GradCheckResult result;
  for (bool per_frame : {false, true}) {
    Tensor x = RandomTensor({4, 6}, rng);
    Tensor lfv = per_frame ? RandomTensor({4, 3}, rng, 1.0) : RandomTensor({3}, rng, 1.0);
    const Tensor w = RandomTensor({4, 6}, rng);
    const LfvBinaryGrads g = modulate_backward(x, lfv, spec, w);
    auto loss = [&] { return Dot(w, modulate(x, lfv, spec)); };
    Merge(result, CheckTensor("modulate.input", x, g.input, loss));
    Merge(result, CheckTensor("modulate.lfv", lfv, g.lfv, loss));
  }
  return result;
}

inline GradCheckResult AppendGradCheck(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  GradCheckResult result;
  for (bool per_frame : {false, true}) {
    Tensor x = RandomTensor({4, 3}, rng);
    Tensor lfv = per_frame ? RandomTensor({4, 2}, rng) : RandomTensor({2}, rng);
    const Tensor w = RandomTensor({4, 5}, rng);
    const LfvBinaryGrads g = append_lfv_backward(x, lfv, w);
    auto loss = [&] { return Dot(w, append_lfv(x, lfv)); };
    Merge(result, CheckTensor("append.input", x, g.input, loss));
    Merge(result, CheckTensor("append.lfv", lfv, g.lfv, loss));
  }
  return result;
}

// Affine output layer followed by the log-softmax.
inline GradCheckResult OutputLayerGradCheck(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  AffineLayer layer("out", 5, 4);
  layer.Initialize(rng, 0.5);
  Tensor x = RandomTensor({3, 5}, rng);
  const Tensor w = RandomTensor({3, 4}, rng);
  const Tensor lp = log_softmax_rows(layer.Forward(x));
  ParameterList params;
  layer.CollectParameters(params);
  ZeroGrads(params);
  const Tensor dx = layer.Backward(x, log_softmax_backward(lp, w));
  auto loss = [&] { return Dot(w, log_softmax_rows(layer.Forward(x))); };
  GradCheckResult result = CheckParameters(params, loss);
  Merge(result, CheckTensor("out.input", x, dx, loss));
  return result;
}

inline GradCheckResult ExtractorGradCheck(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  LfvExtractorConfig config;
  config.context = 1;
  config.hidden_sizes = {6, 5};
  config.bottleneck_dim = 3;
  LfvExtractor extractor(config, 2, {"a", "b", "c"}, seed);
  const Tensor features = RandomTensor({5, 2}, rng);
  const Tensor stacked = extractor.StackContext(features);
  const std::vector<int> labels = {0, 1, 2, 1, 0};
  ParameterList params = extractor.Parameters();
  ZeroGrads(params);
  extractor.Loss(stacked, labels, true);
  return CheckParameters(params, [&] { return extractor.Loss(stacked, labels, false); });
}

inline GradCheckResult CharLmGradCheck(std::uint64_t seed) {
  CharLmConfig config;
  config.embedding_dim = 3;
  config.hidden = 4;
  CharRnnLm lm({"a", "b", "|"}, config, seed);
  const std::vector<int> sentence = {lm.token_id("a"), lm.token_id("b"), lm.token_id("|"),
                                     lm.token_id("a")};
  ParameterList params = lm.Parameters();
  ZeroGrads(params);
  lm.SequenceLoss(sentence, 1.0);
  return CheckParameters(params, [&] { return lm.SequenceLoss(sentence); });
}

// CTC loss through the whole acoustic model on a T=8, F=6, V=4, 2H=8, D=2
// instance, in train mode so batch statistics are part of the function.
inline AcousticModelConfig TinyModelConfig(Adaptation adaptation) {
  AcousticModelConfig config;
  config.input_feature_dim = 6;
  config.vocab_size = 4;
  ConvLayerSpec c1;
  c1.kernel_time = 3;
  c1.kernel_freq = 3;
  c1.out_channels = 2;
  c1.pool_freq = 2;
  ConvLayerSpec c2;
  c2.kernel_time = 3;
  c2.kernel_freq = 2;
  c2.out_channels = 3;
  c2.pool_freq = 1;
  config.conv_layers = {c1, c2};
  config.lstm_layers = std::vector<BiLstmLayerSpec>(4, BiLstmLayerSpec{4});
  config.adaptation = adaptation;
  config.lfv_dim = adaptation == Adaptation::kBaseline ? 0 : 2;
  config.lstm_init_scale = 0.5;
  return config;
}

inline GradCheckResult EndToEndGradCheck(Adaptation adaptation, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  AcousticModel model(TinyModelConfig(adaptation), seed);
  const std::vector<Tensor> features = {RandomTensor({8, 6}, rng), RandomTensor({8, 6}, rng)};
  std::vector<Tensor> lfvs;
  std::uniform_real_distribution<double> unit(0.05, 0.95);
  for (std::size_t i = 0; i < features.size(); ++i) {
    Tensor v = i == 0 ? Tensor({2}) : Tensor({8, 2});
    for (double& x : v.values()) x = unit(rng);
    lfvs.push_back(adaptation == Adaptation::kBaseline ? Tensor() : v);
  }
  const std::vector<LabelSequence> labels = {LabelSequence({1, 2}), LabelSequence({3, 3})};
  std::vector<ModelInput> inputs;
  for (std::size_t i = 0; i < features.size(); ++i) {
    inputs.push_back({&features[i], adaptation == Adaptation::kBaseline ? nullptr : &lfvs[i]});
  }
  auto loss = [&] {
    const auto out = model.ForwardBatch(inputs, Mode::kTrain);
    double total = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) total += ctc_loss(out[i], labels[i]).loss;
    return total;
  };
  ParameterList params = model.Parameters();
  ZeroGrads(params);
  ModelTrace trace;
  const auto out = model.ForwardBatch(inputs, Mode::kTrain, &trace);
  std::vector<Tensor> grads;
  for (std::size_t i = 0; i < out.size(); ++i) grads.push_back(ctc_loss(out[i], labels[i]).grad);
  model.Backward(trace, grads);
  return CheckParameters(params, loss);
}

}  // namespace lfv::testing

#endif  // LFVCTC_TESTS_SUPPORT_GRAD_SCENARIOS_H_
