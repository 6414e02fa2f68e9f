// tests/unit/layers_test.cc

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

#include "doctest.h"
#include "layers/acoustic_model.h"
#include "layers/affine.h"
#include "layers/conv.h"
#include "layers/lfv_integration.h"
#include "layers/lstm.h"
#include "numerics/errors.h"
#include "numerics/ops.h"
#include "tests/support/grad_scenarios.h"
#include "tests/support/oracles.h"
#include "tests/support/temp_dir.h"

namespace lfv {
namespace {

using testing::RandomTensor;

double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

TEST_CASE("conv 1x1 unit kernel is the identity on nonnegative input") {
  ConvLayerSpec spec;
  spec.kernel_time = 1;
  spec.kernel_freq = 1;
  spec.out_channels = 1;
  ConvLayer conv("c", spec, 1);
  conv.weight.value[0] = 1.0;
  std::mt19937_64 rng(1);
  Tensor x = RandomTensor({4, 3, 1}, rng);
  for (double& v : x.values()) v = std::abs(v);
  CHECK(conv.Forward(x) == x);
}

TEST_CASE("conv with zero weights emits the bias") {
  ConvLayerSpec spec;
  spec.out_channels = 2;
  ConvLayer conv("c", spec, 1);
  conv.bias.value = Tensor({2}, std::vector<double>{0.75, 2.0});
  std::mt19937_64 rng(2);
  const Tensor y = conv.Forward(RandomTensor({5, 5, 1}, rng));
  CHECK(y.shape() == std::vector<std::size_t>{3, 3, 2});
  for (std::size_t i = 0; i < y.size(); i += 2) {
    CHECK(y[i] == 0.75);
    CHECK(y[i + 1] == 2.0);
  }
}

TEST_CASE("conv matches a direct quadruple loop") {
  std::mt19937_64 rng(3);
  ConvLayerSpec spec;
  spec.kernel_time = 2;
  spec.kernel_freq = 2;
  spec.out_channels = 1;
  ConvLayer conv("c", spec, 1);
  conv.Initialize(rng);
  conv.bias.value[0] = 0.1;
  const Tensor x = RandomTensor({5, 4, 1}, rng);
  const Tensor y = conv.Forward(x);
  REQUIRE(y.shape() == std::vector<std::size_t>{4, 3, 1});
  for (std::size_t t = 0; t < 4; ++t) {
    for (std::size_t f = 0; f < 3; ++f) {
      double s = conv.bias.value[0];
      for (std::size_t a = 0; a < 2; ++a) {
        for (std::size_t b = 0; b < 2; ++b) {
          s += conv.weight.value[a * 2 + b] * x(t + a, f + b, 0);
        }
      }
      CHECK(y(t, f, 0) == doctest::Approx(std::max(s, 0.0)).epsilon(1e-14));
    }
  }
}

TEST_CASE("conv strides follow the valid-convolution formula") {
  ConvLayerSpec spec;
  spec.kernel_time = 3;
  spec.kernel_freq = 2;
  spec.stride_time = 2;
  spec.stride_freq = 3;
  CHECK(spec.OutputTime(9) == 4);
  CHECK(spec.OutputFreq(8) == 3);
  ConvLayer conv("c", spec, 1);
  CHECK_THROWS_AS(conv.Forward(Tensor({2, 8, 1})), ShapeError);
}

TEST_CASE("max pooling over frequency") {
  const Tensor x({1, 5, 1}, std::vector<double>{1, 4, 2, 3, 9});
  const Tensor y = max_pool_freq(x, 2);
  CHECK(y.shape() == std::vector<std::size_t>{1, 2, 1});
  CHECK(y[0] == 4.0);
  CHECK(y[1] == 3.0);
}

TEST_CASE("LSTM with zero parameters outputs zeros") {
  BiLstmLayer layer("l", 3, 2);
  std::mt19937_64 rng(4);
  const Tensor y = layer.Forward(RandomTensor({6, 3}, rng));
  CHECK(y.shape() == std::vector<std::size_t>{6, 4});
  for (double v : y.values()) CHECK(v == 0.0);
}

TEST_CASE("single step BiLSTM with mirrored directions gives equal halves") {
  BiLstmLayer layer("l", 3, 2);
  layer.Initialize(9, 0.3);
  layer.backward_direction().w_input.value = layer.forward_direction().w_input.value;
  layer.backward_direction().w_recurrent.value = layer.forward_direction().w_recurrent.value;
  layer.backward_direction().bias.value = layer.forward_direction().bias.value;
  std::mt19937_64 rng(5);
  const Tensor y = layer.Forward(RandomTensor({1, 3}, rng));
  CHECK(y(0, 0) == y(0, 2));
  CHECK(y(0, 1) == y(0, 3));
}

TEST_CASE("LSTM matches a per-gate scalar recomputation") {
  const std::size_t U = 2, H = 2, T = 3;
  LstmDirection dir("d", U, H);
  std::mt19937_64 rng(6);
  dir.w_input.value = RandomTensor({4 * H, U}, rng, 0.7);
  dir.w_recurrent.value = RandomTensor({4 * H, H}, rng, 0.7);
  dir.bias.value = RandomTensor({4 * H}, rng, 0.3);
  const Tensor x = RandomTensor({T, U}, rng);
  for (bool reverse : {false, true}) {
    const Tensor h = dir.Forward(x, reverse);
    std::vector<double> hp(H, 0.0), cp(H, 0.0);
    for (std::size_t s = 0; s < T; ++s) {
      const std::size_t t = reverse ? T - 1 - s : s;
      std::vector<double> hn(H), cn(H);
      for (std::size_t k = 0; k < H; ++k) {
        auto pre = [&](std::size_t gate) {
          const std::size_t row = gate * H + k;
          double z = dir.bias.value[row];
          for (std::size_t u = 0; u < U; ++u) z += dir.w_input.value(row, u) * x(t, u);
          for (std::size_t j = 0; j < H; ++j) z += dir.w_recurrent.value(row, j) * hp[j];
          return z;
        };
        const double i = Sigmoid(pre(0)), f = Sigmoid(pre(1));
        const double g = std::tanh(pre(2)), o = Sigmoid(pre(3));
        cn[k] = f * cp[k] + i * g;
        hn[k] = o * std::tanh(cn[k]);
      }
      for (std::size_t k = 0; k < H; ++k) CHECK(h(t, k) == doctest::Approx(hn[k]).epsilon(1e-13));
      hp = hn;
      cp = cn;
    }
  }
}

TEST_CASE("LSTM initialization sets the forget bias to one") {
  LstmDirection dir("d", 3, 4);
  dir.Initialize(1, 0.08);
  for (std::size_t i = 0; i < 16; ++i) CHECK(dir.bias.value[i] == (i >= 4 && i < 8 ? 1.0 : 0.0));
  for (double w : dir.w_input.value.values()) CHECK(std::abs(w) <= 0.08);
}

TEST_CASE("modulate examples") {
  const ModulationSpec spec = make_modulation_spec(4, 2);
  const Tensor x({1, 4}, std::vector<double>{1, 2, 3, 4});
  const Tensor y = modulate(x, Tensor({2}, std::vector<double>{0.5, 1.0}), spec);
  CHECK(y == Tensor({1, 4}, std::vector<double>{0.5, 1.0, 3.0, 4.0}));
  CHECK(modulate(x, Tensor({2}, 1.0), spec) == x);
  const Tensor zeroed = modulate(x, Tensor({2}, 0.0), spec);
  for (double v : zeroed.values()) CHECK(v == 0.0);
  CHECK_THROWS_AS(make_modulation_spec(6, 4), ConfigError);
  CHECK_THROWS_AS(make_modulation_spec(6, 0), ConfigError);
}

TEST_CASE("modulate with per-frame LFVs scales each frame separately") {
  const ModulationSpec spec = make_modulation_spec(2, 2);
  const Tensor x({2, 2}, std::vector<double>{1, 1, 1, 1});
  const Tensor v({2, 2}, std::vector<double>{0.1, 0.2, 0.3, 0.4});
  CHECK(modulate(x, v, spec) == v);
  CHECK_THROWS_AS(modulate(x, Tensor({3, 2}), spec), ShapeError);
}

TEST_CASE("append examples") {
  const Tensor x({2, 2}, std::vector<double>{1, 2, 3, 4});
  CHECK(append_lfv(x, Tensor({1}, std::vector<double>{9})) ==
        Tensor({2, 3}, std::vector<double>{1, 2, 9, 3, 4, 9}));
  CHECK(append_lfv(x, Tensor({0})) == x);
  const Tensor v({2, 2}, std::vector<double>{5, 6, 7, 8});
  const Tensor y = append_lfv(x, v);
  CHECK(y(0, 2) == 5.0);
  CHECK(y(0, 3) == 6.0);
  CHECK(y(1, 2) == 7.0);
  CHECK(y(1, 3) == 8.0);
}

TEST_CASE("layer gradient checks") {
  const auto check = [](const char* name, const testing::GradCheckResult& r) {
    INFO(name << ": " << r.worst);
    CHECK(r.ok());
  };
  check("conv", testing::ConvGradCheck(31));
  check("bilstm", testing::BiLstmGradCheck(32));
  check("modulation", testing::ModulationGradCheck(33));
  check("append", testing::AppendGradCheck(34));
  check("output", testing::OutputLayerGradCheck(35));
}

TEST_CASE("end-to-end gradient check for every adaptation") {
  for (Adaptation a : {Adaptation::kBaseline, Adaptation::kAppend, Adaptation::kModulate}) {
    const auto r = testing::EndToEndGradCheck(a, 40);
    INFO(adaptation_name(a) << ": " << r.worst);
    CHECK(r.ok());
  }
}

AcousticModelConfig SmallConfig(Adaptation a) {
  AcousticModelConfig c;
  c.input_feature_dim = 12;
  c.vocab_size = 5;
  c.lstm_layers = std::vector<BiLstmLayerSpec>(2, BiLstmLayerSpec{4});
  c.adaptation = a;
  c.lfv_dim = a == Adaptation::kBaseline ? 0 : 4;
  return c;
}

TEST_CASE("default conv stack removes four frames") {
  AcousticModelConfig c;
  c.vocab_size = 3;
  CHECK(c.OutputFrames(10) == 6);
  CHECK(c.OutputFrames(4) == 0);
  CHECK(c.ConvOutputWidth() == 16 * 1);
}

TEST_CASE("model output rows are normalized log distributions") {
  AcousticModel model(SmallConfig(Adaptation::kBaseline), 3);
  std::mt19937_64 rng(7);
  const Tensor x = RandomTensor({15, 12}, rng);
  const Tensor lp = model.Forward({&x, nullptr});
  CHECK(lp.rows() == 11);
  CHECK(lp.cols() == 5);
  for (std::size_t t = 0; t < lp.rows(); ++t) CHECK(std::abs(log_sum_exp(lp.row(t))) <= 1e-10);
}

TEST_CASE("adaptive models require an LFV") {
  AcousticModel model(SmallConfig(Adaptation::kModulate), 3);
  const Tensor x = Tensor::Matrix(10, 12, 0.5);
  CHECK_THROWS_AS(model.Forward({&x, nullptr}), UsageError);
  const Tensor wrong({3}, 0.5);
  CHECK_THROWS_AS(model.Forward({&x, &wrong}), ShapeError);
}

TEST_CASE("modulation with all-ones LFV is bitwise the baseline") {
  AcousticModel base(SmallConfig(Adaptation::kBaseline), 12);
  AcousticModel mod(SmallConfig(Adaptation::kModulate), 12);
  std::mt19937_64 rng(8);
  const Tensor x = RandomTensor({14, 12}, rng);
  const Tensor ones({4}, 1.0);
  CHECK(mod.Forward({&x, &ones}) == base.Forward({&x, nullptr}));
}

TEST_CASE("append with an empty LFV is bitwise the baseline") {
  AcousticModel base(SmallConfig(Adaptation::kBaseline), 12);
  AcousticModelConfig c = SmallConfig(Adaptation::kAppend);
  c.lfv_dim = 0;
  AcousticModel app(c, 12);
  std::mt19937_64 rng(9);
  const Tensor x = RandomTensor({14, 12}, rng);
  const Tensor empty({0});
  CHECK(app.Forward({&x, &empty}) == base.Forward({&x, nullptr}));
}

TEST_CASE("conditions share the base parameter draw") {
  AcousticModel base(SmallConfig(Adaptation::kBaseline), 5);
  AcousticModel app(SmallConfig(Adaptation::kAppend), 5);
  const ParameterList pb = base.Parameters(), pa = app.Parameters();
  REQUIRE(pb.size() == pa.size());
  for (std::size_t i = 0; i < pb.size(); ++i) {
    if (pb[i]->value.shape() != pa[i]->value.shape()) {
      // Only the first LSTM input matrices grow by D columns.
      const Tensor& b = pb[i]->value;
      const Tensor& a = pa[i]->value;
      REQUIRE(b.rows() == a.rows());
      for (std::size_t r = 0; r < b.rows(); ++r) {
        for (std::size_t col = 0; col < b.cols(); ++col) CHECK(a(r, col) == b(r, col));
      }
      continue;
    }
    CHECK(pb[i]->value == pa[i]->value);
  }
}

TEST_CASE("checkpoint round trip preserves the function") {
  testing::TempDir dir;
  AcousticModelConfig c = SmallConfig(Adaptation::kModulate);
  c.token_symbols = {"<b>", "a", "b", "c", "|"};
  AcousticModel model(c, 4);
  model.batch_norm().running_mean[0] = 0.25;
  save_checkpoint(model, dir.file("m.ckpt"));
  const AcousticModel loaded = load_checkpoint(dir.file("m.ckpt"));
  CHECK(loaded.config().token_symbols == c.token_symbols);
  std::mt19937_64 rng(10);
  const Tensor x = RandomTensor({12, 12}, rng);
  const Tensor v({4}, 0.7);
  CHECK(loaded.Forward({&x, &v}) == model.Forward({&x, &v}));
  CHECK_THROWS(load_checkpoint(dir.file("missing.ckpt")));
}

}  // namespace
}  // namespace lfv
