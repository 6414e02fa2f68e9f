// layers/lstm.cc

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

#include "layers/lstm.h"

#include <cmath>

#include "numerics/eigen_view.h"
#include "numerics/errors.h"
#include "numerics/ops.h"

namespace lfv {

LstmDirection::LstmDirection(const std::string& name, std::size_t input_dim,
                             std::size_t hidden_dim)
    : w_input(name + ".w_input", Tensor::Matrix(4 * hidden_dim, input_dim)),
      w_recurrent(name + ".w_recurrent",
                  Tensor::Matrix(4 * hidden_dim, hidden_dim)),
      bias(name + ".bias", Tensor::Vector(4 * hidden_dim)) {}

void LstmDirection::Initialize(std::uint64_t seed, double scale,
                               std::size_t split_input_at) {
  const std::size_t rows = w_input.value.rows();
  const std::size_t cols = w_input.value.cols();
  const std::size_t base_cols =
      split_input_at == 0 ? cols : std::min(split_input_at, cols);
  {
    Tensor base = Tensor::Matrix(rows, base_cols);
    auto rng = derived_rng(seed, w_input.name);
    fill_uniform(base, scale, rng);
    Tensor extra = Tensor::Matrix(rows, cols - base_cols);
    auto extra_rng = derived_rng(seed, w_input.name + "#extra");
    fill_uniform(extra, scale, extra_rng);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < base_cols; ++c) w_input.value(r, c) = base(r, c);
      for (std::size_t c = base_cols; c < cols; ++c) {
        w_input.value(r, c) = extra(r, c - base_cols);
      }
    }
  }
  auto rec_rng = derived_rng(seed, w_recurrent.name);
  fill_uniform(w_recurrent.value, scale, rec_rng);
  const std::size_t h = hidden_dim();
  bias.value.SetZero();
  for (std::size_t i = h; i < 2 * h; ++i) bias.value[i] = 1.0;
}

namespace {

// Activates the fused pre-activation vector in place.
inline void ActivateGates(double* z, std::size_t h) {
  for (std::size_t k = 0; k < h; ++k) z[k] = sigmoid(z[k]);
  for (std::size_t k = h; k < 2 * h; ++k) z[k] = sigmoid(z[k]);
  for (std::size_t k = 2 * h; k < 3 * h; ++k) z[k] = std::tanh(z[k]);
  for (std::size_t k = 3 * h; k < 4 * h; ++k) z[k] = sigmoid(z[k]);
}

}  // namespace

Tensor LstmDirection::Forward(const Tensor& x, bool reverse,
                              LstmCache* cache) const {
  if (x.rank() != 2 || x.cols() != input_dim()) {
    throw ShapeError("lstm '" + w_input.name + "': input " +
                     ShapeString(x.shape()) + ", expected width " +
                     std::to_string(input_dim()));
  }
  const std::size_t T = x.rows(), H = hidden_dim();
  Tensor gates = Tensor::Matrix(T, 4 * H);
  auto gm = AsMatrix(gates);
  gm.noalias() = AsMatrix(x) * AsMatrix(w_input.value).transpose();
  gm.rowwise() += AsVector(bias.value).transpose();

  Tensor cell = Tensor::Matrix(T, H);
  Tensor cell_tanh = Tensor::Matrix(T, H);
  Tensor hidden = Tensor::Matrix(T, H);
  const auto wh = AsMatrix(w_recurrent.value);
  Eigen::VectorXd rec(4 * H);
  for (std::size_t step = 0; step < T; ++step) {
    const std::size_t t = reverse ? T - 1 - step : step;
    double* z = &gates(t, 0);
    if (step > 0) {
      const std::size_t prev = reverse ? t + 1 : t - 1;
      rec.noalias() = wh * ConstVectorMap(&hidden(prev, 0), H);
      for (std::size_t k = 0; k < 4 * H; ++k) z[k] += rec[k];
    }
    ActivateGates(z, H);
    for (std::size_t k = 0; k < H; ++k) {
      const double c_prev =
          step > 0 ? cell(reverse ? t + 1 : t - 1, k) : 0.0;
      const double c = z[H + k] * c_prev + z[k] * z[2 * H + k];
      cell(t, k) = c;
      cell_tanh(t, k) = std::tanh(c);
      hidden(t, k) = z[3 * H + k] * cell_tanh(t, k);
    }
  }
  if (cache) {
    cache->reverse = reverse;
    cache->input = x;
    cache->gates = std::move(gates);
    cache->cell = std::move(cell);
    cache->cell_tanh = std::move(cell_tanh);
    cache->hidden = hidden;
  }
  return hidden;
}

Tensor LstmDirection::Backward(const LstmCache& cache,
                               const Tensor& grad_hidden) {
  const std::size_t T = cache.hidden.rows(), H = hidden_dim();
  RequireShape(grad_hidden, {T, H}, "lstm backward");
  const bool reverse = cache.reverse;
  Tensor dpre = Tensor::Matrix(T, 4 * H);
  std::vector<double> dh_next(H, 0.0), dc_next(H, 0.0);
  const auto wh = AsMatrix(w_recurrent.value);

  for (std::size_t step = T; step-- > 0;) {
    const std::size_t t = reverse ? T - 1 - step : step;
    const bool has_prev = step > 0;
    const std::size_t prev = reverse ? t + 1 : t - 1;
    const double* g = &cache.gates(t, 0);
    double* d = &dpre(t, 0);
    for (std::size_t k = 0; k < H; ++k) {
      const double i = g[k], f = g[H + k], cand = g[2 * H + k], o = g[3 * H + k];
      const double tc = cache.cell_tanh(t, k);
      const double dh = grad_hidden(t, k) + dh_next[k];
      const double dc = dh * o * (1.0 - tc * tc) + dc_next[k];
      const double c_prev = has_prev ? cache.cell(prev, k) : 0.0;
      d[k] = dc * cand * i * (1.0 - i);
      d[H + k] = dc * c_prev * f * (1.0 - f);
      d[2 * H + k] = dc * i * (1.0 - cand * cand);
      d[3 * H + k] = dh * tc * o * (1.0 - o);
      dc_next[k] = dc * f;
    }
    if (has_prev) {
      VectorMap(dh_next.data(), H).noalias() =
          wh.transpose() * ConstVectorMap(d, 4 * H);
    }
  }

  auto dm = AsMatrix(dpre);
  AsMatrix(w_input.grad).noalias() += dm.transpose() * AsMatrix(cache.input);
  AsVector(bias.grad) += dm.colwise().sum().transpose();
  // Recurrent weights see h_{prev(t)} for every step but the first.
  auto wg = AsMatrix(w_recurrent.grad);
  const auto hm = AsMatrix(cache.hidden);
  if (T > 1) {
    if (!reverse) {
      wg.noalias() += dm.bottomRows(T - 1).transpose() * hm.topRows(T - 1);
    } else {
      wg.noalias() += dm.topRows(T - 1).transpose() * hm.bottomRows(T - 1);
    }
  }
  Tensor dx = Tensor::Matrix(T, input_dim());
  AsMatrix(dx).noalias() = dm * AsMatrix(w_input.value);
  return dx;
}

void LstmDirection::Step(std::span<const double> x, std::span<double> h,
                         std::span<double> c) const {
  const std::size_t H = hidden_dim();
  Eigen::VectorXd z = AsVector(bias.value);
  z.noalias() += AsMatrix(w_input.value) * ConstVectorMap(x.data(), x.size());
  z.noalias() += AsMatrix(w_recurrent.value) * ConstVectorMap(h.data(), H);
  ActivateGates(z.data(), H);
  for (std::size_t k = 0; k < H; ++k) {
    c[k] = z[H + k] * c[k] + z[k] * z[2 * H + k];
    h[k] = z[3 * H + k] * std::tanh(c[k]);
  }
}

BiLstmLayer::BiLstmLayer(const std::string& name, std::size_t input_dim,
                         std::size_t cells_per_direction)
    : forward_(name + ".fw", input_dim, cells_per_direction),
      backward_(name + ".bw", input_dim, cells_per_direction) {}

void BiLstmLayer::Initialize(std::uint64_t seed, double scale,
                             std::size_t split_input_at) {
  forward_.Initialize(seed, scale, split_input_at);
  backward_.Initialize(seed, scale, split_input_at);
}

Tensor BiLstmLayer::Forward(const Tensor& x, BiLstmCache* cache) const {
  Tensor fw = forward_.Forward(x, false, cache ? &cache->forward : nullptr);
  Tensor bw = backward_.Forward(x, true, cache ? &cache->backward : nullptr);
  const std::size_t T = x.rows(), H = forward_.hidden_dim();
  Tensor out = Tensor::Matrix(T, 2 * H);
  for (std::size_t t = 0; t < T; ++t) {
    std::copy_n(&fw(t, 0), H, &out(t, 0));
    std::copy_n(&bw(t, 0), H, &out(t, H));
  }
  return out;
}

Tensor BiLstmLayer::Backward(const BiLstmCache& cache, const Tensor& grad_out) {
  const std::size_t T = grad_out.rows(), H = forward_.hidden_dim();
  RequireShape(grad_out, {T, 2 * H}, "bilstm backward");
  Tensor dfw = Tensor::Matrix(T, H), dbw = Tensor::Matrix(T, H);
  for (std::size_t t = 0; t < T; ++t) {
    std::copy_n(&grad_out(t, 0), H, &dfw(t, 0));
    std::copy_n(&grad_out(t, H), H, &dbw(t, 0));
  }
  Tensor dx = forward_.Backward(cache.forward, dfw);
  Tensor dx_bw = backward_.Backward(cache.backward, dbw);
  AsVector(dx) += AsVector(dx_bw);
  return dx;
}

}  // namespace lfv
