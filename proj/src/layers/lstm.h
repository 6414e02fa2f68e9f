// layers/lstm.h

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

#ifndef LFVCTC_LAYERS_LSTM_H_
#define LFVCTC_LAYERS_LSTM_H_

#include <random>
#include <span>
#include <string>

#include "numerics/optimizer.h"
#include "numerics/tensor.h"

namespace lfv {

// Intermediate values of one directional pass, in processing order.
struct LstmCache {
  bool reverse = false;
  Tensor input;   // [T x U]
  Tensor gates;   // activated i, f, g, o per step [T x 4H]
  Tensor cell;    // c_t [T x H]
  Tensor cell_tanh;
  Tensor hidden;  // h_t [T x H], indexed by input time
};

// Standard LSTM cell without peepholes. Gate layout in the fused weight
// matrices is [input | forget | candidate | output], H rows each.
class LstmDirection {
 public:
  LstmDirection() = default;
  LstmDirection(const std::string& name, std::size_t input_dim,
                std::size_t hidden_dim);

  // Weights uniform in +-scale, forget-gate bias 1, other biases 0. When
  // `split_input_at` is nonzero the input columns [split, input_dim) are drawn
  // from a separate stream ("<name>#extra"), leaving the leading block
  // identical to a layer of width `split_input_at`.
  void Initialize(std::uint64_t seed, double scale,
                  std::size_t split_input_at = 0);

  // Zero initial state. `reverse` processes t = T-1 .. 0. Returns [T x H]
  // with row t the hidden state emitted at input time t.
  Tensor Forward(const Tensor& x, bool reverse, LstmCache* cache = nullptr) const;
  Tensor Backward(const LstmCache& cache, const Tensor& grad_hidden);

  // Single step for autoregressive use. h/c are updated in place.
  void Step(std::span<const double> x, std::span<double> h,
            std::span<double> c) const;

  std::size_t input_dim() const { return w_input.value.cols(); }
  std::size_t hidden_dim() const { return w_recurrent.value.cols(); }
  void CollectParameters(ParameterList& out) {
    out.push_back(&w_input);
    out.push_back(&w_recurrent);
    out.push_back(&bias);
  }

  Parameter w_input;      // [4H x U]
  Parameter w_recurrent;  // [4H x H]
  Parameter bias;         // [4H]
};

struct BiLstmCache {
  LstmCache forward;
  LstmCache backward;
};

// Forward-time and backward-time passes concatenated per frame as
// [forward | backward], so the output width is 2H.
class BiLstmLayer {
 public:
  BiLstmLayer() = default;
  BiLstmLayer(const std::string& name, std::size_t input_dim,
              std::size_t cells_per_direction);

  void Initialize(std::uint64_t seed, double scale,
                  std::size_t split_input_at = 0);

  Tensor Forward(const Tensor& x, BiLstmCache* cache = nullptr) const;
  Tensor Backward(const BiLstmCache& cache, const Tensor& grad_out);

  std::size_t output_dim() const { return 2 * forward_.hidden_dim(); }
  std::size_t input_dim() const { return forward_.input_dim(); }
  void CollectParameters(ParameterList& out) {
    forward_.CollectParameters(out);
    backward_.CollectParameters(out);
  }
  LstmDirection& forward_direction() { return forward_; }
  LstmDirection& backward_direction() { return backward_; }
  const LstmDirection& forward_direction() const { return forward_; }
  const LstmDirection& backward_direction() const { return backward_; }

 private:
  LstmDirection forward_;
  LstmDirection backward_;
};

}  // namespace lfv

#endif  // LFVCTC_LAYERS_LSTM_H_
