// layers/conv.h

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

#ifndef LFVCTC_LAYERS_CONV_H_
#define LFVCTC_LAYERS_CONV_H_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "numerics/optimizer.h"
#include "numerics/tensor.h"

namespace lfv {

// One TDNN/CNN front layer: valid 2-D convolution over (time, frequency),
// ReLU, then max pooling along frequency only.
struct ConvLayerSpec {
  std::size_t kernel_time = 3;
  std::size_t kernel_freq = 3;
  std::size_t stride_time = 1;
  std::size_t stride_freq = 1;
  std::size_t out_channels = 8;
  // Frequency pooling width; 1 disables pooling.
  std::size_t pool_freq = 2;

  void Validate() const;
  std::size_t OutputTime(std::size_t in_time) const;
  std::size_t OutputFreq(std::size_t in_freq) const;  // before pooling
  std::size_t PooledFreq(std::size_t in_freq) const;  // after pooling
};

struct ConvCache {
  std::size_t in_time = 0, in_freq = 0, out_time = 0, out_freq = 0;
  Tensor columns;     // im2col patches [out_time*out_freq x K]
  Tensor activation;  // post-ReLU output [out_time x out_freq x C_out]
};

struct PoolCache {
  std::vector<std::size_t> in_shape;
  std::vector<std::uint32_t> argmax;  // flat input index per output element
};

class ConvLayer {
 public:
  ConvLayer() = default;
  ConvLayer(const std::string& name, const ConvLayerSpec& spec,
            std::size_t in_channels);

  void Initialize(std::mt19937_64& rng);

  // x: [T x F x C_in] -> [T' x F' x C_out] (no pooling).
  Tensor Forward(const Tensor& x, ConvCache* cache = nullptr) const;
  Tensor Backward(const ConvCache& cache, const Tensor& grad_out);

  const ConvLayerSpec& spec() const { return spec_; }
  std::size_t in_channels() const { return in_channels_; }
  void CollectParameters(ParameterList& out) {
    out.push_back(&weight);
    out.push_back(&bias);
  }

  Parameter weight;  // [C_out x (kernel_time * kernel_freq * C_in)]
  Parameter bias;    // [C_out]

 private:
  ConvLayerSpec spec_;
  std::size_t in_channels_ = 0;
};

// Max pooling over non-overlapping frequency windows of width `pool`.
// Trailing frequency bins that do not fill a window are dropped.
Tensor max_pool_freq(const Tensor& x, std::size_t pool, PoolCache* cache = nullptr);
Tensor max_pool_freq_backward(const PoolCache& cache, const Tensor& grad_out);

}  // namespace lfv

#endif  // LFVCTC_LAYERS_CONV_H_
