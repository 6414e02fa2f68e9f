// layers/conv.cc

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

#include "layers/conv.h"

#include <cmath>

#include "numerics/eigen_view.h"
#include "numerics/errors.h"
#include "numerics/ops.h"

namespace lfv {

void ConvLayerSpec::Validate() const {
  if (kernel_time < 1 || kernel_freq < 1 || stride_time < 1 ||
      stride_freq < 1 || out_channels < 1 || pool_freq < 1) {
    throw ConfigError("conv layer: kernels, strides, channels and pooling must be >= 1");
  }
}

std::size_t ConvLayerSpec::OutputTime(std::size_t in_time) const {
  if (in_time < kernel_time) return 0;
  return (in_time - kernel_time) / stride_time + 1;
}

std::size_t ConvLayerSpec::OutputFreq(std::size_t in_freq) const {
  if (in_freq < kernel_freq) return 0;
  return (in_freq - kernel_freq) / stride_freq + 1;
}

std::size_t ConvLayerSpec::PooledFreq(std::size_t in_freq) const {
  return OutputFreq(in_freq) / pool_freq;
}

ConvLayer::ConvLayer(const std::string& name, const ConvLayerSpec& spec,
                     std::size_t in_channels)
    : weight(name + ".weight",
             Tensor::Matrix(spec.out_channels,
                            spec.kernel_time * spec.kernel_freq * in_channels)),
      bias(name + ".bias", Tensor::Vector(spec.out_channels)),
      spec_(spec),
      in_channels_(in_channels) {
  spec_.Validate();
}

void ConvLayer::Initialize(std::mt19937_64& rng) {
  const double fan_in = static_cast<double>(weight.value.cols());
  fill_uniform(weight.value, std::sqrt(3.0 / fan_in), rng);
  bias.value.Fill(0.01);
}

Tensor ConvLayer::Forward(const Tensor& x, ConvCache* cache) const {
  if (x.rank() != 3 || x.dim(2) != in_channels_) {
    throw ShapeError("conv '" + weight.name + "': input " +
                     ShapeString(x.shape()) + " needs [T x F x " +
                     std::to_string(in_channels_) + "]");
  }
  const std::size_t in_t = x.dim(0), in_f = x.dim(1);
  if (in_t < spec_.kernel_time || in_f < spec_.kernel_freq) {
    throw ShapeError("conv '" + weight.name + "': input " +
                     ShapeString(x.shape()) + " smaller than kernel " +
                     std::to_string(spec_.kernel_time) + "x" +
                     std::to_string(spec_.kernel_freq));
  }
  const std::size_t out_t = spec_.OutputTime(in_t);
  const std::size_t out_f = spec_.OutputFreq(in_f);
  const std::size_t kdim = weight.value.cols();

  Tensor columns = Tensor::Matrix(out_t * out_f, kdim);
  for (std::size_t t = 0; t < out_t; ++t) {
    for (std::size_t f = 0; f < out_f; ++f) {
      double* dst = &columns((t * out_f + f), 0);
      for (std::size_t kt = 0; kt < spec_.kernel_time; ++kt) {
        for (std::size_t kf = 0; kf < spec_.kernel_freq; ++kf) {
          const std::size_t it = t * spec_.stride_time + kt;
          const std::size_t jf = f * spec_.stride_freq + kf;
          const double* src = &x(it, jf, 0);
          for (std::size_t c = 0; c < in_channels_; ++c) *dst++ = src[c];
        }
      }
    }
  }
  Tensor out({out_t, out_f, spec_.out_channels});
  auto om = AsMatrix(out, out_t * out_f, spec_.out_channels);
  om.noalias() = AsMatrix(columns) * AsMatrix(weight.value).transpose();
  om.rowwise() += AsVector(bias.value).transpose();
  for (double& v : out.values()) v = v > 0.0 ? v : 0.0;

  if (cache) {
    cache->in_time = in_t;
    cache->in_freq = in_f;
    cache->out_time = out_t;
    cache->out_freq = out_f;
    cache->columns = std::move(columns);
    cache->activation = out;
  }
  return out;
}

Tensor ConvLayer::Backward(const ConvCache& cache, const Tensor& grad_out) {
  RequireShape(grad_out, cache.activation.shape(), "conv backward");
  const std::size_t rows = cache.out_time * cache.out_freq;
  Tensor dpre = grad_out;
  for (std::size_t i = 0; i < dpre.size(); ++i) {
    if (cache.activation[i] <= 0.0) dpre[i] = 0.0;
  }
  auto dm = AsMatrix(dpre, rows, spec_.out_channels);
  AsMatrix(weight.grad).noalias() += dm.transpose() * AsMatrix(cache.columns);
  AsVector(bias.grad) += dm.colwise().sum().transpose();

  Tensor dcols = Tensor::Matrix(rows, weight.value.cols());
  AsMatrix(dcols).noalias() = dm * AsMatrix(weight.value);

  Tensor dx({cache.in_time, cache.in_freq, in_channels_});
  for (std::size_t t = 0; t < cache.out_time; ++t) {
    for (std::size_t f = 0; f < cache.out_freq; ++f) {
      const double* src = &dcols(t * cache.out_freq + f, 0);
      for (std::size_t kt = 0; kt < spec_.kernel_time; ++kt) {
        for (std::size_t kf = 0; kf < spec_.kernel_freq; ++kf) {
          double* dst = &dx(t * spec_.stride_time + kt,
                            f * spec_.stride_freq + kf, 0);
          for (std::size_t c = 0; c < in_channels_; ++c) dst[c] += *src++;
        }
      }
    }
  }
  return dx;
}

Tensor max_pool_freq(const Tensor& x, std::size_t pool, PoolCache* cache) {
  if (x.rank() != 3) throw ShapeError("max_pool_freq needs a rank-3 tensor");
  if (pool < 1) throw ConfigError("max_pool_freq: pool width must be >= 1");
  const std::size_t T = x.dim(0), F = x.dim(1), C = x.dim(2);
  const std::size_t out_f = F / pool;
  if (out_f == 0) {
    throw ShapeError("max_pool_freq: " + std::to_string(F) +
                     " frequency bins cannot fill a pool of " +
                     std::to_string(pool));
  }
  Tensor out({T, out_f, C});
  std::vector<std::uint32_t> argmax(out.size());
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t f = 0; f < out_f; ++f) {
      for (std::size_t c = 0; c < C; ++c) {
        std::size_t best = (t * F + f * pool) * C + c;
        for (std::size_t k = 1; k < pool; ++k) {
          const std::size_t idx = (t * F + f * pool + k) * C + c;
          if (x[idx] > x[best]) best = idx;
        }
        const std::size_t o = (t * out_f + f) * C + c;
        out[o] = x[best];
        argmax[o] = static_cast<std::uint32_t>(best);
      }
    }
  }
  if (cache) {
    cache->in_shape = x.shape();
    cache->argmax = std::move(argmax);
  }
  return out;
}

Tensor max_pool_freq_backward(const PoolCache& cache, const Tensor& grad_out) {
  if (grad_out.size() != cache.argmax.size()) {
    throw ShapeError("max_pool_freq_backward: gradient size mismatch");
  }
  Tensor dx(cache.in_shape);
  for (std::size_t i = 0; i < grad_out.size(); ++i) {
    dx[cache.argmax[i]] += grad_out[i];
  }
  return dx;
}

}  // namespace lfv
