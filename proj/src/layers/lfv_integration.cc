// layers/lfv_integration.cc

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

#include "layers/lfv_integration.h"

#include "numerics/errors.h"

namespace lfv {
namespace {

std::size_t LfvWidth(const Tensor& lfv, std::size_t frames,
                     const char* context) {
  if (lfv.rank() == 1) return lfv.size();
  if (lfv.rank() == 2 && lfv.rows() == frames) return lfv.cols();
  throw ShapeError(std::string(context) + ": lfv " + ShapeString(lfv.shape()) +
                   " is neither [D] nor [" + std::to_string(frames) + " x D]");
}

// Row-t view of an LFV that may be utterance-level.
inline const double* LfvRow(const Tensor& lfv, std::size_t t) {
  return lfv.rank() == 1 ? lfv.raw() : lfv.raw() + t * lfv.cols();
}

}  // namespace

ModulationSpec make_modulation_spec(std::size_t units, std::size_t lfv_dim,
                                    int layer_index) {
  if (lfv_dim == 0 || units == 0 || units % lfv_dim != 0) {
    throw ConfigError("modulation: layer width " + std::to_string(units) +
                      " is not a positive multiple of LFV dimension " +
                      std::to_string(lfv_dim));
  }
  ModulationSpec spec;
  spec.layer_index = layer_index;
  spec.lfv_dim = lfv_dim;
  spec.group_size = units / lfv_dim;
  return spec;
}

Tensor modulate(const Tensor& layer_out, const Tensor& lfv,
                const ModulationSpec& spec) {
  if (layer_out.rank() != 2 || layer_out.cols() != spec.units()) {
    throw ShapeError("modulate: layer output " + ShapeString(layer_out.shape()) +
                     " does not have " + std::to_string(spec.units()) + " units");
  }
  const std::size_t T = layer_out.rows();
  if (LfvWidth(lfv, T, "modulate") != spec.lfv_dim) {
    throw ShapeError("modulate: lfv width does not match D = " +
                     std::to_string(spec.lfv_dim));
  }
  Tensor out(layer_out.shape());
  for (std::size_t t = 0; t < T; ++t) {
    const double* coef = LfvRow(lfv, t);
    for (std::size_t u = 0; u < spec.units(); ++u) {
      out(t, u) = layer_out(t, u) * coef[spec.group_of(u)];
    }
  }
  return out;
}

LfvBinaryGrads modulate_backward(const Tensor& layer_out, const Tensor& lfv,
                                 const ModulationSpec& spec,
                                 const Tensor& grad_out) {
  RequireShape(grad_out, layer_out.shape(), "modulate backward");
  LfvBinaryGrads grads{Tensor(layer_out.shape()), Tensor(lfv.shape())};
  const std::size_t T = layer_out.rows();
  for (std::size_t t = 0; t < T; ++t) {
    const double* coef = LfvRow(lfv, t);
    double* dcoef = lfv.rank() == 1 ? grads.lfv.raw()
                                    : grads.lfv.raw() + t * lfv.cols();
    for (std::size_t u = 0; u < spec.units(); ++u) {
      const std::size_t g = spec.group_of(u);
      grads.input(t, u) = grad_out(t, u) * coef[g];
      dcoef[g] += grad_out(t, u) * layer_out(t, u);
    }
  }
  return grads;
}

Tensor append_lfv(const Tensor& x, const Tensor& lfv) {
  if (x.rank() != 2) throw ShapeError("append_lfv: input must be [T x U]");
  const std::size_t T = x.rows(), U = x.cols();
  const std::size_t D = LfvWidth(lfv, T, "append_lfv");
  Tensor out = Tensor::Matrix(T, U + D);
  for (std::size_t t = 0; t < T; ++t) {
    std::copy_n(&x(t, 0), U, &out(t, 0));
    std::copy_n(LfvRow(lfv, t), D, &out(t, 0) + U);
  }
  return out;
}

LfvBinaryGrads append_lfv_backward(const Tensor& x, const Tensor& lfv,
                                   const Tensor& grad_out) {
  const std::size_t T = x.rows(), U = x.cols();
  const std::size_t D = LfvWidth(lfv, T, "append_lfv backward");
  RequireShape(grad_out, {T, U + D}, "append_lfv backward");
  LfvBinaryGrads grads{Tensor(x.shape()), Tensor(lfv.shape())};
  for (std::size_t t = 0; t < T; ++t) {
    std::copy_n(&grad_out(t, 0), U, &grads.input(t, 0));
    double* dl = lfv.rank() == 1 ? grads.lfv.raw() : grads.lfv.raw() + t * D;
    for (std::size_t d = 0; d < D; ++d) dl[d] += grad_out(t, U + d);
  }
  return grads;
}

}  // namespace lfv
