// layers/lfv_integration.h

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

#ifndef LFVCTC_LAYERS_LFV_INTEGRATION_H_
#define LFVCTC_LAYERS_LFV_INTEGRATION_H_

#include <cstddef>

#include "numerics/tensor.h"

namespace lfv {

// Partition of a hidden layer's 2H outputs into lfv_dim equal groups of
// consecutive units; unit u is scaled by LFV dimension u / group_size.
struct ModulationSpec {
  int layer_index = 2;  // 1-based BiLSTM layer whose output is modulated
  std::size_t lfv_dim = 0;
  std::size_t group_size = 0;

  std::size_t units() const { return lfv_dim * group_size; }
  std::size_t group_of(std::size_t unit) const { return unit / group_size; }
};

// Throws ConfigError unless `units` is a positive multiple of `lfv_dim`.
ModulationSpec make_modulation_spec(std::size_t units, std::size_t lfv_dim,
                                    int layer_index = 2);

// out[t, u] = x[t, u] * lfv[t or -, group_of(u)]. `lfv` is either [D]
// (utterance-level, broadcast over frames) or [T x D] (per frame).
Tensor modulate(const Tensor& layer_out, const Tensor& lfv,
                const ModulationSpec& spec);

struct LfvBinaryGrads {
  Tensor input;  // dL/d(layer input)
  Tensor lfv;    // dL/d(lfv), same shape as the lfv argument
};

LfvBinaryGrads modulate_backward(const Tensor& layer_out, const Tensor& lfv,
                                 const ModulationSpec& spec,
                                 const Tensor& grad_out);

// Concatenates the LFV to every frame: [T x U] + [D] or [T x D] -> [T x (U+D)].
Tensor append_lfv(const Tensor& x, const Tensor& lfv);

LfvBinaryGrads append_lfv_backward(const Tensor& x, const Tensor& lfv,
                                   const Tensor& grad_out);

}  // namespace lfv

#endif  // LFVCTC_LAYERS_LFV_INTEGRATION_H_
