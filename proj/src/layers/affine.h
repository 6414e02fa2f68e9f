// layers/affine.h

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

#ifndef LFVCTC_LAYERS_AFFINE_H_
#define LFVCTC_LAYERS_AFFINE_H_

#include <random>
#include <string>

#include "numerics/optimizer.h"
#include "numerics/tensor.h"

namespace lfv {

// y = x W^T + b over the rows of x.
class AffineLayer {
 public:
  AffineLayer() = default;
  AffineLayer(const std::string& name, std::size_t in_dim, std::size_t out_dim);

  void Initialize(std::mt19937_64& rng, double scale);

  Tensor Forward(const Tensor& x) const;
  // Accumulates weight/bias gradients and returns dL/dx.
  Tensor Backward(const Tensor& x, const Tensor& grad_out);

  std::size_t in_dim() const { return weight.value.cols(); }
  std::size_t out_dim() const { return weight.value.rows(); }
  void CollectParameters(ParameterList& out) {
    out.push_back(&weight);
    out.push_back(&bias);
  }

  Parameter weight;  // [out x in]
  Parameter bias;    // [out]
};

}  // namespace lfv

#endif  // LFVCTC_LAYERS_AFFINE_H_
