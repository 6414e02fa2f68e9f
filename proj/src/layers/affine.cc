// layers/affine.cc

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

#include "layers/affine.h"

#include "numerics/eigen_view.h"
#include "numerics/errors.h"
#include "numerics/ops.h"

namespace lfv {

AffineLayer::AffineLayer(const std::string& name, std::size_t in_dim,
                         std::size_t out_dim)
    : weight(name + ".weight", Tensor::Matrix(out_dim, in_dim)),
      bias(name + ".bias", Tensor::Vector(out_dim)) {}

void AffineLayer::Initialize(std::mt19937_64& rng, double scale) {
  fill_uniform(weight.value, scale, rng);
  bias.value.SetZero();
}

Tensor AffineLayer::Forward(const Tensor& x) const {
  if (x.rank() != 2 || x.cols() != in_dim()) {
    throw ShapeError("affine '" + weight.name + "': input " +
                     ShapeString(x.shape()) + ", expected width " +
                     std::to_string(in_dim()));
  }
  Tensor y = Tensor::Matrix(x.rows(), out_dim());
  auto ym = AsMatrix(y);
  ym.noalias() = AsMatrix(x) * AsMatrix(weight.value).transpose();
  ym.rowwise() += AsVector(bias.value).transpose();
  return y;
}

Tensor AffineLayer::Backward(const Tensor& x, const Tensor& grad_out) {
  RequireShape(grad_out, {x.rows(), out_dim()}, "affine backward");
  AsMatrix(weight.grad).noalias() +=
      AsMatrix(grad_out).transpose() * AsMatrix(x);
  AsVector(bias.grad) += AsMatrix(grad_out).colwise().sum().transpose();
  Tensor dx = Tensor::Matrix(x.rows(), in_dim());
  AsMatrix(dx).noalias() = AsMatrix(grad_out) * AsMatrix(weight.value);
  return dx;
}

}  // namespace lfv
