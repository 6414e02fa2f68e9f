// numerics/tensor.h

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

#ifndef LFVCTC_NUMERICS_TENSOR_H_
#define LFVCTC_NUMERICS_TENSOR_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace lfv {

// Dense row-major array of doubles. Rank 1, 2 and 3 are what the models use;
// higher ranks are representable but have no dedicated accessors.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> shape, double fill = 0.0);
  Tensor(std::vector<std::size_t> shape, std::vector<double> data);

  static Tensor Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) {
    return Tensor({rows, cols}, fill);
  }
  static Tensor Vector(std::size_t n, double fill = 0.0) {
    return Tensor({n}, fill);
  }

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }
  std::size_t dim(std::size_t axis) const;

  // Rank-2 views. Calling these on another rank throws ShapeError.
  std::size_t rows() const;
  std::size_t cols() const;

  double& operator()(std::size_t r, std::size_t c) {
    return data_[r * shape_[1] + c];
  }
  const double& operator()(std::size_t r, std::size_t c) const {
    return data_[r * shape_[1] + c];
  }
  double& operator()(std::size_t i, std::size_t j, std::size_t k) {
    return data_[(i * shape_[1] + j) * shape_[2] + k];
  }
  const double& operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[(i * shape_[1] + j) * shape_[2] + k];
  }
  double& operator[](std::size_t i) { return data_[i]; }
  const double& operator[](std::size_t i) const { return data_[i]; }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  double* raw() { return data_.data(); }
  const double* raw() const { return data_.data(); }

  // Row r of a rank-2 tensor (or the leading-axis slice of any rank >= 2).
  std::span<double> row(std::size_t r);
  std::span<const double> row(std::size_t r) const;

  void Fill(double value);
  void SetZero() { Fill(0.0); }
  bool AllFinite() const;
  bool SameShape(const Tensor& other) const { return shape_ == other.shape_; }

  // Same data, new shape with equal element count.
  Tensor Reshaped(std::vector<std::size_t> shape) const;

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> data_;
};

std::string ShapeString(const std::vector<std::size_t>& shape);

// Throws ShapeError with `context` when the shapes differ.
void RequireShape(const Tensor& t, const std::vector<std::size_t>& shape,
                  const std::string& context);

}  // namespace lfv

#endif  // LFVCTC_NUMERICS_TENSOR_H_
