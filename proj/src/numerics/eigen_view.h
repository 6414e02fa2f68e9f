// numerics/eigen_view.h

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

#ifndef LFVCTC_NUMERICS_EIGEN_VIEW_H_
#define LFVCTC_NUMERICS_EIGEN_VIEW_H_

#include <Eigen/Core>

#include "numerics/tensor.h"

namespace lfv {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatrixMap = Eigen::Map<RowMatrix>;
using ConstMatrixMap = Eigen::Map<const RowMatrix>;
using VectorMap = Eigen::Map<Eigen::VectorXd>;
using ConstVectorMap = Eigen::Map<const Eigen::VectorXd>;

// Views a tensor's storage as rows x cols (row-major). The element count must
// match; callers are responsible for that.
inline MatrixMap AsMatrix(Tensor& t, std::size_t rows, std::size_t cols) {
  return MatrixMap(t.raw(), static_cast<Eigen::Index>(rows),
                   static_cast<Eigen::Index>(cols));
}
inline ConstMatrixMap AsMatrix(const Tensor& t, std::size_t rows,
                               std::size_t cols) {
  return ConstMatrixMap(t.raw(), static_cast<Eigen::Index>(rows),
                        static_cast<Eigen::Index>(cols));
}
inline MatrixMap AsMatrix(Tensor& t) { return AsMatrix(t, t.rows(), t.cols()); }
inline ConstMatrixMap AsMatrix(const Tensor& t) {
  return AsMatrix(t, t.rows(), t.cols());
}
inline VectorMap AsVector(Tensor& t) {
  return VectorMap(t.raw(), static_cast<Eigen::Index>(t.size()));
}
inline ConstVectorMap AsVector(const Tensor& t) {
  return ConstVectorMap(t.raw(), static_cast<Eigen::Index>(t.size()));
}

}  // namespace lfv

#endif  // LFVCTC_NUMERICS_EIGEN_VIEW_H_
