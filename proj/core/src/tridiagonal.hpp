// Copyright 2026 The eprbec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>

namespace eprbec::detail {

struct TridiagonalEigen {
    Eigen::VectorXd values;
    /// Column k is the eigenvector of values[k].
    Eigen::MatrixXd vectors;
};

/// Full eigendecomposition of a real symmetric tridiagonal matrix (LAPACK dstemr).
TridiagonalEigen eigen_tridiagonal(const Eigen::VectorXd &diagonal, const Eigen::VectorXd &off_diagonal);

}  // namespace eprbec::detail
