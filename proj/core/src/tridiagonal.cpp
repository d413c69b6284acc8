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

#include "tridiagonal.hpp"

#include <lapacke.h>

#include <string>
#include <vector>

#include "eprbec/errors.hpp"

namespace eprbec::detail {

TridiagonalEigen eigen_tridiagonal(const Eigen::VectorXd &diagonal, const Eigen::VectorXd &off_diagonal) {
    const lapack_int n = static_cast<lapack_int>(diagonal.size());
    if (n == 0 || off_diagonal.size() + 1 != diagonal.size()) {
        throw InvalidArgument("eigen_tridiagonal: off-diagonal must have size n-1");
    }
    TridiagonalEigen out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    if (n == 1) {
        out.values[0] = diagonal[0];
        out.vectors(0, 0) = 1.0;
        return out;
    }

    std::vector<double> d(diagonal.data(), diagonal.data() + n);
    // dstemr wants a workspace of length n for e.
    std::vector<double> e(n, 0.0);
    for (lapack_int k = 0; k + 1 < n; ++k) {
        e[k] = off_diagonal[k];
    }
    std::vector<lapack_int> support(2 * static_cast<size_t>(n));
    lapack_int found = 0;
    lapack_logical tryrac = 1;
    lapack_int info = LAPACKE_dstemr(
        LAPACK_COL_MAJOR, 'V', 'A', n, d.data(), e.data(), 0.0, 0.0, 0, 0, &found, out.values.data(),
        out.vectors.data(), n, n, support.data(), &tryrac);
    if (info != 0 || found != n) {
        throw std::runtime_error("LAPACKE_dstemr failed with info=" + std::to_string(info));
    }
    return out;
}

}  // namespace eprbec::detail
