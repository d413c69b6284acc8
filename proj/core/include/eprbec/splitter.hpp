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

#include <compare>
#include <map>

#include <Eigen/Dense>

#include "eprbec/spin_core.hpp"

namespace eprbec {

inline constexpr int kDefaultExactLimit = 16;

/// Occupations of |1A>, |2A>, |1B>, |2B>.
struct FockKey {
    int n1A = 0;
    int n2A = 0;
    int n1B = 0;
    int n2B = 0;

    int total() const {
        return n1A + n2A + n1B + n2B;
    }
    auto operator<=>(const FockKey &) const = default;
};

/// Four-mode state after splitting; every key carries exactly n_atoms_total atoms.
class BipartiteFockState {
   public:
    using Map = std::map<FockKey, cplx>;

    /// Throws InvalidArgument if a key violates the number constraint or the
    /// state is not normalized within 1e-12.
    BipartiteFockState(int n_atoms_total, Map amplitudes);

    int n_atoms_total() const {
        return n_atoms_total_;
    }
    const Map &amplitudes() const {
        return amplitudes_;
    }
    cplx amplitude(const FockKey &key) const;
    double norm() const;

   private:
    int n_atoms_total_;
    Map amplitudes_;
};

/// Moments of the two collective spins. Index 0..2 is (Sx, Sy, Sz) of A, 3..5 of B.
struct JointMoments {
    Eigen::Matrix<double, 6, 1> mean = Eigen::Matrix<double, 6, 1>::Zero();
    Eigen::Matrix<double, 6, 6> covariance = Eigen::Matrix<double, 6, 6>::Zero();
    double n_mean_A = 0.0;
    double n_mean_B = 0.0;
    double n_var_A = 0.0;
    double n_var_B = 0.0;
    /// Cov(N_A, S_i) for the six spin components; Cov(N_B, .) is its negative
    /// because the total atom number is fixed.
    Eigen::Matrix<double, 6, 1> number_spin_cov = Eigen::Matrix<double, 6, 1>::Zero();

    double n_total() const {
        return n_mean_A + n_mean_B;
    }
    Vec3 mean_A() const {
        return mean.head<3>();
    }
    Vec3 mean_B() const {
        return mean.tail<3>();
    }
};

/// Independent beam splitters on both internal states:
///   |n1, n2> -> sum_{k1,k2} sqrt(C(n1,k1) C(n2,k2)) t^{n1+n2-k1-k2} r^{k1+k2} |n1-k1, n2-k2; k1, k2>
/// with t = sqrt(transmission), r = i sqrt(1 - transmission). Transmission is
/// the fraction of atoms that stays in A. Throws SizeLimitError above `limit`.
BipartiteFockState split_exact(const DickeState &state, double transmission, int limit = kDefaultExactLimit);

/// Closed-form partition relations for a lossless split with A-fraction p = 1 - q:
///   <S^A> = p<S>, <S^B> = q<S>
///   Cov(S_i^A, S_j^A) = p^2 C_ij + p q delta_ij N/4
///   Cov(S_i^B, S_j^B) = q^2 C_ij + p q delta_ij N/4
///   Cov(S_i^A, S_j^B) = p q (C_ij - delta_ij N/4)
///   Var(N_A) = p q N, Cov(N_A, S^A) = p q <S>, Cov(N_A, S^B) = -p q <S>
/// with C the symmetrized covariance of the input spin. Throws InvalidArgument
/// unless 0 < p < 1.
JointMoments split_moments(const SpinMoments &moments, double transmission);

/// Exact moments by operator application on the four-mode amplitudes.
JointMoments moments_from_bipartite(const BipartiteFockState &state);

/// Product state with all atoms of `state` in A and B empty.
BipartiteFockState embed_in_A(const DickeState &state);

}  // namespace eprbec
