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

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace eprbec {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kPi = 3.14159265358979323846;

/// Pure symmetric state of N two-level atoms in the Dicke basis.
///
/// Index k = 0..N holds the amplitude of |J, m> with J = N/2 and m = k - J, so
/// k is also the occupation of the spin-up state |1>. Ordering is m ascending.
class DickeState {
   public:
    /// Throws InvalidArgument unless amplitudes.size() == n_atoms + 1 and the
    /// state is normalized within 1e-12.
    DickeState(int n_atoms, Eigen::VectorXcd amplitudes);

    /// Same as the constructor but rescales the amplitudes to unit norm first.
    static DickeState normalized(int n_atoms, Eigen::VectorXcd amplitudes);

    int n_atoms() const {
        return n_atoms_;
    }
    double total_spin() const {
        return 0.5 * n_atoms_;
    }
    /// Sz eigenvalue of basis index k.
    double m_of(int k) const {
        return k - total_spin();
    }
    const Eigen::VectorXcd &amplitudes() const {
        return amplitudes_;
    }
    cplx amplitude(int k) const {
        return amplitudes_[k];
    }
    double norm() const;

   private:
    int n_atoms_;
    Eigen::VectorXcd amplitudes_;
};

/// First and symmetrized second moments of a single collective spin.
struct SpinMoments {
    Vec3 mean = Vec3::Zero();
    /// (1/2)<S_i S_j + S_j S_i>.
    Mat3 second_moments = Mat3::Zero();
    int n_atoms = 0;

    Mat3 covariance() const {
        return second_moments - mean * mean.transpose();
    }
    double variance_along(const Vec3 &axis) const {
        return axis.dot(covariance() * axis);
    }
};

/// One-axis twisting exp(-i chi_t Sz^2) followed by a rotation.
struct OATSpec {
    double chi_t = 0.0;
    Vec3 rotation_axis = Vec3::UnitX();
    double rotation_angle = 0.0;
};

/// Product state of N spins along (polar, azimuth):
///   c_m = sqrt(C(N, J+m)) cos^{J+m}(polar/2) sin^{J-m}(polar/2) exp(i (J-m) azimuth),
/// so <S> = (N/2)(sin polar cos azimuth, sin polar sin azimuth, cos polar).
DickeState make_coherent_state(int n_atoms, double polar, double azimuth);

/// Dicke basis state |J, m> with m = n_up - N/2.
DickeState make_dicke_state(int n_atoms, int n_up);

/// exp(-i angle axis.S) |state>. The generator is diagonalized as a real
/// tridiagonal matrix after a diagonal phase gauge; no series expansion.
DickeState apply_rotation(const DickeState &state, const Vec3 &axis, double angle);

/// Dense (N+1)x(N+1) matrix of exp(-i angle axis.S) in the Dicke basis.
Eigen::MatrixXcd rotation_matrix(int n_atoms, const Vec3 &axis, double angle);

/// amplitude_m *= exp(-i chi_t m^2), then the post-rotation.
DickeState apply_oat(const DickeState &state, const OATSpec &spec);

/// Exact expectation values by sparse application of Sz, S+ and S-.
SpinMoments moments_from_state(const DickeState &state);

/// SO(3) matrix of the active rotation by angle about axis. With U =
/// exp(-i angle axis.S), U^dag S_i U = sum_j R_ij S_j.
Mat3 rotation_matrix_3d(const Vec3 &axis, double angle);

/// Moments of U|psi> given moments of |psi>.
SpinMoments rotate_moments(const SpinMoments &moments, const Vec3 &axis, double angle);

/// 10 log10(N Var(n.S) / |<S>|^2). Throws UndefinedValue for zero mean spin.
double wineland_parameter(const SpinMoments &moments, const Vec3 &squeezed_axis);

/// Direction perpendicular to the mean spin with the smallest variance.
Vec3 squeezing_axis(const SpinMoments &moments);

/// Wineland parameter along squeezing_axis().
double min_wineland_parameter(const SpinMoments &moments);

/// Angle of the rotation about the mean-spin axis that maps squeezing_axis()
/// onto the component of `target` perpendicular to the mean spin.
double squeezing_alignment_angle(const SpinMoments &moments, const Vec3 &target);

/// Finds the smallest chi_t for which the x-polarized coherent state reaches
/// `target_db` of squeezing, plus the rotation about x that moves the squeezed
/// quadrature onto z. Golden-section search on a bracket located by a
/// logarithmic scan. Throws InvalidArgument if the target is unreachable.
OATSpec find_oat_for_squeezing(int n_atoms, double target_db);

/// Fidelity |<a|b>|^2.
double fidelity(const DickeState &a, const DickeState &b);

}  // namespace eprbec
