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

#include "eprbec/spin_core.hpp"

#include <cmath>
#include <string>

#include "eprbec/errors.hpp"
#include "tridiagonal.hpp"

namespace eprbec {

namespace {

constexpr double kNormTolerance = 1e-12;
constexpr double kAxisTolerance = 1e-12;

void require_unit_axis(const Vec3 &axis) {
    if (!axis.allFinite() || std::abs(axis.norm() - 1.0) > kAxisTolerance) {
        throw InvalidArgument("rotation axis must be a unit vector");
    }
}

/// <J, m+1| S+ |J, m> for basis index k (m = k - J).
double raising_element(double j, int k) {
    double m = k - j;
    return std::sqrt(std::max(0.0, j * (j + 1.0) - m * (m + 1.0)));
}

struct GaugedGenerator {
    double azimuth = 0.0;
    bool diagonal = false;
    Eigen::VectorXd m_values;
    double axial = 0.0;
    detail::TridiagonalEigen eig;
};

/// axis.S = D T D^dag with D = diag(exp(-i azimuth k)) and T real tridiagonal.
GaugedGenerator gauge_generator(int n_atoms, const Vec3 &axis) {
    require_unit_axis(axis);
    GaugedGenerator g;
    const int dim = n_atoms + 1;
    const double j = 0.5 * n_atoms;
    const double transverse = std::hypot(axis.x(), axis.y());
    g.axial = axis.z();
    g.m_values.resize(dim);
    for (int k = 0; k < dim; ++k) {
        g.m_values[k] = k - j;
    }
    if (transverse < 1e-300) {
        g.diagonal = true;
        return g;
    }
    g.azimuth = std::atan2(axis.y(), axis.x());
    Eigen::VectorXd diag = axis.z() * g.m_values;
    Eigen::VectorXd off(dim - 1);
    for (int k = 0; k + 1 < dim; ++k) {
        off[k] = 0.5 * transverse * raising_element(j, k);
    }
    g.eig = detail::eigen_tridiagonal(diag, off);
    return g;
}

}  // namespace

DickeState::DickeState(int n_atoms, Eigen::VectorXcd amplitudes)
    : n_atoms_(n_atoms), amplitudes_(std::move(amplitudes)) {
    if (n_atoms_ < 1) {
        throw InvalidArgument("DickeState: n_atoms must be >= 1");
    }
    if (amplitudes_.size() != n_atoms_ + 1) {
        throw InvalidArgument(
            "DickeState: expected " + std::to_string(n_atoms_ + 1) + " amplitudes, got " +
            std::to_string(amplitudes_.size()));
    }
    if (!amplitudes_.allFinite() || std::abs(amplitudes_.squaredNorm() - 1.0) > kNormTolerance) {
        throw InvalidArgument("DickeState: amplitudes are not normalized");
    }
}

DickeState DickeState::normalized(int n_atoms, Eigen::VectorXcd amplitudes) {
    double n = amplitudes.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw InvalidArgument("DickeState: cannot normalize a zero or non-finite vector");
    }
    amplitudes /= n;
    return DickeState(n_atoms, std::move(amplitudes));
}

double DickeState::norm() const {
    return amplitudes_.norm();
}

DickeState make_coherent_state(int n_atoms, double polar, double azimuth) {
    if (n_atoms < 1) {
        throw InvalidArgument("make_coherent_state: n_atoms must be >= 1");
    }
    const double c = std::cos(0.5 * polar);
    const double s = std::sin(0.5 * polar);
    const double log_n_fact = std::lgamma(n_atoms + 1.0);
    Eigen::VectorXcd amps(n_atoms + 1);
    for (int k = 0; k <= n_atoms; ++k) {
        const int up = k;
        const int down = n_atoms - k;
        if ((up > 0 && c == 0.0) || (down > 0 && s == 0.0)) {
            amps[k] = 0.0;
            continue;
        }
        double log_mag = 0.5 * (log_n_fact - std::lgamma(up + 1.0) - std::lgamma(down + 1.0));
        double sign = 1.0;
        if (up > 0) {
            log_mag += up * std::log(std::abs(c));
            if (c < 0 && up % 2 == 1) sign = -sign;
        }
        if (down > 0) {
            log_mag += down * std::log(std::abs(s));
            if (s < 0 && down % 2 == 1) sign = -sign;
        }
        amps[k] = sign * std::exp(log_mag) * std::polar(1.0, down * azimuth);
    }
    return DickeState::normalized(n_atoms, std::move(amps));
}

DickeState make_dicke_state(int n_atoms, int n_up) {
    if (n_atoms < 1 || n_up < 0 || n_up > n_atoms) {
        throw InvalidArgument("make_dicke_state: need 0 <= n_up <= n_atoms, n_atoms >= 1");
    }
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(n_atoms + 1);
    amps[n_up] = 1.0;
    return DickeState(n_atoms, std::move(amps));
}

DickeState apply_rotation(const DickeState &state, const Vec3 &axis, double angle) {
    GaugedGenerator g = gauge_generator(state.n_atoms(), axis);
    const int dim = state.n_atoms() + 1;
    Eigen::VectorXcd out(dim);
    if (g.diagonal) {
        for (int k = 0; k < dim; ++k) {
            out[k] = state.amplitude(k) * std::polar(1.0, -angle * g.axial * g.m_values[k]);
        }
        return DickeState::normalized(state.n_atoms(), std::move(out));
    }
    // psi -> D V exp(-i angle Lambda) V^T D^dag psi, with V real.
    Eigen::VectorXcd gauged(dim);
    for (int k = 0; k < dim; ++k) {
        gauged[k] = state.amplitude(k) * std::polar(1.0, g.azimuth * k);
    }
    const Eigen::MatrixXd &v = g.eig.vectors;
    Eigen::VectorXd re = v.transpose() * gauged.real();
    Eigen::VectorXd im = v.transpose() * gauged.imag();
    for (int j = 0; j < dim; ++j) {
        cplx coeff(re[j], im[j]);
        coeff *= std::polar(1.0, -angle * g.eig.values[j]);
        re[j] = coeff.real();
        im[j] = coeff.imag();
    }
    Eigen::VectorXd back_re = v * re;
    Eigen::VectorXd back_im = v * im;
    for (int k = 0; k < dim; ++k) {
        out[k] = cplx(back_re[k], back_im[k]) * std::polar(1.0, -g.azimuth * k);
    }
    return DickeState::normalized(state.n_atoms(), std::move(out));
}

Eigen::MatrixXcd rotation_matrix(int n_atoms, const Vec3 &axis, double angle) {
    if (n_atoms < 0) {
        throw InvalidArgument("rotation_matrix: n_atoms must be >= 0");
    }
    const int dim = n_atoms + 1;
    if (n_atoms == 0) {
        require_unit_axis(axis);
        return Eigen::MatrixXcd::Identity(1, 1);
    }
    GaugedGenerator g = gauge_generator(n_atoms, axis);
    Eigen::MatrixXcd u(dim, dim);
    if (g.diagonal) {
        u.setZero();
        for (int k = 0; k < dim; ++k) {
            u(k, k) = std::polar(1.0, -angle * g.axial * g.m_values[k]);
        }
        return u;
    }
    Eigen::VectorXcd phases(dim);
    for (int j = 0; j < dim; ++j) {
        phases[j] = std::polar(1.0, -angle * g.eig.values[j]);
    }
    Eigen::MatrixXcd v = g.eig.vectors.cast<cplx>();
    u = v * phases.asDiagonal() * v.transpose();
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) {
            u(r, c) *= std::polar(1.0, -g.azimuth * (r - c));
        }
    }
    return u;
}

DickeState apply_oat(const DickeState &state, const OATSpec &spec) {
    if (!std::isfinite(spec.chi_t) || !std::isfinite(spec.rotation_angle)) {
        throw InvalidArgument("apply_oat: chi_t and rotation angle must be finite");
    }
    require_unit_axis(spec.rotation_axis);
    const int dim = state.n_atoms() + 1;
    Eigen::VectorXcd twisted(dim);
    for (int k = 0; k < dim; ++k) {
        double m = state.m_of(k);
        twisted[k] = state.amplitude(k) * std::polar(1.0, -spec.chi_t * m * m);
    }
    DickeState out = DickeState::normalized(state.n_atoms(), std::move(twisted));
    if (spec.rotation_angle == 0.0) {
        return out;
    }
    return apply_rotation(out, spec.rotation_axis, spec.rotation_angle);
}

SpinMoments moments_from_state(const DickeState &state) {
    const int dim = state.n_atoms() + 1;
    const double j = state.total_spin();
    const Eigen::VectorXcd &psi = state.amplitudes();
    Eigen::VectorXcd sz(dim), sx(dim), sy(dim);
    for (int k = 0; k < dim; ++k) {
        sz[k] = state.m_of(k) * psi[k];
    }
    // S+ psi and S- psi, then Sx = (S+ + S-)/2, Sy = (S+ - S-)/(2i).
    Eigen::VectorXcd up = Eigen::VectorXcd::Zero(dim);
    Eigen::VectorXcd down = Eigen::VectorXcd::Zero(dim);
    for (int k = 0; k + 1 < dim; ++k) {
        double a = raising_element(j, k);
        up[k + 1] += a * psi[k];
        down[k] += a * psi[k + 1];
    }
    sx = 0.5 * (up + down);
    sy = cplx(0.0, -0.5) * (up - down);

    const Eigen::VectorXcd *ops[3] = {&sx, &sy, &sz};
    SpinMoments out;
    out.n_atoms = state.n_atoms();
    for (int a = 0; a < 3; ++a) {
        out.mean[a] = psi.dot(*ops[a]).real();
        for (int b = a; b < 3; ++b) {
            double v = ops[a]->dot(*ops[b]).real();
            out.second_moments(a, b) = v;
            out.second_moments(b, a) = v;
        }
    }
    return out;
}

Mat3 rotation_matrix_3d(const Vec3 &axis, double angle) {
    require_unit_axis(axis);
    return Eigen::AngleAxisd(angle, axis).toRotationMatrix();
}

SpinMoments rotate_moments(const SpinMoments &moments, const Vec3 &axis, double angle) {
    Mat3 r = rotation_matrix_3d(axis, angle);
    SpinMoments out = moments;
    out.mean = r * moments.mean;
    out.second_moments = r * moments.second_moments * r.transpose();
    return out;
}

double wineland_parameter(const SpinMoments &moments, const Vec3 &squeezed_axis) {
    double length_sq = moments.mean.squaredNorm();
    if (!(length_sq > 0.0)) {
        throw UndefinedValue("wineland_parameter: mean spin is zero");
    }
    Vec3 n = squeezed_axis.normalized();
    double xi2 = moments.n_atoms * moments.variance_along(n) / length_sq;
    return 10.0 * std::log10(xi2);
}

namespace {

/// Orthonormal pair spanning the plane perpendicular to unit vector u.
std::pair<Vec3, Vec3> perpendicular_frame(const Vec3 &u) {
    Vec3 seed = std::abs(u.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    Vec3 e1 = (seed - seed.dot(u) * u).normalized();
    Vec3 e2 = u.cross(e1);
    return {e1, e2};
}

}  // namespace

Vec3 squeezing_axis(const SpinMoments &moments) {
    double length = moments.mean.norm();
    if (!(length > 0.0)) {
        throw UndefinedValue("squeezing_axis: mean spin is zero");
    }
    Vec3 u = moments.mean / length;
    auto [e1, e2] = perpendicular_frame(u);
    Mat3 cov = moments.covariance();
    Eigen::Matrix2d plane;
    plane << e1.dot(cov * e1), e1.dot(cov * e2), e2.dot(cov * e1), e2.dot(cov * e2);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(plane);
    Eigen::Vector2d v = es.eigenvectors().col(0);
    return (v[0] * e1 + v[1] * e2).normalized();
}

double min_wineland_parameter(const SpinMoments &moments) {
    return wineland_parameter(moments, squeezing_axis(moments));
}

double squeezing_alignment_angle(const SpinMoments &moments, const Vec3 &target) {
    Vec3 u = moments.mean.normalized();
    Vec3 s = squeezing_axis(moments);
    Vec3 t = target - target.dot(u) * u;
    if (!(t.norm() > 1e-12)) {
        throw InvalidArgument("squeezing_alignment_angle: target is parallel to the mean spin");
    }
    t.normalize();
    double beta = std::atan2(u.dot(s.cross(t)), s.dot(t));
    // The squeezing axis is only defined up to sign.
    if (beta > 0.5 * kPi) {
        beta -= kPi;
    } else if (beta < -0.5 * kPi) {
        beta += kPi;
    }
    return beta;
}

OATSpec find_oat_for_squeezing(int n_atoms, double target_db) {
    if (!(target_db < 0.0)) {
        throw InvalidArgument("find_oat_for_squeezing: target must be negative dB");
    }
    const DickeState css = make_coherent_state(n_atoms, 0.5 * kPi, 0.0);
    auto squeezing_db = [&](double chi) {
        OATSpec spec;
        spec.chi_t = chi;
        return min_wineland_parameter(moments_from_state(apply_oat(css, spec)));
    };

    // First grid point at or below target on a log scan; bracket the crossing.
    constexpr int kScan = 240;
    const double lo_exp = -8.0;
    const double hi_exp = 0.0;
    double prev = 0.0;
    double hit = -1.0;
    for (int i = 0; i <= kScan; ++i) {
        double chi = std::pow(10.0, lo_exp + (hi_exp - lo_exp) * i / kScan);
        if (squeezing_db(chi) <= target_db) {
            hit = chi;
            break;
        }
        prev = chi;
    }
    if (hit < 0.0) {
        throw InvalidArgument(
            "find_oat_for_squeezing: " + std::to_string(target_db) + " dB is not reachable for N=" +
            std::to_string(n_atoms));
    }

    // f is monotone on [prev, hit], so |f - target| is unimodal there.
    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = prev;
    double b = hit;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = std::abs(squeezing_db(c) - target_db);
    double fd = std::abs(squeezing_db(d) - target_db);
    for (int it = 0; it < 200 && (b - a) > 1e-15 * b; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = std::abs(squeezing_db(c) - target_db);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = std::abs(squeezing_db(d) - target_db);
        }
    }

    OATSpec spec;
    spec.chi_t = 0.5 * (a + b);
    SpinMoments twisted = moments_from_state(apply_oat(css, spec));
    spec.rotation_axis = twisted.mean.normalized();
    spec.rotation_angle = squeezing_alignment_angle(twisted, Vec3::UnitZ());
    return spec;
}

double fidelity(const DickeState &a, const DickeState &b) {
    if (a.n_atoms() != b.n_atoms()) {
        throw InvalidArgument("fidelity: atom numbers differ");
    }
    return std::norm(a.amplitudes().dot(b.amplitudes()));
}

}  // namespace eprbec
