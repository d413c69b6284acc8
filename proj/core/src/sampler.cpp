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

#include "eprbec/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "eprbec/errors.hpp"
#include "eprbec/rng.hpp"

namespace eprbec {

namespace {

struct Readout {
    Vec3 axis;
    double angle;
};

/// Rotation mapping the basis direction onto +z (active convention).
Readout readout_rotation(Basis basis) {
    switch (basis) {
        case Basis::x:
            return {Vec3::UnitY(), -0.5 * kPi};
        case Basis::neg_x:
            return {Vec3::UnitY(), 0.5 * kPi};
        case Basis::y:
            return {Vec3::UnitX(), 0.5 * kPi};
        case Basis::z:
            break;
    }
    return {Vec3::UnitZ(), 0.0};
}

struct ShotNoise {
    double delta_t = 0.0;
    double detection[4] = {0.0, 0.0, 0.0, 0.0};
};

void finish_counts(ShotRecord &rec, const NoiseModel &noise, const double detection[4]) {
    if (is_x_basis(rec.setting.basis_A)) {
        rec.n1A *= 1.0 - noise.detectivity_sx_drop;
        rec.n2A *= 1.0 - noise.detectivity_sx_drop;
    }
    if (is_x_basis(rec.setting.basis_B)) {
        rec.n1B *= 1.0 - noise.detectivity_sx_drop;
        rec.n2B *= 1.0 - noise.detectivity_sx_drop;
    }
    double drift = noise.drift_b_per_shot * static_cast<double>(rec.shot_id);
    rec.n1B += drift;
    rec.n2B -= drift;
    rec.n1A += noise.detection_sigma * detection[0];
    rec.n2A += noise.detection_sigma * detection[1];
    rec.n1B += noise.detection_sigma * detection[2];
    rec.n2B += noise.detection_sigma * detection[3];
}

void validate_shot_request(int n_shots, int64_t first_shot_id) {
    if (n_shots < 0) {
        throw InvalidArgument("n_shots must be non-negative");
    }
    if (first_shot_id < 0) {
        throw InvalidArgument("shot ids must be non-negative");
    }
}

/// Amplitudes grouped by N_A: sector[a](n1A, n1B).
using Sectors = std::vector<Eigen::MatrixXcd>;

Sectors to_sectors(const BipartiteFockState &state) {
    const int n = state.n_atoms_total();
    Sectors sectors(n + 1);
    for (int a = 0; a <= n; ++a) {
        sectors[a] = Eigen::MatrixXcd::Zero(a + 1, n - a + 1);
    }
    for (const auto &[key, amp] : state.amplitudes()) {
        sectors[key.n1A + key.n2A](key.n1A, key.n1B) = amp;
    }
    return sectors;
}

struct Outcome {
    int a;
    int n1A;
    int n1B;
};

struct Distribution {
    std::vector<double> cdf;
    std::vector<Outcome> outcomes;

    Outcome draw(double u) const {
        double target = u * cdf.back();
        auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
        size_t idx = std::min<size_t>(static_cast<size_t>(it - cdf.begin()), cdf.size() - 1);
        return outcomes[idx];
    }
};

Distribution distribution_of(const Sectors &sectors) {
    Distribution d;
    double acc = 0.0;
    for (int a = 0; a < static_cast<int>(sectors.size()); ++a) {
        const auto &m = sectors[a];
        for (int i = 0; i < m.rows(); ++i) {
            for (int k = 0; k < m.cols(); ++k) {
                double p = std::norm(m(i, k));
                if (p <= 0.0) continue;
                acc += p;
                d.cdf.push_back(acc);
                d.outcomes.push_back({a, i, k});
            }
        }
    }
    return d;
}

}  // namespace

std::string_view to_string(Basis basis) {
    switch (basis) {
        case Basis::x:
            return "x";
        case Basis::y:
            return "y";
        case Basis::z:
            return "z";
        case Basis::neg_x:
            return "-x";
    }
    return "?";
}

Basis parse_basis(std::string_view text) {
    if (text == "x" || text == "+x") return Basis::x;
    if (text == "y") return Basis::y;
    if (text == "z") return Basis::z;
    if (text == "-x") return Basis::neg_x;
    throw InvalidArgument("unknown basis '" + std::string(text) + "' (expected x, y, z or -x)");
}

Vec3 basis_direction(Basis basis) {
    switch (basis) {
        case Basis::x:
            return Vec3::UnitX();
        case Basis::neg_x:
            return -Vec3::UnitX();
        case Basis::y:
            return Vec3::UnitY();
        case Basis::z:
            break;
    }
    return Vec3::UnitZ();
}

bool is_x_basis(Basis basis) {
    return basis == Basis::x || basis == Basis::neg_x;
}

void NoiseModel::validate() const {
    const double fields[] = {detection_sigma,        jitter_sigma_dt,     omega_rf,         contrast,
                             anti_squeeze_excess_db, detectivity_sx_drop, drift_b_per_shot};
    for (double f : fields) {
        if (!std::isfinite(f)) {
            throw InvalidArgument("noise model fields must be finite");
        }
    }
    if (detection_sigma < 0.0) throw InvalidArgument("detection_sigma must be >= 0");
    if (jitter_sigma_dt < 0.0) throw InvalidArgument("jitter_sigma_dt must be >= 0");
    if (!(contrast > 0.0 && contrast <= 1.0)) throw InvalidArgument("contrast must lie in (0, 1]");
    if (anti_squeeze_excess_db < 0.0) throw InvalidArgument("anti_squeeze_excess_db must be >= 0");
    if (!(detectivity_sx_drop >= 0.0 && detectivity_sx_drop < 1.0)) {
        throw InvalidArgument("detectivity_sx_drop must lie in [0, 1)");
    }
}

Vec3 measured_direction_B(Basis basis, double theta, double jitter_phase) {
    Vec3 d = basis_direction(basis);
    if (jitter_phase != 0.0) {
        d = rotation_matrix_3d(Vec3::UnitZ(), -jitter_phase) * d;
    }
    if (theta != 0.0) {
        d = rotation_matrix_3d(Vec3::UnitX(), -theta) * d;
    }
    return d;
}

std::vector<ShotRecord> sample_exact(
    const BipartiteFockState &state,
    const MeasurementSetting &setting,
    const NoiseModel &noise,
    int n_shots,
    uint64_t seed,
    int64_t first_shot_id,
    int limit) {
    noise.validate();
    validate_shot_request(n_shots, first_shot_id);
    const int n = state.n_atoms_total();
    if (n > limit) {
        throw SizeLimitError(
            "sample_exact: N=" + std::to_string(n) + " exceeds the exact-engine limit of " + std::to_string(limit) +
            "; use sample_gaussian");
    }

    Sectors sectors = to_sectors(state);
    const Readout read_a = readout_rotation(setting.basis_A);
    const Readout read_b = readout_rotation(setting.basis_B);
    std::vector<Eigen::MatrixXcd> readout_b(n + 1);
    for (int a = 0; a <= n; ++a) {
        const int b = n - a;
        if (read_a.angle != 0.0) {
            sectors[a] = rotation_matrix(a, read_a.axis, read_a.angle) * sectors[a];
        }
        if (setting.theta_B != 0.0) {
            sectors[a] = sectors[a] * rotation_matrix(b, Vec3::UnitX(), setting.theta_B).transpose();
        }
        readout_b[a] = rotation_matrix(b, read_b.axis, read_b.angle).transpose();
    }

    // Jitter rotates B about z before its readout pulse; for a z readout the
    // phase does not change any probability.
    const bool per_shot = setting.basis_B != Basis::z && noise.jitter_phase_sigma() > 0.0;
    Distribution fixed;
    if (!per_shot) {
        Sectors rotated = sectors;
        for (int a = 0; a <= n; ++a) {
            rotated[a] = rotated[a] * readout_b[a];
        }
        fixed = distribution_of(rotated);
    }

    std::vector<ShotRecord> out;
    out.reserve(static_cast<size_t>(n_shots));
    for (int i = 0; i < n_shots; ++i) {
        ShotRecord rec;
        rec.shot_id = first_shot_id + i;
        rec.setting = setting;
        rec.seed = derive_seed(seed, stream::shots, static_cast<uint64_t>(rec.shot_id));
        Rng rng(rec.seed);
        // Fresh distributions per shot: they cache draws across calls.
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::uniform_real_distribution<double> uniform(0.0, 1.0);
        rec.delta_t = noise.jitter_sigma_dt * gauss(rng);
        double u = uniform(rng);

        Outcome o;
        if (per_shot) {
            const double phase = noise.omega_rf * rec.delta_t;
            Sectors rotated(n + 1);
            for (int a = 0; a <= n; ++a) {
                const int b = n - a;
                Eigen::MatrixXcd m = sectors[a];
                for (int k = 0; k <= b; ++k) {
                    m.col(k) *= std::polar(1.0, -phase * (k - 0.5 * b));
                }
                rotated[a] = m * readout_b[a];
            }
            o = distribution_of(rotated).draw(u);
        } else {
            o = fixed.draw(u);
        }
        rec.n1A = o.n1A;
        rec.n2A = o.a - o.n1A;
        rec.n1B = o.n1B;
        rec.n2B = (n - o.a) - o.n1B;

        double detection[4];
        for (double &d : detection) d = gauss(rng);
        finish_counts(rec, noise, detection);
        out.push_back(rec);
    }
    return out;
}

std::vector<ShotRecord> sample_gaussian(
    const JointMoments &moments,
    const MeasurementSetting &setting,
    const NoiseModel &noise,
    int n_shots,
    uint64_t seed,
    int64_t first_shot_id) {
    noise.validate();
    validate_shot_request(n_shots, first_shot_id);

    // Joint covariance of (S^A, S^B, N_A).
    Eigen::Matrix<double, 7, 7> cov;
    cov.topLeftCorner<6, 6>() = moments.covariance;
    cov.topRightCorner<6, 1>() = moments.number_spin_cov;
    cov.bottomLeftCorner<1, 6>() = moments.number_spin_cov.transpose();
    cov(6, 6) = moments.n_var_A;
    Eigen::Matrix<double, 7, 1> mean;
    mean.head<6>() = moments.mean;
    mean[6] = moments.n_mean_A;
    if (!cov.allFinite() || !mean.allFinite()) {
        throw ModelError("sample_gaussian: moments are not finite");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 7, 7>> es(0.5 * (cov + cov.transpose()));
    const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    if (es.eigenvalues().minCoeff() < -1e-9 * scale) {
        throw ModelError("sample_gaussian: covariance is not positive semidefinite");
    }
    Eigen::Matrix<double, 7, 7> factor =
        es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();

    const double n_total = moments.n_total();
    const Vec3 dir_a = basis_direction(setting.basis_A);
    const bool jitter_b = noise.jitter_phase_sigma() > 0.0;
    const Vec3 fixed_dir_b = measured_direction_B(setting.basis_B, setting.theta_B, 0.0);

    std::vector<ShotRecord> out;
    out.reserve(static_cast<size_t>(n_shots));
    for (int i = 0; i < n_shots; ++i) {
        ShotRecord rec;
        rec.shot_id = first_shot_id + i;
        rec.setting = setting;
        rec.seed = derive_seed(seed, stream::shots, static_cast<uint64_t>(rec.shot_id));
        Rng rng(rec.seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        rec.delta_t = noise.jitter_sigma_dt * gauss(rng);

        Eigen::Matrix<double, 7, 1> z;
        for (int k = 0; k < 7; ++k) z[k] = gauss(rng);
        Eigen::Matrix<double, 7, 1> v = mean + factor * z;

        const Vec3 spin_a = v.segment<3>(0);
        const Vec3 spin_b = v.segment<3>(3);
        const Vec3 dir_b = jitter_b ? measured_direction_B(
                                          setting.basis_B, setting.theta_B, noise.omega_rf * rec.delta_t)
                                    : fixed_dir_b;
        const double s_a = dir_a.dot(spin_a);
        const double s_b = dir_b.dot(spin_b);
        const double n_a = v[6];
        const double n_b = n_total - n_a;
        rec.n1A = 0.5 * n_a + s_a;
        rec.n2A = 0.5 * n_a - s_a;
        rec.n1B = 0.5 * n_b + s_b;
        rec.n2B = 0.5 * n_b - s_b;

        double detection[4];
        for (double &d : detection) d = gauss(rng);
        finish_counts(rec, noise, detection);
        out.push_back(rec);
    }
    return out;
}

}  // namespace eprbec
