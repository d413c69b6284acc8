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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "eprbec/splitter.hpp"

namespace eprbec {

/// Readout basis of one subsystem. neg_x measures -Sx (the "negative x" half of
/// the contrast measurements).
enum class Basis { x, y, z, neg_x };

std::string_view to_string(Basis basis);
/// Accepts "x", "y", "z", "-x". Throws InvalidArgument otherwise.
Basis parse_basis(std::string_view text);

/// Unit vector whose spin component the basis reads out.
Vec3 basis_direction(Basis basis);

bool is_x_basis(Basis basis);

struct MeasurementSetting {
    Basis basis_A = Basis::z;
    Basis basis_B = Basis::z;
    /// B is rotated by exp(-i theta_B Sx^B) before its readout pulse.
    double theta_B = 0.0;

    bool operator==(const MeasurementSetting &) const = default;
};

/// Knobs of the non-ideal pipeline. The sampling engines use the detection,
/// jitter, detectivity and drift fields; contrast and anti-squeeze excess act on
/// the prepared state (see prepare_state).
struct NoiseModel {
    /// Additive Gaussian counting noise per state, atoms.
    double detection_sigma = 0.0;
    /// Trigger jitter delta_t standard deviation, seconds.
    double jitter_sigma_dt = 0.0;
    /// Angular frequency converting delta_t to an azimuthal phase of B, rad/s.
    double omega_rf = 2.0 * kPi * 1.79e6;
    /// Factor multiplying the prepared mean spin.
    double contrast = 1.0;
    /// Extra preparation noise on the anti-squeezed (Sy) quadrature, dB.
    double anti_squeeze_excess_db = 0.0;
    /// Fractional loss of detected atoms in x-basis shots.
    double detectivity_sx_drop = 0.0;
    /// Linear drift of B's population imbalance, atoms per shot (adds to n1B,
    /// subtracts from n2B).
    double drift_b_per_shot = 0.0;

    /// Throws InvalidArgument on non-finite or out-of-range fields.
    void validate() const;
    double jitter_phase_sigma() const {
        return omega_rf * jitter_sigma_dt;
    }
};

struct ShotRecord {
    double n1A = 0.0;
    double n2A = 0.0;
    double n1B = 0.0;
    double n2B = 0.0;
    MeasurementSetting setting;
    /// Measured trigger delay for this shot, seconds.
    double delta_t = 0.0;
    int64_t shot_id = 0;
    /// Per-shot seed derived from the run seed and shot_id.
    uint64_t seed = 0;

    double spin_A() const {
        return 0.5 * (n1A - n2A);
    }
    double spin_B() const {
        return 0.5 * (n1B - n2B);
    }
    double total_A() const {
        return n1A + n2A;
    }
    double total_B() const {
        return n1B + n2B;
    }
    bool operator==(const ShotRecord &) const = default;
};

/// Direction of S^B read out for a B basis after the theta rotation about x and
/// a jitter phase offset: R_x(theta)^T R_z(jitter)^T basis_direction(basis).
Vec3 measured_direction_B(Basis basis, double theta, double jitter_phase);

/// Samples from the exact joint distribution of the four occupations after local
/// readout rotations. Shot i uses the seed derive_seed(seed, stream::shots,
/// first_shot_id + i), so split calls reproduce a single call exactly.
std::vector<ShotRecord> sample_exact(
    const BipartiteFockState &state,
    const MeasurementSetting &setting,
    const NoiseModel &noise,
    int n_shots,
    uint64_t seed,
    int64_t first_shot_id = 0,
    int limit = kDefaultExactLimit);

/// Draws jointly normal (S^A, S^B, N_A) from the moments, projects onto the
/// readout directions (with the sampled jitter applied as an exact rotation of
/// the B vector) and converts to counts n1 = N/2 + s, n2 = N/2 - s.
/// Throws ModelError for a non-PSD covariance.
std::vector<ShotRecord> sample_gaussian(
    const JointMoments &moments,
    const MeasurementSetting &setting,
    const NoiseModel &noise,
    int n_shots,
    uint64_t seed,
    int64_t first_shot_id = 0);

}  // namespace eprbec
