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
#include <optional>
#include <string>
#include <vector>

#include "eprbec/sampler.hpp"
#include "eprbec/splitter.hpp"

namespace eprbec {

enum class Engine { exact, gaussian, auto_select };

std::string_view to_string(Engine engine);
/// Accepts "exact", "gaussian", "auto".
Engine parse_engine(std::string_view text);

/// Shots of each setting class in one block, in acquisition order: n_z shots
/// with both systems read out along z, n_y along y, then n_x alternating +x/-x.
struct BlockSchedule {
    int n_z = 100;
    int n_y = 100;
    int n_x = 20;

    int shots_per_block() const {
        return n_z + n_y + n_x;
    }
    void validate() const;
    bool operator==(const BlockSchedule &) const = default;
};

struct OutputPaths {
    std::string records;
    std::string report;
    std::string csv;
    std::string svg;
};

struct RunConfig {
    int n_atoms = 1400;
    /// Target Wineland parameter of the prepared state. Ignored when chi_t is set;
    /// with neither set the coherent state is used.
    std::optional<double> squeezing_db = -7.0;
    std::optional<double> chi_t;
    /// Fraction of atoms that stays in A.
    double transmission = 0.5;
    NoiseModel noise;
    BlockSchedule schedule;
    int n_blocks = 20;
    /// Truncates (or extends) the schedule to exactly this many shots.
    std::optional<int> n_shots;
    double theta_B = 0.0;
    std::vector<double> thetas;
    Engine engine = Engine::auto_select;
    int exact_limit = kDefaultExactLimit;
    uint64_t seed = 1;
    OutputPaths output;

    /// Throws InvalidArgument with an actionable message.
    void validate() const;
    /// Exact iff N fits the exact limit and no mixed-state preparation knob is set.
    Engine resolved_engine() const;
    int total_shots() const;
};

/// State right before splitting plus everything the samplers need.
struct PreparedState {
    OATSpec oat;
    SpinMoments moments;
    JointMoments joint;
    Engine engine = Engine::gaussian;
    /// Present for the exact engine only.
    std::optional<BipartiteFockState> split;
};

/// CSS along x, then OAT with the squeezed quadrature turned onto z, then the
/// preparation noise of the config, then the split.
PreparedState prepare_state(const RunConfig &config);

/// Contrast scales the mean spin at fixed covariance; anti_squeeze_excess_db adds
/// independent Gaussian noise to Sy so that its variance grows by that many dB.
SpinMoments apply_preparation_noise(const SpinMoments &moments, const NoiseModel &noise);

/// Settings of one block in acquisition order. B's y and z readouts carry
/// theta_B; x readouts are taken along the same sign on both systems.
std::vector<MeasurementSetting> block_settings(const BlockSchedule &schedule, double theta_B);

struct Dataset {
    int n_atoms = 0;
    uint64_t seed = 0;
    std::string config_hash;
    std::vector<ShotRecord> records;
};

Dataset run_experiment(const RunConfig &config);
Dataset run_experiment(const RunConfig &config, const PreparedState &prepared);

/// Parameters of the split-condensate experiment used for the paradox regime:
/// N = 1400, -7 dB, 96% contrast, 3 atoms detection noise, 4 ns jitter at
/// 2 pi 1.79 MHz, 20 blocks, and an anti-squeezing excess that puts the
/// Heisenberg product of B near 10.
RunConfig lab_config();

/// Excess anti-squeezing frozen into lab_config().
inline constexpr double kLabAntiSqueezeExcessDb = 7.1;

}  // namespace eprbec
