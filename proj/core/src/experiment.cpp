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

#include "eprbec/experiment.hpp"

#include <cmath>
#include <string>

#include "eprbec/errors.hpp"
#include "eprbec/io.hpp"

namespace eprbec {

std::string_view to_string(Engine engine) {
    switch (engine) {
        case Engine::exact:
            return "exact";
        case Engine::gaussian:
            return "gaussian";
        case Engine::auto_select:
            break;
    }
    return "auto";
}

Engine parse_engine(std::string_view text) {
    if (text == "exact") return Engine::exact;
    if (text == "gaussian") return Engine::gaussian;
    if (text == "auto") return Engine::auto_select;
    throw InvalidArgument("unknown engine '" + std::string(text) + "' (expected exact, gaussian or auto)");
}

void BlockSchedule::validate() const {
    if (n_z < 2 || n_y < 2 || n_x < 2) {
        throw InvalidArgument("schedule: every setting needs at least 2 shots per block");
    }
    if (n_x % 2 != 0) {
        throw InvalidArgument("schedule: n_x must be even (half along +x, half along -x)");
    }
}

namespace {

bool has_mixed_preparation(const NoiseModel &noise) {
    return noise.contrast != 1.0 || noise.anti_squeeze_excess_db != 0.0;
}

}  // namespace

void RunConfig::validate() const {
    if (n_atoms < 1) throw InvalidArgument("n_atoms must be >= 1");
    if (!(transmission > 0.0 && transmission < 1.0)) {
        throw InvalidArgument("transmission must lie strictly between 0 and 1");
    }
    if (chi_t && !std::isfinite(*chi_t)) throw InvalidArgument("chi_t must be finite");
    if (!chi_t && squeezing_db && !(*squeezing_db < 0.0)) {
        throw InvalidArgument("squeezing_db must be negative (omit it for a coherent state)");
    }
    noise.validate();
    schedule.validate();
    if (n_blocks < 1) throw InvalidArgument("n_blocks must be >= 1");
    if (n_shots && *n_shots < 1) throw InvalidArgument("n_shots must be >= 1");
    if (!std::isfinite(theta_B)) throw InvalidArgument("theta_B must be finite");
    for (double t : thetas) {
        if (!std::isfinite(t)) throw InvalidArgument("thetas must be finite");
    }
    if (exact_limit < 1) throw InvalidArgument("exact_limit must be >= 1");
    if (engine == Engine::exact) {
        if (n_atoms > exact_limit) {
            throw InvalidArgument(
                "engine=exact supports at most " + std::to_string(exact_limit) + " atoms but n_atoms=" +
                std::to_string(n_atoms) + "; use engine=gaussian or engine=auto");
        }
        if (has_mixed_preparation(noise)) {
            throw InvalidArgument(
                "engine=exact models pure states only; contrast must be 1 and anti_squeeze_excess_db 0 "
                "(use engine=gaussian)");
        }
    }
}

Engine RunConfig::resolved_engine() const {
    if (engine != Engine::auto_select) return engine;
    return n_atoms <= exact_limit && !has_mixed_preparation(noise) ? Engine::exact : Engine::gaussian;
}

int RunConfig::total_shots() const {
    return n_shots ? *n_shots : n_blocks * schedule.shots_per_block();
}

SpinMoments apply_preparation_noise(const SpinMoments &moments, const NoiseModel &noise) {
    Mat3 cov = moments.covariance();
    SpinMoments out = moments;
    out.mean = moments.mean * noise.contrast;
    cov(1, 1) *= std::pow(10.0, noise.anti_squeeze_excess_db / 10.0);
    out.second_moments = cov + out.mean * out.mean.transpose();
    return out;
}

PreparedState prepare_state(const RunConfig &config) {
    config.validate();
    PreparedState prep;
    prep.engine = config.resolved_engine();

    const DickeState css = make_coherent_state(config.n_atoms, 0.5 * kPi, 0.0);
    if (config.chi_t) {
        prep.oat.chi_t = *config.chi_t;
        if (*config.chi_t != 0.0) {
            SpinMoments twisted = moments_from_state(apply_oat(css, prep.oat));
            prep.oat.rotation_axis = twisted.mean.normalized();
            prep.oat.rotation_angle = squeezing_alignment_angle(twisted, Vec3::UnitZ());
        }
    } else if (config.squeezing_db) {
        prep.oat = find_oat_for_squeezing(config.n_atoms, *config.squeezing_db);
    }
    const DickeState state = apply_oat(css, prep.oat);
    prep.moments = apply_preparation_noise(moments_from_state(state), config.noise);

    if (prep.engine == Engine::exact) {
        prep.split = split_exact(state, config.transmission, config.exact_limit);
        prep.joint = moments_from_bipartite(*prep.split);
    } else {
        prep.joint = split_moments(prep.moments, config.transmission);
    }
    return prep;
}

std::vector<MeasurementSetting> block_settings(const BlockSchedule &schedule, double theta_B) {
    std::vector<MeasurementSetting> out;
    out.reserve(static_cast<size_t>(schedule.shots_per_block()));
    for (int i = 0; i < schedule.n_z; ++i) out.push_back({Basis::z, Basis::z, theta_B});
    for (int i = 0; i < schedule.n_y; ++i) out.push_back({Basis::y, Basis::y, theta_B});
    for (int i = 0; i < schedule.n_x; ++i) {
        Basis b = i % 2 == 0 ? Basis::x : Basis::neg_x;
        out.push_back({b, b, theta_B});
    }
    return out;
}

Dataset run_experiment(const RunConfig &config) {
    return run_experiment(config, prepare_state(config));
}

Dataset run_experiment(const RunConfig &config, const PreparedState &prepared) {
    config.validate();
    Dataset data;
    data.n_atoms = config.n_atoms;
    data.seed = config.seed;
    data.config_hash = config_hash(config);

    const std::vector<MeasurementSetting> block = block_settings(config.schedule, config.theta_B);
    const int total = config.total_shots();
    data.records.reserve(static_cast<size_t>(total));

    // Consecutive shots with equal settings are sampled in one call; per-shot
    // seeds make the result independent of the grouping.
    int shot = 0;
    while (shot < total) {
        const MeasurementSetting &setting = block[static_cast<size_t>(shot) % block.size()];
        int run = 1;
        while (shot + run < total && block[static_cast<size_t>(shot + run) % block.size()] == setting) {
            ++run;
        }
        std::vector<ShotRecord> part =
            prepared.engine == Engine::exact
                ? sample_exact(*prepared.split, setting, config.noise, run, config.seed, shot, config.exact_limit)
                : sample_gaussian(prepared.joint, setting, config.noise, run, config.seed, shot);
        data.records.insert(data.records.end(), part.begin(), part.end());
        shot += run;
    }
    return data;
}

RunConfig lab_config() {
    RunConfig config;
    config.n_atoms = 1400;
    config.squeezing_db = -7.0;
    config.transmission = 0.5;
    config.noise.contrast = 0.96;
    config.noise.detection_sigma = 3.0;
    config.noise.jitter_sigma_dt = 4e-9;
    config.noise.omega_rf = 2.0 * kPi * 1.79e6;
    config.noise.anti_squeeze_excess_db = kLabAntiSqueezeExcessDb;
    config.n_blocks = 20;
    config.engine = Engine::gaussian;
    config.seed = 20230101;
    return config;
}

}  // namespace eprbec
