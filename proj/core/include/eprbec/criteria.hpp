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

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "eprbec/experiment.hpp"
#include "eprbec/sampler.hpp"
#include "eprbec/splitter.hpp"

namespace eprbec {

enum class Direction { a_to_b, b_to_a };

std::string_view to_string(Direction direction);
/// Accepts "A->B", "a_to_b", "B->A", "b_to_a".
Direction parse_direction(std::string_view text);

struct CorrectionPolicy {
    bool jitter_correction = true;
};

struct InferenceResult {
    double g = 0.0;
    double c = 0.0;
    double var_inf = 0.0;
};

/// Best linear estimate y ~ -g x + c with n-1 normalized statistics:
/// g = -Cov(x,y)/Var(x), c = mean(y) + g mean(x), var_inf = Var(y)(1 - rho^2).
/// Constant x gives g = 0 and var_inf = Var(y).
InferenceResult optimal_inference(std::span<const double> x, std::span<const double> y);

struct JitterFit {
    std::vector<double> corrected;
    /// Gain in S_y = S_y,measured + g_dt delta_t, atoms per second.
    double g_dt = 0.0;
};

/// Least-squares removal of the component of `sy_b` linear in `delta_t`.
/// Constant delta_t leaves the values unchanged with g_dt = 0.
JitterFit jitter_correct(std::span<const double> sy_b, std::span<const double> delta_t);

/// As above with an additional regressor held fixed during the fit, so that
/// the delta_t gain is not biased by the partner system's correlated signal.
JitterFit jitter_correct(
    std::span<const double> sy_b, std::span<const double> delta_t, std::span<const double> covariate);

struct GainSet {
    double g_z = 0.0;
    double g_y = 0.0;
    double c_z = 0.0;
    double c_y = 0.0;
    double g_dt = 0.0;
};

/// All scalar outputs of one evaluation, so resampling code can treat them
/// uniformly.
struct CriteriaValues {
    double epr_a_to_b = 0.0;
    double epr_b_to_a = 0.0;
    double ent = 0.0;
    /// Entanglement criterion at the uncorrected A->B inference gains.
    double ent_reused_gains = 0.0;
    double hei_a = 0.0;
    double hei_b = 0.0;
    double sx_a = 0.0;
    double sx_b = 0.0;
    /// Shot correlation coefficient of Sz^A and Sz^B.
    double corr_zz = 0.0;
    double epr_minus_ent = 0.0;

    static constexpr size_t kCount = 10;
    std::array<double, kCount> to_array() const;
    static CriteriaValues from_array(const std::array<double, kCount> &a);
    static const std::array<const char *, kCount> &names();
};

struct SettingCounts {
    int z = 0;
    int y = 0;
    int x_a = 0;
    int x_b = 0;
};

struct BlockCriteria {
    CriteriaValues values;
    GainSet gains_a_to_b;
    GainSet gains_b_to_a;
    /// g_z, g_y of the minimized entanglement criterion.
    GainSet gains_ent;
    SettingCounts counts;
};

/// Sx expectation of one system: sign-folded mean of (n1 - n2)/(n1 + n2) over
/// the x-basis shots times the mean total atom number of the y/z shots, over 2.
/// Shots with non-positive totals are skipped; throws UndefinedValue if nothing
/// remains and IncompleteDataset if a group is empty.
double sx_estimator(
    std::span<const ShotRecord> x_records, std::span<const ShotRecord> yz_records, char system);

/// Evaluates every criterion on the records as one block.
/// Throws IncompleteDataset if a setting class has fewer than 2 shots.
BlockCriteria evaluate_block(std::span<const ShotRecord> records, const CorrectionPolicy &policy);

double epr_criterion(std::span<const ShotRecord> records, Direction direction, const CorrectionPolicy &policy);
/// Minimized over both gains; never jitter corrected.
double ent_criterion(std::span<const ShotRecord> records);
/// Entanglement criterion at fixed gains.
double ent_criterion_at(std::span<const ShotRecord> records, double g_z, double g_y);
double heisenberg_product(std::span<const ShotRecord> records, char system);

/// Chronological partition: the k-th shot of each setting class goes to block
/// k / quota. Only blocks complete in every class are returned.
std::vector<std::vector<ShotRecord>> partition_blocks(
    std::span<const ShotRecord> records, const BlockSchedule &schedule);

struct AnalysisOptions {
    CorrectionPolicy policy;
    BlockSchedule schedule;
    /// Headline values from the whole dataset instead of the block average.
    bool single_block = false;
    int n_resamples = 200;
    uint64_t bootstrap_seed = 7;
};

struct CriteriaReport {
    /// Block average, or the whole-dataset value when single_block is set or no
    /// full block exists.
    CriteriaValues values;
    CriteriaValues errors;
    CriteriaValues block_mean;
    CriteriaValues whole_dataset;
    GainSet gains_a_to_b;
    GainSet gains_b_to_a;
    GainSet gains_ent;
    std::vector<BlockCriteria> per_block;
    SettingCounts n_shots_used;
    int n_blocks = 0;
    bool single_block = false;
    CorrectionPolicy policy;
    std::string error_method;
    int n_resamples = 0;
};

struct BootstrapResult {
    CriteriaValues errors;
    std::string method;
};

/// Nonparametric bootstrap standard errors: over blocks when at least two full
/// blocks exist, otherwise over shots within each setting class.
BootstrapResult bootstrap_errors(
    std::span<const ShotRecord> records, const AnalysisOptions &options);

/// Bootstrap standard errors of the block average from per-block values.
CriteriaValues block_bootstrap(const std::vector<BlockCriteria> &blocks, int n_resamples, uint64_t seed);

/// Bootstrap standard errors of the whole-dataset evaluation.
CriteriaValues shot_bootstrap(
    std::span<const ShotRecord> records, const CorrectionPolicy &policy, int n_resamples, uint64_t seed);

CriteriaReport analyze(std::span<const ShotRecord> records, const AnalysisOptions &options);

/// Criteria expected from exact moments and the noise model at one rotation
/// angle of B, without sampling error. Detection noise and the Gaussian jitter
/// average are included analytically.
CriteriaValues criteria_from_moments(
    const JointMoments &moments, const NoiseModel &noise, double theta_B, const CorrectionPolicy &policy);

}  // namespace eprbec
