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

#include "eprbec/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "criteria_stats.hpp"
#include "eprbec/errors.hpp"
#include "eprbec/rng.hpp"

namespace eprbec {

namespace {

double mean_of(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double cov_of(std::span<const double> a, std::span<const double> b) {
    const double ma = mean_of(a);
    const double mb = mean_of(b);
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += (a[i] - ma) * (b[i] - mb);
    return s / static_cast<double>(a.size() - 1);
}

void require_pair(std::span<const double> a, std::span<const double> b, const char *what) {
    if (a.size() != b.size()) {
        throw InvalidArgument(std::string(what) + ": inputs differ in length");
    }
    if (a.size() < 2) {
        throw InvalidArgument(std::string(what) + ": need at least 2 values");
    }
}

enum class SettingClass { z, y, x, other };

SettingClass classify(const MeasurementSetting &s) {
    if (s.basis_A == Basis::z && s.basis_B == Basis::z) return SettingClass::z;
    if (s.basis_A == Basis::y && s.basis_B == Basis::y) return SettingClass::y;
    if (is_x_basis(s.basis_A) || is_x_basis(s.basis_B)) return SettingClass::x;
    return SettingClass::other;
}

bool is_yz(Basis b) {
    return b == Basis::y || b == Basis::z;
}

Basis basis_of(const ShotRecord &r, char system) {
    return system == 'A' ? r.setting.basis_A : r.setting.basis_B;
}

double x_sign(Basis b) {
    return b == Basis::neg_x ? -1.0 : 1.0;
}

detail::CriteriaStats stats_from_records(std::span<const ShotRecord> records) {
    std::vector<double> az, bz, ay, by, dt;
    std::vector<ShotRecord> x_a, x_b, yz_a, yz_b;
    for (const ShotRecord &r : records) {
        switch (classify(r.setting)) {
            case SettingClass::z:
                az.push_back(r.spin_A());
                bz.push_back(r.spin_B());
                break;
            case SettingClass::y:
                ay.push_back(r.spin_A());
                by.push_back(r.spin_B());
                dt.push_back(r.delta_t);
                break;
            default:
                break;
        }
        if (is_x_basis(r.setting.basis_A)) x_a.push_back(r);
        if (is_x_basis(r.setting.basis_B)) x_b.push_back(r);
        if (is_yz(r.setting.basis_A)) yz_a.push_back(r);
        if (is_yz(r.setting.basis_B)) yz_b.push_back(r);
    }
    if (az.size() < 2 || ay.size() < 2 || x_a.size() < 2 || x_b.size() < 2) {
        throw IncompleteDataset(
            "dataset needs at least 2 shots each of z, y and x settings (have z=" + std::to_string(az.size()) +
            ", y=" + std::to_string(ay.size()) + ", x=" + std::to_string(std::min(x_a.size(), x_b.size())) + ")");
    }

    detail::CriteriaStats s;
    s.mean_az = mean_of(az);
    s.mean_bz = mean_of(bz);
    s.var_az = cov_of(az, az);
    s.var_bz = cov_of(bz, bz);
    s.cov_z = cov_of(az, bz);
    const std::span<const double> cols[3] = {ay, by, dt};
    for (int i = 0; i < 3; ++i) {
        s.mean_y[i] = mean_of(cols[i]);
        for (int j = i; j < 3; ++j) {
            s.cov_y(i, j) = s.cov_y(j, i) = cov_of(cols[i], cols[j]);
        }
    }
    s.sx_a = sx_estimator(x_a, yz_a, 'A');
    s.sx_b = sx_estimator(x_b, yz_b, 'B');
    s.counts = {static_cast<int>(az.size()), static_cast<int>(ay.size()), static_cast<int>(x_a.size()),
                static_cast<int>(x_b.size())};
    return s;
}

/// Inference of `target` from `predictor` given their variances and covariance.
InferenceResult infer(double var_pred, double var_target, double cov, double mean_pred, double mean_target) {
    InferenceResult r;
    if (var_pred > 0.0) {
        r.g = -cov / var_pred;
        r.var_inf = std::max(0.0, var_target - cov * cov / var_pred);
    } else {
        r.var_inf = var_target;
    }
    r.c = mean_target + r.g * mean_pred;
    return r;
}

double require_sx(double sx, const char *system) {
    if (sx == 0.0) {
        throw UndefinedValue(std::string("mean spin of system ") + system + " is zero");
    }
    return sx;
}

/// Hooke-Jeeves style coordinate search from the best of the candidates.
std::pair<double, double> minimize_ent(
    const detail::CriteriaStats &s, const std::vector<std::pair<double, double>> &candidates) {
    double best_z = 0.0;
    double best_y = 0.0;
    double best = std::numeric_limits<double>::infinity();
    auto consider = [&](double gz, double gy) {
        double v = detail::ent_value(s, gz, gy);
        if (v < best) {
            best = v;
            best_z = gz;
            best_y = gy;
        }
    };
    double span = 3.0;
    for (const auto &[gz, gy] : candidates) {
        consider(gz, gy);
        span = std::max(span, 2.0 * std::max(std::abs(gz), std::abs(gy)));
    }
    constexpr int kGrid = 60;
    for (int i = 0; i <= kGrid; ++i) {
        for (int j = 0; j <= kGrid; ++j) {
            consider(-span + 2.0 * span * i / kGrid, -span + 2.0 * span * j / kGrid);
        }
    }
    double h = 2.0 * span / kGrid;
    while (h > 1e-10 * std::max(1.0, std::abs(best_z) + std::abs(best_y))) {
        bool moved = false;
        for (int coord = 0; coord < 2; ++coord) {
            for (double sign : {1.0, -1.0}) {
                double gz = best_z + (coord == 0 ? sign * h : 0.0);
                double gy = best_y + (coord == 1 ? sign * h : 0.0);
                double before = best;
                consider(gz, gy);
                if (best < before) moved = true;
            }
        }
        if (!moved) h *= 0.5;
    }
    return {best_z, best_y};
}

}  // namespace

namespace detail {

double ent_value(const CriteriaStats &s, double g_z, double g_y) {
    const double vz = s.var_bz + 2.0 * g_z * s.cov_z + g_z * g_z * s.var_az;
    const double vy = s.cov_y(1, 1) + 2.0 * g_y * s.cov_y(0, 1) + g_y * g_y * s.cov_y(0, 0);
    const double den = std::abs(g_z * g_y) * std::abs(s.sx_a) + std::abs(s.sx_b);
    return 4.0 * std::max(0.0, vz) * std::max(0.0, vy) / (den * den);
}

BlockCriteria criteria_from_stats(const CriteriaStats &s, const CorrectionPolicy &policy) {
    require_sx(s.sx_a, "A");
    require_sx(s.sx_b, "B");
    const double sxa2 = s.sx_a * s.sx_a;
    const double sxb2 = s.sx_b * s.sx_b;
    const Eigen::Matrix3d &c = s.cov_y;

    // Jitter gain: coefficient of delta_t in the regression of Sy^B on
    // (Sy^A, delta_t).
    double k = 0.0;
    if (policy.jitter_correction && c(2, 2) > 0.0) {
        const double det = c(0, 0) * c(2, 2) - c(0, 2) * c(0, 2);
        if (c(0, 0) > 0.0 && det > 1e-300) {
            k = (c(0, 0) * c(1, 2) - c(0, 2) * c(0, 1)) / det;
        } else {
            k = c(1, 2) / c(2, 2);
        }
    }
    const double var_by = c(1, 1) - 2.0 * k * c(1, 2) + k * k * c(2, 2);
    const double cov_y = c(0, 1) - k * c(0, 2);
    const double mean_by = s.mean_y[1] - k * s.mean_y[2];

    BlockCriteria out;
    out.counts = s.counts;
    CriteriaValues &v = out.values;
    v.sx_a = s.sx_a;
    v.sx_b = s.sx_b;

    const InferenceResult z_ab = infer(s.var_az, s.var_bz, s.cov_z, s.mean_az, s.mean_bz);
    const InferenceResult y_ab = infer(c(0, 0), var_by, cov_y, s.mean_y[0], mean_by);
    v.epr_a_to_b = 4.0 * z_ab.var_inf * y_ab.var_inf / sxb2;
    out.gains_a_to_b = {z_ab.g, y_ab.g, z_ab.c, y_ab.c, -k};

    const InferenceResult z_ba = infer(s.var_bz, s.var_az, s.cov_z, s.mean_bz, s.mean_az);
    const InferenceResult y_ba = infer(var_by, c(0, 0), cov_y, mean_by, s.mean_y[0]);
    v.epr_b_to_a = 4.0 * z_ba.var_inf * y_ba.var_inf / sxa2;
    out.gains_b_to_a = {z_ba.g, y_ba.g, z_ba.c, y_ba.c, -k};

    v.hei_a = 4.0 * s.var_az * c(0, 0) / sxa2;
    v.hei_b = 4.0 * s.var_bz * c(1, 1) / sxb2;
    v.corr_zz = s.var_az > 0.0 && s.var_bz > 0.0 ? s.cov_z / std::sqrt(s.var_az * s.var_bz) : 0.0;

    // Entanglement uses uncorrected statistics. The uncorrected inference gains
    // of both directions are starting candidates, which bounds the minimum by
    // both uncorrected EPR values.
    const InferenceResult uz_ab = infer(s.var_az, s.var_bz, s.cov_z, 0.0, 0.0);
    const InferenceResult uy_ab = infer(c(0, 0), c(1, 1), c(0, 1), 0.0, 0.0);
    const InferenceResult uz_ba = infer(s.var_bz, s.var_az, s.cov_z, 0.0, 0.0);
    const InferenceResult uy_ba = infer(c(1, 1), c(0, 0), c(0, 1), 0.0, 0.0);
    std::vector<std::pair<double, double>> candidates = {{0.0, 0.0}, {uz_ab.g, uy_ab.g}};
    if (uz_ba.g != 0.0 && uy_ba.g != 0.0) {
        candidates.emplace_back(1.0 / uz_ba.g, 1.0 / uy_ba.g);
    }
    const auto [gz, gy] = minimize_ent(s, candidates);
    v.ent = ent_value(s, gz, gy);
    v.ent_reused_gains = ent_value(s, uz_ab.g, uy_ab.g);
    out.gains_ent = {gz, gy, 0.0, 0.0, 0.0};
    v.epr_minus_ent = v.epr_a_to_b - v.ent;
    return out;
}

}  // namespace detail

std::string_view to_string(Direction direction) {
    return direction == Direction::a_to_b ? "A->B" : "B->A";
}

Direction parse_direction(std::string_view text) {
    if (text == "A->B" || text == "a_to_b" || text == "AB") return Direction::a_to_b;
    if (text == "B->A" || text == "b_to_a" || text == "BA") return Direction::b_to_a;
    throw InvalidArgument("unknown direction '" + std::string(text) + "' (expected A->B or B->A)");
}

std::array<double, CriteriaValues::kCount> CriteriaValues::to_array() const {
    return {epr_a_to_b, epr_b_to_a, ent, ent_reused_gains, hei_a, hei_b, sx_a, sx_b, corr_zz, epr_minus_ent};
}

CriteriaValues CriteriaValues::from_array(const std::array<double, kCount> &a) {
    CriteriaValues v;
    v.epr_a_to_b = a[0];
    v.epr_b_to_a = a[1];
    v.ent = a[2];
    v.ent_reused_gains = a[3];
    v.hei_a = a[4];
    v.hei_b = a[5];
    v.sx_a = a[6];
    v.sx_b = a[7];
    v.corr_zz = a[8];
    v.epr_minus_ent = a[9];
    return v;
}

const std::array<const char *, CriteriaValues::kCount> &CriteriaValues::names() {
    static const std::array<const char *, kCount> kNames = {
        "epr_a_to_b", "epr_b_to_a", "ent", "ent_reused_gains", "hei_a",
        "hei_b",      "sx_a",       "sx_b", "corr_zz",         "epr_minus_ent"};
    return kNames;
}

InferenceResult optimal_inference(std::span<const double> x, std::span<const double> y) {
    require_pair(x, y, "optimal_inference");
    return infer(cov_of(x, x), cov_of(y, y), cov_of(x, y), mean_of(x), mean_of(y));
}

JitterFit jitter_correct(std::span<const double> sy_b, std::span<const double> delta_t) {
    require_pair(sy_b, delta_t, "jitter_correct");
    JitterFit fit;
    const double vd = cov_of(delta_t, delta_t);
    const double k = vd > 0.0 ? cov_of(sy_b, delta_t) / vd : 0.0;
    fit.g_dt = -k;
    fit.corrected.resize(sy_b.size());
    for (size_t i = 0; i < sy_b.size(); ++i) fit.corrected[i] = sy_b[i] - k * delta_t[i];
    return fit;
}

JitterFit jitter_correct(
    std::span<const double> sy_b, std::span<const double> delta_t, std::span<const double> covariate) {
    require_pair(sy_b, delta_t, "jitter_correct");
    require_pair(sy_b, covariate, "jitter_correct");
    const double vd = cov_of(delta_t, delta_t);
    const double vc = cov_of(covariate, covariate);
    const double cdc = cov_of(delta_t, covariate);
    const double det = vc * vd - cdc * cdc;
    if (!(vc > 0.0) || !(det > 1e-300)) {
        return jitter_correct(sy_b, delta_t);
    }
    const double k = (vc * cov_of(sy_b, delta_t) - cdc * cov_of(sy_b, covariate)) / det;
    JitterFit fit;
    fit.g_dt = -k;
    fit.corrected.resize(sy_b.size());
    for (size_t i = 0; i < sy_b.size(); ++i) fit.corrected[i] = sy_b[i] - k * delta_t[i];
    return fit;
}

double sx_estimator(std::span<const ShotRecord> x_records, std::span<const ShotRecord> yz_records, char system) {
    if (system != 'A' && system != 'B') throw InvalidArgument("sx_estimator: system must be 'A' or 'B'");
    if (x_records.empty() || yz_records.empty()) {
        throw IncompleteDataset(std::string("sx_estimator: no x or no y/z shots for system ") + system);
    }
    double nx_sum = 0.0;
    int nx_count = 0;
    for (const ShotRecord &r : x_records) {
        const Basis b = basis_of(r, system);
        if (!is_x_basis(b)) continue;
        const double n1 = system == 'A' ? r.n1A : r.n1B;
        const double n2 = system == 'A' ? r.n2A : r.n2B;
        if (n1 + n2 <= 0.0) continue;
        nx_sum += x_sign(b) * (n1 - n2) / (n1 + n2);
        ++nx_count;
    }
    double total_sum = 0.0;
    int total_count = 0;
    for (const ShotRecord &r : yz_records) {
        if (!is_yz(basis_of(r, system))) continue;
        total_sum += system == 'A' ? r.total_A() : r.total_B();
        ++total_count;
    }
    if (nx_count == 0 || total_count == 0) {
        throw UndefinedValue(std::string("sx_estimator: no usable shots with positive atom number for system ") +
                             system);
    }
    const double mean_total = total_sum / total_count;
    if (mean_total <= 0.0) {
        throw UndefinedValue(std::string("sx_estimator: zero total atom number for system ") + system);
    }
    return 0.5 * (nx_sum / nx_count) * mean_total;
}

BlockCriteria evaluate_block(std::span<const ShotRecord> records, const CorrectionPolicy &policy) {
    return detail::criteria_from_stats(stats_from_records(records), policy);
}

double epr_criterion(std::span<const ShotRecord> records, Direction direction, const CorrectionPolicy &policy) {
    const CriteriaValues v = evaluate_block(records, policy).values;
    return direction == Direction::a_to_b ? v.epr_a_to_b : v.epr_b_to_a;
}

double ent_criterion(std::span<const ShotRecord> records) {
    return evaluate_block(records, CorrectionPolicy{false}).values.ent;
}

double ent_criterion_at(std::span<const ShotRecord> records, double g_z, double g_y) {
    return detail::ent_value(stats_from_records(records), g_z, g_y);
}

double heisenberg_product(std::span<const ShotRecord> records, char system) {
    if (system != 'A' && system != 'B') throw InvalidArgument("heisenberg_product: system must be 'A' or 'B'");
    const CriteriaValues v = evaluate_block(records, CorrectionPolicy{false}).values;
    return system == 'A' ? v.hei_a : v.hei_b;
}

std::vector<std::vector<ShotRecord>> partition_blocks(
    std::span<const ShotRecord> records, const BlockSchedule &schedule) {
    schedule.validate();
    int counts[3] = {0, 0, 0};
    const int quota[3] = {schedule.n_z, schedule.n_y, schedule.n_x};
    for (const ShotRecord &r : records) {
        SettingClass c = classify(r.setting);
        if (c != SettingClass::other) ++counts[static_cast<int>(c)];
    }
    int n_full = std::numeric_limits<int>::max();
    for (int c = 0; c < 3; ++c) n_full = std::min(n_full, counts[c] / quota[c]);

    std::vector<std::vector<ShotRecord>> blocks(static_cast<size_t>(n_full));
    int rank[3] = {0, 0, 0};
    for (const ShotRecord &r : records) {
        SettingClass c = classify(r.setting);
        if (c == SettingClass::other) continue;
        const int ci = static_cast<int>(c);
        const int b = rank[ci]++ / quota[ci];
        if (b < n_full) blocks[static_cast<size_t>(b)].push_back(r);
    }
    return blocks;
}

namespace {

/// Sample standard deviation of each field over the resamples; identical
/// resamples give exactly zero.
CriteriaValues resample_sd(const std::vector<std::array<double, CriteriaValues::kCount>> &draws) {
    constexpr size_t K = CriteriaValues::kCount;
    const double n = static_cast<double>(draws.size());
    // Shifted by the first draw.
    const auto &ref = draws.front();
    std::array<double, K> mean{}, se{};
    for (const auto &d : draws)
        for (size_t k = 0; k < K; ++k) mean[k] += d[k] - ref[k];
    for (size_t k = 0; k < K; ++k) mean[k] /= n;
    for (const auto &d : draws)
        for (size_t k = 0; k < K; ++k) se[k] += (d[k] - ref[k] - mean[k]) * (d[k] - ref[k] - mean[k]);
    for (size_t k = 0; k < K; ++k) se[k] = std::sqrt(se[k] / (n - 1.0));
    return CriteriaValues::from_array(se);
}

}  // namespace

CriteriaValues block_bootstrap(const std::vector<BlockCriteria> &blocks, int n_resamples, uint64_t seed) {
    if (n_resamples < 100) throw InvalidArgument("bootstrap needs at least 100 resamples");
    constexpr size_t K = CriteriaValues::kCount;
    const size_t nb = blocks.size();
    if (nb == 0) throw IncompleteDataset("block bootstrap: no blocks");
    std::vector<std::array<double, K>> draws;
    draws.reserve(static_cast<size_t>(n_resamples));
    for (int r = 0; r < n_resamples; ++r) {
        Rng rng = make_rng(seed, stream::bootstrap, static_cast<uint64_t>(r));
        std::uniform_int_distribution<size_t> pick(0, nb - 1);
        std::array<double, K> sum{};
        for (size_t i = 0; i < nb; ++i) {
            const auto a = blocks[pick(rng)].values.to_array();
            for (size_t k = 0; k < K; ++k) sum[k] += a[k];
        }
        for (size_t k = 0; k < K; ++k) sum[k] /= static_cast<double>(nb);
        draws.push_back(sum);
    }
    return resample_sd(draws);
}

CriteriaValues shot_bootstrap(
    std::span<const ShotRecord> records, const CorrectionPolicy &policy, int n_resamples, uint64_t seed) {
    if (n_resamples < 100) throw InvalidArgument("bootstrap needs at least 100 resamples");
    std::vector<ShotRecord> groups[4];
    for (const ShotRecord &r : records) groups[static_cast<int>(classify(r.setting))].push_back(r);

    std::vector<std::array<double, CriteriaValues::kCount>> draws;
    draws.reserve(static_cast<size_t>(n_resamples));
    std::vector<ShotRecord> sample;
    sample.reserve(records.size());
    for (int r = 0; r < n_resamples; ++r) {
        Rng rng = make_rng(seed, stream::bootstrap, static_cast<uint64_t>(r));
        sample.clear();
        for (const auto &g : groups) {
            if (g.empty()) continue;
            std::uniform_int_distribution<size_t> pick(0, g.size() - 1);
            for (size_t i = 0; i < g.size(); ++i) sample.push_back(g[pick(rng)]);
        }
        draws.push_back(evaluate_block(sample, policy).values.to_array());
    }
    return resample_sd(draws);
}

namespace {

CriteriaValues mean_values(const std::vector<BlockCriteria> &blocks) {
    std::array<double, CriteriaValues::kCount> m{};
    for (const BlockCriteria &b : blocks) {
        const auto a = b.values.to_array();
        for (size_t k = 0; k < m.size(); ++k) m[k] += a[k] / static_cast<double>(blocks.size());
    }
    return CriteriaValues::from_array(m);
}

}  // namespace

BootstrapResult bootstrap_errors(std::span<const ShotRecord> records, const AnalysisOptions &options) {
    const auto blocks = partition_blocks(records, options.schedule);
    BootstrapResult out;
    if (blocks.size() >= 2 && !options.single_block) {
        std::vector<BlockCriteria> per_block;
        for (const auto &b : blocks) per_block.push_back(evaluate_block(b, options.policy));
        out.errors = block_bootstrap(per_block, options.n_resamples, options.bootstrap_seed);
        out.method = "block bootstrap";
    } else {
        out.errors = shot_bootstrap(records, options.policy, options.n_resamples, options.bootstrap_seed);
        out.method = "shot bootstrap within settings";
    }
    return out;
}

CriteriaReport analyze(std::span<const ShotRecord> records, const AnalysisOptions &options) {
    if (records.empty()) throw IncompleteDataset("analyze: no records");
    CriteriaReport report;
    report.policy = options.policy;
    report.single_block = options.single_block;
    report.n_resamples = options.n_resamples;

    const BlockCriteria whole = evaluate_block(records, options.policy);
    report.whole_dataset = whole.values;
    report.gains_a_to_b = whole.gains_a_to_b;
    report.gains_b_to_a = whole.gains_b_to_a;
    report.gains_ent = whole.gains_ent;

    const auto blocks = partition_blocks(records, options.schedule);
    for (const auto &b : blocks) report.per_block.push_back(evaluate_block(b, options.policy));
    report.n_blocks = static_cast<int>(blocks.size());

    const bool use_blocks = !options.single_block && !blocks.empty();
    if (!report.per_block.empty()) report.block_mean = mean_values(report.per_block);
    report.values = use_blocks ? report.block_mean : report.whole_dataset;
    if (use_blocks) {
        for (const auto &b : report.per_block) {
            report.n_shots_used.z += b.counts.z;
            report.n_shots_used.y += b.counts.y;
            report.n_shots_used.x_a += b.counts.x_a;
            report.n_shots_used.x_b += b.counts.x_b;
        }
    } else {
        report.n_shots_used = whole.counts;
    }

    if (use_blocks && blocks.size() >= 2) {
        report.errors = block_bootstrap(report.per_block, options.n_resamples, options.bootstrap_seed);
        report.error_method = "block bootstrap";
    } else {
        report.errors = shot_bootstrap(records, options.policy, options.n_resamples, options.bootstrap_seed);
        report.error_method = "shot bootstrap within settings";
    }
    return report;
}

}  // namespace eprbec
