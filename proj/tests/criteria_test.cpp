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

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "eprbec/criteria.hpp"
#include "eprbec/errors.hpp"
#include "eprbec/experiment.hpp"
#include "sample_stats.hpp"

using namespace eprbec;
namespace ss = sample_stats;

namespace {

ShotRecord shot(Basis a, Basis b, double sa, double sb, double na, double nb, double dt = 0.0) {
    ShotRecord r;
    r.setting = {a, b, 0.0};
    r.n1A = na / 2 + sa;
    r.n2A = na / 2 - sa;
    r.n1B = nb / 2 + sb;
    r.n2B = nb / 2 - sb;
    r.delta_t = dt;
    return r;
}

struct Synthetic {
    std::vector<ShotRecord> records;
    std::vector<double> az, bz, ay, by, dt;
    double sx_a = 0.0, sx_b = 0.0;
};

/// z and y classes drawn from correlated Gaussians, x shots with fixed mean
/// spins so that the Sx estimates are known exactly.
Synthetic make_synthetic(
    int n, double rho_z, double rho_y, double var, uint64_t seed, double jitter_k = 0.0, double sx_a = 300.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    Synthetic s;
    const double na = 700, nb = 700;
    auto pair = [&](double rho) {
        const double u = g(rng), w = g(rng);
        return std::pair{std::sqrt(var) * u, std::sqrt(var) * (rho * u + std::sqrt(1 - rho * rho) * w)};
    };
    for (int i = 0; i < n; ++i) {
        auto [a, b] = pair(rho_z);
        s.az.push_back(a);
        s.bz.push_back(b);
        s.records.push_back(shot(Basis::z, Basis::z, a, b, na, nb));
    }
    for (int i = 0; i < n; ++i) {
        auto [a, b] = pair(rho_y);
        const double d = 4e-9 * g(rng);
        b += jitter_k * d;
        s.ay.push_back(a);
        s.by.push_back(b);
        s.dt.push_back(d);
        s.records.push_back(shot(Basis::y, Basis::y, a, b, na, nb, d));
    }
    for (int i = 0; i < 20; ++i) {
        const Basis x = i % 2 ? Basis::neg_x : Basis::x;
        const double sign = i % 2 ? -1 : 1;
        s.records.push_back(shot(x, x, sign * sx_a, sign * 280.0, na, nb));
    }
    s.sx_a = sx_a;
    s.sx_b = 280.0;
    return s;
}

double inferred(std::span<const double> pred, std::span<const double> target) {
    const double c = ss::covariance(pred, target);
    return ss::variance(target) - c * c / ss::variance(pred);
}

}  // namespace

TEST(OptimalInference, PerfectCorrelation) {
    const std::vector<double> x = {1, 2, 3, 5, 8};
    const InferenceResult r = optimal_inference(x, x);
    EXPECT_NEAR(r.g, -1.0, 1e-14);
    EXPECT_NEAR(r.var_inf, 0.0, 1e-12);
    EXPECT_NEAR(r.c, 0.0, 1e-12);
}

TEST(OptimalInference, IndependentAndDegenerateInputs) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    std::vector<double> x(5000), y(5000);
    for (auto &v : x) v = g(rng);
    for (auto &v : y) v = 2 * g(rng);
    const InferenceResult r = optimal_inference(x, y);
    EXPECT_NEAR(r.g, 0.0, 4 * 2 / std::sqrt(5000.0));
    const double rho = ss::covariance(x, y) / std::sqrt(ss::variance(x) * ss::variance(y));
    EXPECT_NEAR(r.var_inf, ss::variance(y) * (1 - rho * rho), 1e-10);
    EXPECT_LE(r.var_inf, ss::variance(y));

    const std::vector<double> flat(5000, 3.0);
    const InferenceResult d = optimal_inference(flat, y);
    EXPECT_EQ(d.g, 0.0);
    EXPECT_NEAR(d.var_inf, ss::variance(y), 1e-12);
    EXPECT_THROW(optimal_inference(std::vector<double>{1, 2}, std::vector<double>{1}), InvalidArgument);
}

TEST(JitterCorrection, ZeroOrConstantDelayIsIdentity) {
    const std::vector<double> y = {1, -2, 3, 0.5};
    for (double d : {0.0, 2e-9}) {
        const JitterFit f = jitter_correct(y, std::vector<double>(4, d));
        EXPECT_EQ(f.g_dt, 0.0);
        EXPECT_EQ(f.corrected, y);
    }
}

TEST(JitterCorrection, RecoversInjectedGain) {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g;
    const int n = 1000;
    const double k = 3.0e9;
    std::vector<double> clean(n), dt(n), y(n), partner(n);
    for (int i = 0; i < n; ++i) {
        partner[i] = 12 * g(rng);
        clean[i] = -0.8 * partner[i] + 8 * g(rng);
        dt[i] = 4e-9 * g(rng);
        y[i] = clean[i] + k * dt[i];
    }
    ASSERT_GT(ss::variance(y), 1.2 * ss::variance(clean));
    const JitterFit f = jitter_correct(y, dt);
    EXPECT_NEAR(ss::variance(f.corrected), ss::variance(clean), 0.02 * ss::variance(clean));
    EXPECT_NEAR(-f.g_dt, k, 0.1 * k);
    const JitterFit fc = jitter_correct(y, dt, partner);
    EXPECT_NEAR(ss::variance(fc.corrected), ss::variance(clean), 0.02 * ss::variance(clean));
}

TEST(Direction, Parse) {
    EXPECT_EQ(parse_direction("A->B"), Direction::a_to_b);
    EXPECT_EQ(parse_direction("b_to_a"), Direction::b_to_a);
    EXPECT_THROW(parse_direction("sideways"), InvalidArgument);
}

TEST(Criteria, MatchHandComputedStatistics) {
    const Synthetic s = make_synthetic(400, -0.6, 0.7, 150.0, 3);
    const CorrectionPolicy off{false};
    const BlockCriteria b = evaluate_block(s.records, off);
    EXPECT_NEAR(b.values.sx_a, s.sx_a, 1e-9);
    EXPECT_NEAR(b.values.sx_b, s.sx_b, 1e-9);

    const double epr_ab = 4 * inferred(s.az, s.bz) * inferred(s.ay, s.by) / (s.sx_b * s.sx_b);
    const double epr_ba = 4 * inferred(s.bz, s.az) * inferred(s.by, s.ay) / (s.sx_a * s.sx_a);
    EXPECT_NEAR(b.values.epr_a_to_b, epr_ab, 1e-10 * epr_ab);
    EXPECT_NEAR(b.values.epr_b_to_a, epr_ba, 1e-10 * epr_ba);
    EXPECT_NEAR(b.values.hei_a, 4 * ss::variance(s.az) * ss::variance(s.ay) / (s.sx_a * s.sx_a), 1e-12);
    EXPECT_NEAR(b.values.hei_b, 4 * ss::variance(s.bz) * ss::variance(s.by) / (s.sx_b * s.sx_b), 1e-12);
    const double corr = ss::covariance(s.az, s.bz) / std::sqrt(ss::variance(s.az) * ss::variance(s.bz));
    EXPECT_NEAR(b.values.corr_zz, corr, 1e-12);
    EXPECT_NEAR(b.gains_a_to_b.g_z, -ss::covariance(s.az, s.bz) / ss::variance(s.az), 1e-12);

    EXPECT_EQ(epr_criterion(s.records, Direction::a_to_b, off), b.values.epr_a_to_b);
    EXPECT_EQ(b.counts.z, 400);
    EXPECT_EQ(b.counts.x_b, 20);
}

TEST(Criteria, EntAtZeroGainsIsLocalHeisenbergProduct) {
    const Synthetic s = make_synthetic(300, 0.3, -0.2, 100.0, 4);
    EXPECT_DOUBLE_EQ(ent_criterion_at(s.records, 0.0, 0.0), heisenberg_product(s.records, 'B'));
}

TEST(Criteria, EntIsTheMinimumOverGains) {
    const Synthetic s = make_synthetic(300, -0.7, 0.6, 120.0, 5);
    const double ent = ent_criterion(s.records);
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int i = 0; i < 500; ++i) EXPECT_LE(ent, ent_criterion_at(s.records, u(rng), u(rng)) + 1e-12);
    // Brute-force grid over the hand-computed criterion.
    const double vaz = ss::variance(s.az), vbz = ss::variance(s.bz), cz = ss::covariance(s.az, s.bz);
    const double vay = ss::variance(s.ay), vby = ss::variance(s.by), cy = ss::covariance(s.ay, s.by);
    auto oracle = [&](double gz, double gy) {
        const double den = std::abs(gz * gy) * s.sx_a + s.sx_b;
        return 4 * (vbz + 2 * gz * cz + gz * gz * vaz) * (vby + 2 * gy * cy + gy * gy * vay) / (den * den);
    };
    EXPECT_NEAR(ent_criterion_at(s.records, 0.7, -0.4), oracle(0.7, -0.4), 1e-12);
    double grid = 1e300;
    for (int i = -1200; i <= 1200; ++i)
        for (int j = -1200; j <= 1200; ++j) grid = std::min(grid, oracle(i / 400.0, j / 400.0));
    EXPECT_LE(ent, grid + 1e-12);
    EXPECT_GT(ent, grid - 1e-4 * grid);
}

TEST(Criteria, UncorrelatedCoherentLevelDataIsNotEntangled) {
    // Var = Sx / 2 puts both systems exactly on their Heisenberg bounds.
    const Synthetic s = make_synthetic(2000, 0.0, 0.0, 140.0, 7, 0.0, 280.0);
    const CriteriaReport r = analyze(s.records, AnalysisOptions{CorrectionPolicy{false}, {}, true, 200, 1});
    EXPECT_GE(r.values.ent, 1.0 - 3 * r.errors.ent);
    EXPECT_NEAR(r.values.hei_b, 1.0, 3 * r.errors.hei_b);
}

TEST(Criteria, HierarchyOnRandomData) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> rho(-0.95, 0.95);
    for (int trial = 0; trial < 50; ++trial) {
        const Synthetic s = make_synthetic(60, rho(rng), rho(rng), 50.0 + 100.0 * trial / 50, rng(), 2e9);
        const CriteriaValues v = evaluate_block(s.records, CorrectionPolicy{false}).values;
        EXPECT_GE(v.epr_a_to_b, v.ent - 1e-9);
        EXPECT_GE(v.epr_b_to_a, v.ent - 1e-9);
        EXPECT_LE(v.ent, v.hei_b + 1e-9);
        EXPECT_LE(v.ent, v.ent_reused_gains + 1e-9);
    }
}

TEST(Criteria, JitterCorrectionRemovesInjectedPhaseNoise) {
    const Synthetic clean = make_synthetic(2000, -0.8, 0.8, 150.0, 9, 0.0);
    const Synthetic noisy = make_synthetic(2000, -0.8, 0.8, 150.0, 9, 4e9);
    const double base = evaluate_block(clean.records, CorrectionPolicy{false}).values.epr_a_to_b;
    const double raw = evaluate_block(noisy.records, CorrectionPolicy{false}).values.epr_a_to_b;
    const double fixed = evaluate_block(noisy.records, CorrectionPolicy{true}).values.epr_a_to_b;
    EXPECT_GT(raw, 1.5 * base);
    EXPECT_NEAR(fixed, base, 0.05 * base);
}

TEST(Criteria, MissingSettingsAreReported) {
    Synthetic s = make_synthetic(50, 0, 0, 10, 10);
    std::vector<ShotRecord> no_y;
    for (const ShotRecord &r : s.records)
        if (r.setting.basis_A != Basis::y) no_y.push_back(r);
    EXPECT_THROW(evaluate_block(no_y, {}), IncompleteDataset);
    std::vector<ShotRecord> empty_x = s.records;
    for (ShotRecord &r : empty_x)
        if (is_x_basis(r.setting.basis_A)) r.n1A = r.n2A = r.n1B = r.n2B = 0.0;
    EXPECT_THROW(evaluate_block(empty_x, {}), UndefinedValue);
    EXPECT_THROW(analyze(std::vector<ShotRecord>{}, {}), IncompleteDataset);
}

TEST(SxEstimator, ContrastAndDetectivityDrop) {
    RunConfig cfg;
    cfg.squeezing_db.reset();
    cfg.n_blocks = 20;
    cfg.seed = 11;
    const Dataset ideal = run_experiment(cfg);
    cfg.noise.contrast = 0.96;
    cfg.noise.detectivity_sx_drop = 0.03;
    const Dataset lossy = run_experiment(cfg);

    auto split = [](const std::vector<ShotRecord> &recs, std::vector<ShotRecord> &x, std::vector<ShotRecord> &yz) {
        for (const ShotRecord &r : recs) (is_x_basis(r.setting.basis_A) ? x : yz).push_back(r);
    };
    std::vector<ShotRecord> x0, yz0, x1, yz1;
    split(ideal.records, x0, yz0);
    split(lossy.records, x1, yz1);

    // Per-shot scatter of the normalized Sx is sqrt(N_sub/4)/(N_sub/2) ~ 0.027,
    // averaged over 400 shots.
    const double tol = 5 * 350.0 * 0.027 / std::sqrt(400.0);
    EXPECT_NEAR(sx_estimator(x0, yz0, 'A'), 350.0, tol);
    EXPECT_NEAR(sx_estimator(x0, yz0, 'B'), 350.0, tol);
    EXPECT_NEAR(sx_estimator(x1, yz1, 'B'), 0.96 * 350.0, tol);

    double naive = 0.0;
    for (const ShotRecord &r : x1) naive += (r.setting.basis_B == Basis::neg_x ? -1 : 1) * r.spin_B();
    naive /= static_cast<double>(x1.size());
    EXPECT_NEAR(naive / (0.96 * 350.0), 0.97, 5 * 0.027 / std::sqrt(400.0));
}

TEST(Blocks, PartitionDiscardsIncompleteRemainder) {
    RunConfig cfg;
    cfg.n_blocks = 21;
    cfg.n_shots = 4500;
    const Dataset d = run_experiment(cfg);
    const auto blocks = partition_blocks(d.records, cfg.schedule);
    ASSERT_EQ(blocks.size(), 20u);
    for (const auto &b : blocks) EXPECT_EQ(b.size(), 220u);
    EXPECT_EQ(blocks[3].front().shot_id, 3 * 220);
}

TEST(Blocks, SingleBlockMeanEqualsWholeDataset) {
    RunConfig cfg;
    cfg.n_blocks = 1;
    const Dataset d = run_experiment(cfg);
    const CriteriaReport r = analyze(d.records, AnalysisOptions{});
    EXPECT_EQ(r.n_blocks, 1);
    EXPECT_EQ(r.block_mean.to_array(), r.whole_dataset.to_array());
    EXPECT_EQ(r.error_method, "shot bootstrap within settings");
}

TEST(Blocks, IdenticalBlocksHaveZeroError) {
    RunConfig cfg;
    cfg.n_blocks = 1;
    const BlockCriteria b = evaluate_block(run_experiment(cfg).records, {});
    const CriteriaValues e = block_bootstrap(std::vector<BlockCriteria>(10, b), 200, 3);
    for (double v : e.to_array()) EXPECT_EQ(v, 0.0);
    EXPECT_THROW(block_bootstrap(std::vector<BlockCriteria>(10, b), 50, 3), InvalidArgument);
}

TEST(Blocks, StationaryBlockAverageMatchesWholeDataset) {
    RunConfig cfg = lab_config();
    cfg.seed = 12;
    const Dataset d = run_experiment(cfg);
    const CriteriaReport r = analyze(d.records, AnalysisOptions{});
    EXPECT_EQ(r.error_method, "block bootstrap");
    EXPECT_NEAR(r.block_mean.epr_a_to_b, r.whole_dataset.epr_a_to_b, 3 * r.errors.epr_a_to_b);
    EXPECT_NEAR(r.block_mean.ent, r.whole_dataset.ent, 3 * r.errors.ent);
    EXPECT_NEAR(r.block_mean.hei_b, r.whole_dataset.hei_b, 3 * r.errors.hei_b);
    const double rel = r.errors.epr_a_to_b / r.values.epr_a_to_b;
    EXPECT_GT(rel, 0.01);
    EXPECT_LT(rel, 0.10);
}

TEST(Bootstrap, DeterministicForFixedSeed) {
    RunConfig cfg;
    cfg.n_blocks = 3;
    const Dataset d = run_experiment(cfg);
    const AnalysisOptions opt;
    EXPECT_EQ(bootstrap_errors(d.records, opt).errors.to_array(), bootstrap_errors(d.records, opt).errors.to_array());
    AnalysisOptions single = opt;
    single.single_block = true;
    EXPECT_EQ(bootstrap_errors(d.records, single).method, "shot bootstrap within settings");
}

TEST(MomentCriteria, SplitCoherentStateSaturatesBounds) {
    const JointMoments m = split_moments(moments_from_state(make_coherent_state(1400, kPi / 2, 0.0)), 0.5);
    const CriteriaValues v = criteria_from_moments(m, {}, 0.0, {});
    EXPECT_NEAR(v.epr_a_to_b, 1.0, 1e-9);
    EXPECT_NEAR(v.epr_b_to_a, 1.0, 1e-9);
    EXPECT_NEAR(v.hei_a, 1.0, 1e-9);
    EXPECT_NEAR(v.hei_b, 1.0, 1e-9);
    EXPECT_NEAR(v.sx_b, 350.0, 1e-9);
}

TEST(MomentCriteria, PureSqueezedSplitHeisenbergProduct) {
    const int n = 1400;
    const OATSpec spec = find_oat_for_squeezing(n, -7.0);
    const JointMoments m = split_moments(moments_from_state(apply_oat(make_coherent_state(n, kPi / 2, 0.0), spec)), 0.5);
    const CriteriaValues v = criteria_from_moments(m, {}, 0.0, {});
    const double want = 4 * m.covariance(5, 5) * m.covariance(4, 4) / (m.mean[3] * m.mean[3]);
    EXPECT_NEAR(v.hei_b, want, 1e-9 * want);
    EXPECT_LT(v.epr_a_to_b, 1.0);
    EXPECT_LE(v.ent, v.epr_a_to_b + 1e-12);
}
