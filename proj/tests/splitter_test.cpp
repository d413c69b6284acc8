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

#include <gtest/gtest.h>

#include "eprbec/errors.hpp"
#include "eprbec/splitter.hpp"
#include "oracles.hpp"

using namespace eprbec;

TEST(SplitExact, SingleAtomHalfTransmission) {
    const BipartiteFockState s = split_exact(make_dicke_state(1, 1), 0.5);
    EXPECT_EQ(s.amplitudes().size(), 2u);
    const cplx a = s.amplitude({1, 0, 0, 0});
    const cplx b = s.amplitude({0, 0, 1, 0});
    EXPECT_NEAR(a.real(), 1 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(a.imag(), 0.0, 1e-15);
    EXPECT_NEAR(b.real(), 0.0, 1e-15);
    EXPECT_NEAR(b.imag(), 1 / std::sqrt(2.0), 1e-15);
}

TEST(SplitExact, FullTransmissionKeepsEverythingInA) {
    std::mt19937_64 rng(1);
    const DickeState psi = oracle::random_state(6, rng);
    const BipartiteFockState s = split_exact(psi, 1.0);
    const BipartiteFockState e = embed_in_A(psi);
    EXPECT_EQ(s.amplitudes().size(), e.amplitudes().size());
    for (const auto &[key, amp] : e.amplitudes()) EXPECT_LT(std::abs(s.amplitude(key) - amp), 1e-15);
}

TEST(SplitExact, CoherentStateMatchesPartitionFormulas) {
    const DickeState css = make_coherent_state(8, kPi / 2, 0.0);
    const JointMoments exact = moments_from_bipartite(split_exact(css, 0.5));
    const JointMoments formula = split_moments(moments_from_state(css), 0.5);
    EXPECT_LT(oracle::max_difference(exact, formula), 1e-10);
}

TEST(SplitExact, FourAtomMeanSpin) {
    const JointMoments m = moments_from_bipartite(split_exact(make_coherent_state(4, kPi / 2, 0.0), 0.5));
    EXPECT_NEAR(m.mean[0], 1.0, 1e-13);
    EXPECT_NEAR(m.mean[3], 1.0, 1e-13);
}

TEST(SplitExact, RefusesLargeSystems) {
    const DickeState css = make_coherent_state(20, kPi / 2, 0.0);
    EXPECT_THROW(split_exact(css, 0.5), SizeLimitError);
    EXPECT_NO_THROW(split_exact(css, 0.5, 20));
    EXPECT_THROW(split_exact(make_coherent_state(4, 0, 0), 1.5), InvalidArgument);
}

TEST(SplitExact, RandomStatesMatchDenseFourModeOracle) {
    std::mt19937_64 rng(21);
    const int n = 6;
    const oracle::FockSpace space(n);
    for (int trial = 0; trial < 8; ++trial) {
        const DickeState psi = oracle::random_state(n, rng);
        const double p = std::uniform_real_distribution<double>(0.1, 0.9)(rng);
        const BipartiteFockState split = split_exact(psi, p);
        const JointMoments got = moments_from_bipartite(split);

        const Eigen::VectorXcd dense = space.split(space.embed_A(psi), p);
        EXPECT_LT(oracle::max_difference(got, space.moments(dense)), 1e-10);

        // Same state up to the phase convention of the reflected amplitude.
        const Eigen::VectorXcd mine = space.from_state(split);
        for (int i = 0; i < space.dim(); ++i) EXPECT_NEAR(std::abs(mine[i]), std::abs(dense[i]), 1e-10);
        // Operator-level moments of the library state itself.
        EXPECT_LT(oracle::max_difference(got, space.moments(mine)), 1e-10);
    }
}

TEST(SplitExact, LocalHeisenbergBoundHolds) {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 10);
        const JointMoments m = moments_from_bipartite(split_exact(oracle::random_state(n, rng), 0.5));
        const double lhs = 4.0 * m.covariance(5, 5) * m.covariance(4, 4);
        const double rhs = m.mean[3] * m.mean[3];
        EXPECT_GE(lhs, rhs - 1e-9 * std::max(1.0, rhs));
    }
}

TEST(SplitExact, MeansAddUpToInput) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 10);
        const DickeState psi = oracle::random_state(n, rng);
        const SpinMoments in = moments_from_state(psi);
        const double p = std::uniform_real_distribution<double>(0.05, 0.95)(rng);
        const JointMoments ex = moments_from_bipartite(split_exact(psi, p));
        const JointMoments fm = split_moments(in, p);
        EXPECT_LT((ex.mean_A() + ex.mean_B() - in.mean).cwiseAbs().maxCoeff(), 1e-9);
        EXPECT_LT((fm.mean_A() + fm.mean_B() - in.mean).cwiseAbs().maxCoeff(), 1e-9);
        EXPECT_NEAR(ex.n_total(), n, 1e-9);
    }
}

TEST(SplitMoments, LargeCoherentState) {
    const JointMoments m = split_moments(moments_from_state(make_coherent_state(1000, kPi / 2, 0.0)), 0.5);
    EXPECT_NEAR(m.mean[0], 250.0, 1e-9);
    EXPECT_NEAR(m.covariance(2, 2), 125.0, 1e-8);
    EXPECT_NEAR(m.covariance(2, 5), 0.0, 1e-8);
    EXPECT_NEAR(m.n_var_A, 250.0, 1e-9);
}

TEST(SplitMoments, SqueezingAnticorrelatesPartitionNoise) {
    const int n = 200;
    const OATSpec spec = find_oat_for_squeezing(n, -5.0);
    const SpinMoments in = moments_from_state(apply_oat(make_coherent_state(n, kPi / 2, 0.0), spec));
    const JointMoments m = split_moments(in, 0.5);
    const double var_z = in.variance_along(Vec3::UnitZ());
    EXPECT_LT(var_z, n / 4.0);
    EXPECT_NEAR(m.covariance(2, 5), (var_z - n / 4.0) / 4.0, 1e-9);
    EXPECT_LT(m.covariance(2, 5), 0.0);
    EXPECT_LT((m.mean_A() - m.mean_B()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SplitMoments, RejectsDegenerateTransmission) {
    const SpinMoments in = moments_from_state(make_coherent_state(4, kPi / 2, 0.0));
    EXPECT_THROW(split_moments(in, 0.0), InvalidArgument);
    EXPECT_THROW(split_moments(in, 1.0), InvalidArgument);
}

TEST(Bipartite, EmptyBHasZeroMoments) {
    const JointMoments m = moments_from_bipartite(embed_in_A(make_coherent_state(5, 1.0, 0.4)));
    EXPECT_LT(m.mean_B().norm(), 1e-15);
    const Mat3 cov_b = m.covariance.bottomRightCorner<3, 3>();
    EXPECT_LT(cov_b.cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_NEAR(m.n_mean_A, 5.0, 1e-14);
}

TEST(Bipartite, ValidatesKeysAndNorm) {
    EXPECT_THROW(BipartiteFockState(2, {{FockKey{1, 0, 0, 0}, 1.0}}), InvalidArgument);
    EXPECT_THROW(BipartiteFockState(1, {{FockKey{1, 0, 0, 0}, 0.5}}), InvalidArgument);
}
