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
#include "eprbec/spin_core.hpp"
#include "oracles.hpp"

using namespace eprbec;

namespace {

Vec3 random_axis(std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    return Vec3(g(rng), g(rng), g(rng)).normalized();
}

double max_abs_diff(const Eigen::VectorXcd &a, const Eigen::VectorXcd &b) {
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST(CoherentState, FourAtomsAlongX) {
    const DickeState s = make_coherent_state(4, kPi / 2, 0.0);
    const double expected[] = {1.0, 2.0, std::sqrt(6.0), 2.0, 1.0};
    for (int k = 0; k <= 4; ++k) {
        EXPECT_NEAR(s.amplitude(k).real(), expected[k] / 4.0, 1e-14);
        EXPECT_NEAR(s.amplitude(k).imag(), 0.0, 1e-14);
    }
}

TEST(CoherentState, PolarizedAlongZ) {
    const DickeState s = make_coherent_state(7, 0.0, 0.0);
    EXPECT_NEAR(std::abs(s.amplitude(7)), 1.0, 1e-15);
    for (int k = 0; k < 7; ++k) EXPECT_EQ(std::abs(s.amplitude(k)), 0.0);
}

TEST(CoherentState, LargeNProjectionNoise) {
    const SpinMoments m = moments_from_state(make_coherent_state(1400, kPi / 2, 0.0));
    EXPECT_NEAR(m.mean.x(), 700.0, 1e-9);
    EXPECT_NEAR(m.variance_along(Vec3::UnitZ()), 350.0, 1e-8);
    EXPECT_NEAR(m.variance_along(Vec3::UnitY()), 350.0, 1e-8);
}

TEST(CoherentState, RejectsEmptySystem) {
    EXPECT_THROW(make_coherent_state(0, 0.0, 0.0), InvalidArgument);
    EXPECT_THROW(make_dicke_state(3, 4), InvalidArgument);
}

TEST(DickeStateType, RejectsUnnormalizedAmplitudes) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Ones(3);
    EXPECT_THROW(DickeState(2, v), InvalidArgument);
    EXPECT_THROW(DickeState(3, v / v.norm()), InvalidArgument);
    EXPECT_NEAR(DickeState::normalized(2, v).norm(), 1.0, 1e-15);
}

TEST(Rotation, MatchesDenseExponential) {
    std::mt19937_64 rng(11);
    for (int n : {1, 2, 5, 10, 31}) {
        const DickeState psi = oracle::random_state(n, rng);
        const Vec3 axis = random_axis(rng);
        const double angle = std::uniform_real_distribution<double>(-4.0, 4.0)(rng);
        const Eigen::VectorXcd expected = oracle::rotation(n, axis, angle) * psi.amplitudes();
        EXPECT_LT(max_abs_diff(apply_rotation(psi, axis, angle).amplitudes(), expected), 1e-11) << "N=" << n;
        EXPECT_LT((rotation_matrix(n, axis, angle) - oracle::rotation(n, axis, angle)).cwiseAbs().maxCoeff(), 1e-11);
    }
}

TEST(Rotation, FullTurnIsIdentityForEvenN) {
    std::mt19937_64 rng(3);
    const DickeState psi = oracle::random_state(12, rng);
    for (const Vec3 &axis : {Vec3(Vec3::UnitX()), Vec3(Vec3::UnitY()), random_axis(rng)})
        EXPECT_NEAR(fidelity(apply_rotation(psi, axis, 2 * kPi), psi), 1.0, 1e-12);
}

TEST(Rotation, QuarterTurnAboutYTakesZToX) {
    const DickeState up = make_coherent_state(20, 0.0, 0.0);
    const DickeState rotated = apply_rotation(up, Vec3::UnitY(), kPi / 2);
    EXPECT_NEAR(fidelity(rotated, make_coherent_state(20, kPi / 2, 0.0)), 1.0, 1e-12);
    EXPECT_NEAR(moments_from_state(rotated).mean.x(), 10.0, 1e-10);
}

TEST(Rotation, InverseAndComposition) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 60);
        const DickeState psi = oracle::random_state(n, rng);
        const Vec3 axis = random_axis(rng);
        const double a = std::uniform_real_distribution<double>(-3.0, 3.0)(rng);
        const double b = std::uniform_real_distribution<double>(-3.0, 3.0)(rng);
        const DickeState back = apply_rotation(apply_rotation(psi, axis, a), axis, -a);
        EXPECT_LT(max_abs_diff(back.amplitudes(), psi.amplitudes()), 1e-10);
        const DickeState two_step = apply_rotation(apply_rotation(psi, axis, a), axis, b);
        EXPECT_NEAR(fidelity(two_step, apply_rotation(psi, axis, a + b)), 1.0, 1e-10);
    }
}

TEST(Rotation, PreservesNormAtLargeN) {
    const DickeState css = make_coherent_state(1400, kPi / 2, 0.3);
    const DickeState r = apply_rotation(css, Vec3(1, 2, 2) / 3.0, 1.234);
    EXPECT_NEAR(r.norm(), 1.0, 1e-12);
}

TEST(Rotation, RejectsNonUnitAxis) {
    const DickeState css = make_coherent_state(4, kPi / 2, 0.0);
    EXPECT_THROW(apply_rotation(css, Vec3(1, 1, 0), 0.1), InvalidArgument);
}

TEST(Rotation, ThreeDimensionalMatrixMatchesSpinHalf) {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 5; ++i) {
        const Vec3 axis = random_axis(rng);
        const double angle = std::uniform_real_distribution<double>(-3.0, 3.0)(rng);
        EXPECT_LT((rotation_matrix_3d(axis, angle) - oracle::rotation_3d(axis, angle)).cwiseAbs().maxCoeff(), 1e-13);
    }
}

TEST(Rotation, MomentsTransformLikeStates) {
    std::mt19937_64 rng(9);
    const DickeState psi = oracle::random_state(9, rng);
    const Vec3 axis = random_axis(rng);
    const SpinMoments direct = moments_from_state(apply_rotation(psi, axis, 0.7));
    const SpinMoments via = rotate_moments(moments_from_state(psi), axis, 0.7);
    EXPECT_LT((direct.mean - via.mean).cwiseAbs().maxCoeff(), 1e-11);
    EXPECT_LT((direct.second_moments - via.second_moments).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Oat, ZeroTwistIsIdentity) {
    std::mt19937_64 rng(13);
    const DickeState psi = oracle::random_state(15, rng);
    const DickeState out = apply_oat(psi, OATSpec{});
    EXPECT_LT(max_abs_diff(out.amplitudes(), psi.amplitudes()), 1e-15);
}

TEST(Oat, MomentsMatchDenseOperators) {
    const int n = 8;
    OATSpec spec;
    spec.chi_t = 0.3;
    spec.rotation_axis = Vec3::UnitX();
    spec.rotation_angle = 0.4;
    const DickeState css = make_coherent_state(n, kPi / 2, 0.0);
    const SpinMoments got = moments_from_state(apply_oat(css, spec));

    const oracle::SpinOps s = oracle::spin_ops(n);
    const Eigen::MatrixXcd twist = oracle::hermitian_exp(s.z * s.z, spec.chi_t);
    const Eigen::VectorXcd psi = oracle::rotation(n, spec.rotation_axis, spec.rotation_angle) * twist * css.amplitudes();
    const SpinMoments want = oracle::moments(n, psi);
    EXPECT_LT((got.mean - want.mean).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((got.second_moments - want.second_moments).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Moments, CoherentAndDickeStates) {
    const SpinMoments css = moments_from_state(make_coherent_state(10, kPi / 2, 0.0));
    EXPECT_NEAR(css.mean.x(), 5.0, 1e-13);
    EXPECT_NEAR(css.variance_along(Vec3::UnitY()), 2.5, 1e-12);
    EXPECT_NEAR(css.variance_along(Vec3::UnitZ()), 2.5, 1e-12);

    const SpinMoments dicke = moments_from_state(make_dicke_state(10, 5));
    EXPECT_LT(dicke.mean.norm(), 1e-14);
    EXPECT_NEAR(dicke.variance_along(Vec3::UnitZ()), 0.0, 1e-13);
    EXPECT_NEAR(dicke.variance_along(Vec3::UnitX()), 0.5 * (5.0 * 6.0), 1e-12);
}

TEST(Moments, RandomStatesMatchDenseAndObeyBounds) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 20);
        const DickeState psi = oracle::random_state(n, rng);
        const SpinMoments m = moments_from_state(psi);
        const SpinMoments want = oracle::moments(n, psi.amplitudes());
        EXPECT_LT((m.mean - want.mean).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LT((m.second_moments - want.second_moments).cwiseAbs().maxCoeff(), 1e-11);

        const Mat3 c = m.covariance();
        EXPECT_LT((c - c.transpose()).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_GT(Eigen::SelfAdjointEigenSolver<Mat3>(c).eigenvalues().minCoeff(), -1e-9);

        const double lhs = 4.0 * c(2, 2) * c(1, 1);
        const double rhs = m.mean.x() * m.mean.x();
        EXPECT_GE(lhs, rhs - 1e-9 * std::max(1.0, rhs));
    }
}

TEST(Wineland, CoherentStateIsZeroDb) {
    const SpinMoments css = moments_from_state(make_coherent_state(200, kPi / 2, 0.0));
    EXPECT_NEAR(wineland_parameter(css, Vec3::UnitZ()), 0.0, 1e-10);
    EXPECT_NEAR(min_wineland_parameter(css), 0.0, 1e-10);
}

TEST(Wineland, ZeroMeanSpinIsUndefined) {
    const SpinMoments dicke = moments_from_state(make_dicke_state(4, 2));
    EXPECT_THROW(wineland_parameter(dicke, Vec3::UnitZ()), UndefinedValue);
}

TEST(Wineland, MinimumMatchesBruteForceAngleScan) {
    const int n = 100;
    const DickeState css = make_coherent_state(n, kPi / 2, 0.0);
    const oracle::SpinOps s = oracle::spin_ops(n);
    for (double chi : {0.005, 0.02, 0.05}) {
        OATSpec spec;
        spec.chi_t = chi;
        const DickeState twisted = apply_oat(css, spec);
        const Eigen::VectorXcd &psi = twisted.amplitudes();
        const double mean_x = oracle::expect(s.x, psi);

        // Mean stays along x; scan the perpendicular plane.
        const double zz = oracle::expect(s.z * s.z, psi), yy = oracle::expect(s.y * s.y, psi);
        const double zy = oracle::sym_expect(s.z, s.y, psi);
        const double mz = oracle::expect(s.z, psi), my = oracle::expect(s.y, psi);
        double best = 1e300;
        constexpr int kSteps = 400000;
        for (int i = 0; i < kSteps; ++i) {
            const double c = std::cos(kPi * i / kSteps), sn = std::sin(kPi * i / kSteps);
            const double mean = c * mz + sn * my;
            best = std::min(best, c * c * zz + sn * sn * yy + 2 * c * sn * zy - mean * mean);
        }
        const double brute_db = 10.0 * std::log10(n * best / (mean_x * mean_x));
        EXPECT_NEAR(min_wineland_parameter(moments_from_state(twisted)), brute_db, 1e-6) << "chi_t=" << chi;
    }
}

TEST(Wineland, TargetSqueezingLandsOnZ) {
    const OATSpec spec = find_oat_for_squeezing(1400, -7.0);
    const SpinMoments m = moments_from_state(apply_oat(make_coherent_state(1400, kPi / 2, 0.0), spec));
    EXPECT_NEAR(min_wineland_parameter(m), -7.0, 1e-6);
    EXPECT_NEAR(wineland_parameter(m, Vec3::UnitZ()), -7.0, 1e-6);
    EXPECT_GT(std::abs(m.mean.x()), 0.99 * m.mean.norm());
}

TEST(Wineland, UnreachableTargetIsRejected) {
    EXPECT_THROW(find_oat_for_squeezing(4, -30.0), InvalidArgument);
    EXPECT_THROW(find_oat_for_squeezing(100, 1.0), InvalidArgument);
}
