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
#include <vector>

#include <gtest/gtest.h>

#include "eprbec/errors.hpp"
#include "eprbec/pulses.hpp"
#include "eprbec/spin_core.hpp"

using namespace eprbec;

namespace {

DriveScheme two_level(double energy_hz, double rabi_hz, double detuning_hz, double duration) {
    DriveScheme s;
    s.levels = {{"g", 0.0}, {"e", energy_hz}};
    s.tones = {{"g", "e", rabi_hz, detuning_hz, {}}};
    s.duration_s = duration;
    return s;
}

}  // namespace

TEST(RabiFormula, ClosedForms) {
    EXPECT_NEAR(rabi_transfer(1000.0, 0.0, 0.5e-3), 1.0, 1e-15);
    EXPECT_EQ(rabi_transfer(1000.0, 300.0, 0.0), 0.0);
    EXPECT_EQ(rabi_transfer(0.0, 0.0, 1.0), 0.0);
    EXPECT_NEAR(rabi_transfer(1000.0, 0.0, 0.25e-3), 0.5, 1e-15);
    // Transfer always returns to zero after one generalized period.
    EXPECT_NEAR(rabi_transfer(300.0, 400.0, 1.0 / 500.0), 0.0, 1e-15);
    EXPECT_NEAR(rabi_envelope(300.0, 400.0), 0.36, 1e-15);
    EXPECT_THROW(rabi_transfer(1.0, 1.0, -1.0), InvalidArgument);
}

TEST(RabiFormula, NeighbourEnvelope) {
    EXPECT_NEAR(rabi_envelope(1.0 / (4.0 * 70e-6), 9e3), 0.136, 0.001);
}

TEST(RabiFormula, SpuriousRotationAngle) {
    EXPECT_NEAR(spurious_rotation_angle(1000.0, 0.0, 0.5e-3), kPi, 1e-7);
    EXPECT_NEAR(spurious_rotation_angle(1000.0, 0.0, 0.25e-3), kPi / 2, 1e-12);
    const double w = 20.0, d = 1e4, t = 960e-6;
    const double p = rabi_transfer(w, d, t);
    EXPECT_NEAR(std::pow(std::sin(spurious_rotation_angle(w, d, t) / 2), 2), p, 1e-15);
}

TEST(Integrator, MatchesClosedFormInRotatingFrame) {
    for (double d : {0.0, 700.0, -2200.0, 9000.0}) {
        const DriveScheme s = two_level(5000.0, 1500.0, d, 0.37e-3);
        const SimulationResult r = simulate_scheme(s, {1.0, 0.0});
        EXPECT_EQ(r.steps, 0);
        EXPECT_NEAR(r.populations[1], rabi_transfer(1500.0, d, 0.37e-3), 1e-9) << d;
    }
}

TEST(Integrator, MatchesClosedFormInLabFrame) {
    for (double d : {0.0, 700.0, -2200.0, 9000.0}) {
        const DriveScheme s = two_level(5000.0, 1500.0, d, 0.37e-3);
        const SimulationResult r = simulate_scheme(s, {1.0, 0.0}, false);
        EXPECT_GT(r.steps, 0);
        EXPECT_NEAR(r.populations[1], rabi_transfer(1500.0, d, 0.37e-3), 1e-6) << d;
    }
}

TEST(Integrator, ResonantHalfPiSplitsEvenly) {
    const SimulationResult r = simulate_scheme(two_level(0.0, 2000.0, 0.0, 1.0 / 8000.0), {1.0, 0.0});
    EXPECT_NEAR(r.populations[0], 0.5, 1e-12);
    EXPECT_NEAR(r.populations[1], 0.5, 1e-12);
}

TEST(Integrator, LoopedCouplingsStayUnitary) {
    // Three levels coupled in a triangle cannot be made static by one frame.
    DriveScheme s;
    s.levels = {{"a", 0.0}, {"b", 3000.0}, {"c", 5000.0}};
    s.tones = {{"a", "b", 800.0, 100.0, {{"a", "c", 500.0}}}, {"b", "c", 600.0, -50.0, {}}};
    s.duration_s = 2e-3;
    const SimulationResult r = simulate_scheme(s, {0.2, 0.3, 0.5});
    EXPECT_GT(r.steps, 0);
    double total = 0.0;
    for (double p : r.populations) total += p;
    EXPECT_NEAR(total, 1.0, 1e-9);
    const SimulationResult lab = simulate_scheme(s, {0.2, 0.3, 0.5}, false);
    for (size_t i = 0; i < 3; ++i) EXPECT_NEAR(r.populations[i], lab.populations[i], 1e-6);
}

TEST(Splitting, HalfTransferAndSmallLeakage) {
    const DriveScheme s = splitting_scheme();
    EXPECT_NEAR(rabi_transfer(s.tones[0].rabi_hz, 2.2e3, 70e-6), 0.5, 1e-12);
    const SimulationResult r = simulate_scheme(s);
    const double leak = r.populations[s.index_of("F2,mF=-1")] + r.populations[s.index_of("F1,mF=+1")];
    EXPECT_LT(leak, 0.05);
    EXPECT_GT(leak, 0.0);
    EXPECT_NEAR(r.populations[s.index_of("1B")] + r.populations[s.index_of("2B")], 0.5, 0.05);
}

TEST(Splitting, SelectivityRows) {
    const DriveScheme s = splitting_scheme();
    const auto rows = selectivity_report(s);
    ASSERT_EQ(rows.size(), 2u);
    for (const SelectivityRow &row : rows) {
        EXPECT_NEAR(std::abs(row.detuning_hz), 9e3 + 2.2e3, 1e-6);
        EXPECT_NEAR(row.peak_transfer, rabi_envelope(row.rabi_hz, row.detuning_hz), 1e-15);
        EXPECT_LE(row.transfer_at_duration, row.peak_transfer);
        ASSERT_TRUE(row.simulated_population.has_value());
        EXPECT_LT(*row.simulated_population, 0.05);
    }
    EXPECT_EQ(rows[0].transition, "2B<->F2,mF=-1");
}

TEST(Splitting, NoSpuriousChannelsNoRows) {
    const DriveScheme s = two_level(0.0, 100.0, 0.0, 1e-3);
    EXPECT_TRUE(selectivity_report(s).empty());
}

TEST(ARotation, SpuriousAngleMatchesSimulation) {
    for (double w : {50.0, 260.0}) {
        const DriveScheme s = a_rotation_scheme(w);
        const SimulationResult r = simulate_scheme(s);
        // Half the population starts in each pair, so the pair fractions double.
        EXPECT_NEAR(2 * r.populations[s.index_of("2A")], 0.5, 1e-6);
        const double angle = spurious_rotation_angle(w, 1e4, s.duration_s);
        EXPECT_NEAR(2 * r.populations[s.index_of("2B")], std::pow(std::sin(angle / 2), 2), 1e-6);
    }
    EXPECT_LT(spurious_rotation_angle(50.0, 1e4, 960e-6), 0.01);
}

TEST(Solver, FirstLobeCrossing) {
    const double w = solve_rabi_for_transfer(2.2e3, 70e-6, 0.5);
    EXPECT_NEAR(rabi_transfer(w, 2.2e3, 70e-6), 0.5, 1e-12);
    for (double v = 0.9 * w; v > 0; v -= 0.1 * w) EXPECT_LT(rabi_transfer(v, 2.2e3, 70e-6), 0.5);
    EXPECT_THROW(solve_rabi_for_transfer(2.2e3, 70e-6, 1.5), InvalidArgument);
    EXPECT_THROW(solve_rabi_for_transfer(2.2e3, 0.0, 0.5), InvalidArgument);
}

TEST(Scheme, Validation) {
    DriveScheme s = two_level(0.0, 100.0, 0.0, 1e-3);
    s.levels.push_back({"g", 1.0});
    EXPECT_THROW(s.validate(), InvalidArgument);
    s = two_level(0.0, -1.0, 0.0, 1e-3);
    EXPECT_THROW(s.validate(), InvalidArgument);
    s = two_level(0.0, 1.0, 0.0, 0.0);
    EXPECT_THROW(s.validate(), InvalidArgument);
    s = two_level(0.0, 1.0, 0.0, 1e-3);
    s.tones[0].upper = "x";
    EXPECT_THROW(s.validate(), InvalidArgument);
    s = two_level(0.0, 1.0, 0.0, 1e-3);
    s.initial = {{"g", 0.7}};
    EXPECT_THROW(s.validate(), InvalidArgument);
    EXPECT_THROW(simulate_scheme(two_level(0.0, 1.0, 0.0, 1e-3), {1.0}), InvalidArgument);
    EXPECT_THROW(simulate_scheme(two_level(0.0, 1.0, 0.0, 1e-3)), InvalidArgument);
}
