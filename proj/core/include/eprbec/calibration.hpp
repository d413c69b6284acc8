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
#include <vector>

namespace eprbec {

/// Per-shot values of the four states |1A>, |2A>, |1B>, |2B>.
using Counts4 = std::array<double, 4>;

struct DetectorModel {
    /// Signal units per atom.
    double conversion = 1.0;
    /// Relative efficiency of each state.
    Counts4 detectivity = {1.0, 1.0, 1.0, 1.0};
    /// Additive Gaussian readout noise, signal units.
    double readout_sigma = 0.0;

    /// Throws InvalidArgument unless conversion > 0 and detectivities lie in (0, 1.2].
    void validate() const;
};

/// signal_i = conversion * detectivity_i * count_i + N(0, readout_sigma).
std::vector<Counts4> simulate_raw_signals(
    const std::vector<Counts4> &true_counts, const DetectorModel &detector, uint64_t seed);

/// Rabi-type scan of n_points shots with a fixed total atom number, spreading
/// the population over all four states with multinomial projection noise.
std::vector<Counts4> make_rabi_scan(int n_atoms, int n_points, uint64_t seed);

/// Shots of an equal superposition in A (B empty): binomial n1A, n2A = N - n1A.
std::vector<Counts4> make_css_shots(int n_atoms, int n_shots, uint64_t seed);

struct DetectivityEstimate {
    /// Normalized to state 1.
    Counts4 detectivity = {1.0, 1.0, 1.0, 1.0};
    Counts4 std_error = {0.0, 0.0, 0.0, 0.0};
    /// Standard deviation of the inferred total signal across the scan.
    double residual_sd = 0.0;
};

/// Chooses inverse detectivities f (f_1 = 1) minimizing the scan variance of
/// sum_i f_i s_i, i.e. the least-squares regression of s_1 on s_2..s_4.
/// Throws Unidentifiable for a degenerate scan.
DetectivityEstimate calibrate_detectivity(const std::vector<Counts4> &scan_signals);

struct ConversionEstimate {
    double conversion = 0.0;
    double std_error = 0.0;
    /// Mean inferred total atom number.
    double n_mean = 0.0;
    int iterations = 0;
};

/// Self-consistent projection-noise calibration on equal-superposition shots of
/// system A (states 1 and 2): conversion c solves
///   Var(s1 - s2) = c * mean(s1 + s2) + 2 c^2 sigma^2
/// with sigma the per-state detection noise in atoms. Iterated from
/// mean(s1 + s2) / n_nominal to a relative change below 1e-6; throws
/// CalibrationFailure after 100 iterations.
ConversionEstimate calibrate_conversion(
    const std::vector<Counts4> &css_signals, double n_nominal, double detection_sigma_atoms = 0.0);

struct Calibration {
    double conversion = 1.0;
    double conversion_se = 0.0;
    Counts4 detectivity = {1.0, 1.0, 1.0, 1.0};
    Counts4 detectivity_se = {0.0, 0.0, 0.0, 0.0};

    /// count_i = signal_i / (conversion * detectivity_i).
    Counts4 invert(const Counts4 &signals) const;
};

/// Detectivity from the scan, then conversion from the detectivity-corrected
/// CSS shots.
Calibration calibrate_sequential(
    const std::vector<Counts4> &scan_signals,
    const std::vector<Counts4> &css_signals,
    double n_nominal,
    double detection_sigma_atoms = 0.0);

/// Scan and CSS shots stacked in one regression with separate intercepts, then
/// the conversion step on the corrected CSS shots.
Calibration calibrate_joint(
    const std::vector<Counts4> &scan_signals,
    const std::vector<Counts4> &css_signals,
    double n_nominal,
    double detection_sigma_atoms = 0.0);

}  // namespace eprbec
