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

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace eprbec {

/// Generalized Rabi formula with frequencies in Hz:
///   P = W^2/(W^2 + D^2) sin^2(pi sqrt(W^2 + D^2) t).
double rabi_transfer(double rabi_hz, double detuning_hz, double t);

/// Peak transfer W^2/(W^2 + D^2).
double rabi_envelope(double rabi_hz, double detuning_hz);

struct Level {
    std::string label;
    /// Energy offset in Hz, quadratic Zeeman shifts included.
    double energy_hz = 0.0;
};

/// Transition driven by a tone although the tone targets another pair. Its
/// detuning follows from the tone frequency and the level energies.
struct SpuriousChannel {
    std::string lower;
    std::string upper;
    double rabi_hz = 0.0;
};

/// Tone addressing `lower` <-> `upper`. Its frequency is
/// E_upper - E_lower + detuning_hz.
struct Tone {
    std::string lower;
    std::string upper;
    double rabi_hz = 0.0;
    double detuning_hz = 0.0;
    std::vector<SpuriousChannel> spurious;

    double frequency_hz(const std::vector<Level> &levels) const;
};

struct DriveScheme {
    std::vector<Level> levels;
    std::vector<Tone> tones;
    double duration_s = 0.0;
    /// Optional initial populations by label (real, non-negative amplitudes).
    std::map<std::string, double> initial;

    /// Throws InvalidArgument for duplicate or unknown labels, non-positive
    /// Rabi frequencies or duration.
    void validate() const;
    size_t index_of(const std::string &label) const;
};

struct SimulationResult {
    std::vector<double> populations;
    /// Number of fixed integrator steps; 0 when the rotating-frame Hamiltonian
    /// is static and exponentiated exactly.
    long steps = 0;
};

/// Integrates the Schrodinger equation with H = sum_i E_i |i><i| plus
/// (W/2)(e^{-i 2 pi f t}|u><l| + h.c.) for every tone and spurious channel (all
/// frequencies in Hz, times 2 pi). A frame rotating with the tone frequencies
/// removes the time dependence along a spanning forest of the coupling graph;
/// any residual dependence is integrated with a fourth-order Magnus step no
/// longer than 1/(100 f_max). With use_rotating_frame = false every coupling is
/// stepped in the frame of the level energies. Throws IntegrationError if
/// unitarity is lost.
SimulationResult simulate_scheme(
    const DriveScheme &scheme, const std::vector<double> &initial_populations, bool use_rotating_frame = true);

/// Uses scheme.initial (remaining levels start empty).
SimulationResult simulate_scheme(const DriveScheme &scheme);

struct SelectivityRow {
    std::string transition;
    double rabi_hz = 0.0;
    double detuning_hz = 0.0;
    double peak_transfer = 0.0;
    double transfer_at_duration = 0.0;
    /// Final population of the channel's upper level from simulate_scheme, when
    /// the scheme has initial populations.
    std::optional<double> simulated_population;
};

/// One row per spurious channel of every tone.
std::vector<SelectivityRow> selectivity_report(const DriveScheme &scheme);

/// Rotation angle of an initially polarized two-level system after a pulse of
/// duration t: 2 asin(sqrt(rabi_transfer)).
double spurious_rotation_angle(double rabi_hz, double detuning_hz, double t);

/// Splitting pulse of the experiment: 1A<->1B and 2A<->2B driven 2.2 kHz off
/// resonance for 70 us, each tone also coupling a populated B state to an
/// F=2/F=1 neighbour 9 kHz away. The main Rabi frequency is solved so that the
/// pulse transfers half of the population; spurious channels share it.
DriveScheme splitting_scheme();

/// Two-photon rotation of A on resonance with a 960 us pi/2 time; the B pair is
/// driven 10 kHz off two-photon resonance with the given effective Rabi
/// frequency.
DriveScheme a_rotation_scheme(double spurious_rabi_hz);

/// Smallest Rabi frequency W with rabi_transfer(W, detuning, t) = target.
/// Throws InvalidArgument if the first lobe never reaches the target.
double solve_rabi_for_transfer(double detuning_hz, double t, double target);

}  // namespace eprbec
