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

#include "eprbec/pulses.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <set>

#include <Eigen/Dense>

#include "eprbec/errors.hpp"
#include "eprbec/spin_core.hpp"

namespace eprbec {

namespace {

constexpr double kTwoPi = 2.0 * kPi;

struct Channel {
    size_t lower;
    size_t upper;
    double rabi_hz;
    double frequency_hz;
};

/// exp(-i K) for Hermitian K.
Eigen::MatrixXcd expm_hermitian(const Eigen::MatrixXcd &k) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(k);
    Eigen::VectorXcd phases(k.rows());
    for (Eigen::Index i = 0; i < k.rows(); ++i) phases[i] = std::polar(1.0, -es.eigenvalues()[i]);
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

std::vector<Channel> channels_of(const DriveScheme &scheme) {
    std::vector<Channel> out;
    for (const Tone &tone : scheme.tones) {
        const double f = tone.frequency_hz(scheme.levels);
        out.push_back({scheme.index_of(tone.lower), scheme.index_of(tone.upper), tone.rabi_hz, f});
        for (const SpuriousChannel &sp : tone.spurious) {
            out.push_back({scheme.index_of(sp.lower), scheme.index_of(sp.upper), sp.rabi_hz, f});
        }
    }
    return out;
}

}  // namespace

double rabi_transfer(double rabi_hz, double detuning_hz, double t) {
    if (!std::isfinite(rabi_hz) || !std::isfinite(detuning_hz) || !std::isfinite(t) || t < 0.0) {
        throw InvalidArgument("rabi_transfer: inputs must be finite with t >= 0");
    }
    const double w2 = rabi_hz * rabi_hz + detuning_hz * detuning_hz;
    if (w2 == 0.0) return 0.0;
    const double s = std::sin(kPi * std::sqrt(w2) * t);
    return std::clamp(rabi_hz * rabi_hz / w2 * s * s, 0.0, 1.0);
}

double rabi_envelope(double rabi_hz, double detuning_hz) {
    const double w2 = rabi_hz * rabi_hz + detuning_hz * detuning_hz;
    return w2 == 0.0 ? 0.0 : rabi_hz * rabi_hz / w2;
}

double spurious_rotation_angle(double rabi_hz, double detuning_hz, double t) {
    return 2.0 * std::asin(std::sqrt(rabi_transfer(rabi_hz, detuning_hz, t)));
}

double Tone::frequency_hz(const std::vector<Level> &levels) const {
    double e_lower = 0.0;
    double e_upper = 0.0;
    for (const Level &l : levels) {
        if (l.label == lower) e_lower = l.energy_hz;
        if (l.label == upper) e_upper = l.energy_hz;
    }
    return e_upper - e_lower + detuning_hz;
}

size_t DriveScheme::index_of(const std::string &label) const {
    for (size_t i = 0; i < levels.size(); ++i) {
        if (levels[i].label == label) return i;
    }
    throw InvalidArgument("drive scheme: unknown level '" + label + "'");
}

void DriveScheme::validate() const {
    if (levels.empty()) throw InvalidArgument("drive scheme: no levels");
    std::set<std::string> labels;
    for (const Level &l : levels) {
        if (!labels.insert(l.label).second) throw InvalidArgument("drive scheme: duplicate level '" + l.label + "'");
        if (!std::isfinite(l.energy_hz)) throw InvalidArgument("drive scheme: non-finite energy of '" + l.label + "'");
    }
    if (!(duration_s > 0.0) || !std::isfinite(duration_s)) {
        throw InvalidArgument("drive scheme: duration must be positive");
    }
    auto check_pair = [&](const std::string &a, const std::string &b, double rabi) {
        if (index_of(a) == index_of(b)) throw InvalidArgument("drive scheme: a transition couples '" + a + "' to itself");
        if (!(rabi > 0.0) || !std::isfinite(rabi)) {
            throw InvalidArgument("drive scheme: Rabi frequency of " + a + "<->" + b + " must be positive");
        }
    };
    for (const Tone &t : tones) {
        check_pair(t.lower, t.upper, t.rabi_hz);
        if (!std::isfinite(t.detuning_hz)) throw InvalidArgument("drive scheme: non-finite detuning");
        for (const SpuriousChannel &s : t.spurious) check_pair(s.lower, s.upper, s.rabi_hz);
    }
    double total = 0.0;
    for (const auto &[label, p] : initial) {
        index_of(label);
        if (!(p >= 0.0)) throw InvalidArgument("drive scheme: initial populations must be >= 0");
        total += p;
    }
    if (!initial.empty() && std::abs(total - 1.0) > 1e-9) {
        throw InvalidArgument("drive scheme: initial populations must sum to 1");
    }
}

SimulationResult simulate_scheme(
    const DriveScheme &scheme, const std::vector<double> &initial_populations, bool use_rotating_frame) {
    scheme.validate();
    const size_t n = scheme.levels.size();
    if (initial_populations.size() != n) {
        throw InvalidArgument("simulate_scheme: one initial population per level required");
    }
    double total = 0.0;
    for (double p : initial_populations) {
        if (!(p >= 0.0)) throw InvalidArgument("simulate_scheme: populations must be >= 0");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) throw InvalidArgument("simulate_scheme: populations must sum to 1");

    const std::vector<Channel> channels = channels_of(scheme);

    // Frame phases theta with theta_u - theta_l = f on a spanning forest.
    std::vector<double> theta(n, 0.0);
    std::vector<bool> seen(n, false);
    for (size_t root = 0; root < n && use_rotating_frame; ++root) {
        if (seen[root]) continue;
        seen[root] = true;
        std::vector<size_t> stack = {root};
        while (!stack.empty()) {
            const size_t v = stack.back();
            stack.pop_back();
            for (size_t c = 0; c < channels.size(); ++c) {
                const Channel &ch = channels[c];
                if (ch.lower == v && !seen[ch.upper]) {
                    theta[ch.upper] = theta[v] + ch.frequency_hz;
                } else if (ch.upper == v && !seen[ch.lower]) {
                    theta[ch.lower] = theta[v] - ch.frequency_hz;
                } else {
                    continue;
                }
                const size_t next = ch.lower == v ? ch.upper : ch.lower;
                seen[next] = true;
                stack.push_back(next);
            }
        }
    }

    Eigen::MatrixXcd h_static = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    double f_max = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double e = scheme.levels[i].energy_hz - theta[i];
        h_static(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) += kTwoPi * e;
        f_max = std::max(f_max, std::abs(e));
    }
    struct Residual {
        Eigen::Index lower;
        Eigen::Index upper;
        double half_rabi;
        double frequency;
    };
    std::vector<Residual> residual;
    for (const Channel &ch : channels) {
        const double rest = ch.frequency_hz - (theta[ch.upper] - theta[ch.lower]);
        const auto l = static_cast<Eigen::Index>(ch.lower);
        const auto u = static_cast<Eigen::Index>(ch.upper);
        f_max = std::max(f_max, ch.rabi_hz);
        if (use_rotating_frame && std::abs(rest) <= 1e-12 * std::max(1.0, std::abs(ch.frequency_hz))) {
            h_static(u, l) += kTwoPi * 0.5 * ch.rabi_hz;
            h_static(l, u) += kTwoPi * 0.5 * ch.rabi_hz;
        } else {
            residual.push_back({l, u, kTwoPi * 0.5 * ch.rabi_hz, rest});
            f_max = std::max(f_max, std::abs(rest));
        }
    }

    Eigen::VectorXcd psi(static_cast<Eigen::Index>(n));
    for (size_t i = 0; i < n; ++i) psi[static_cast<Eigen::Index>(i)] = std::sqrt(initial_populations[i]);

    SimulationResult result;
    const double t_end = scheme.duration_s;
    if (residual.empty()) {
        psi = expm_hermitian(h_static * t_end) * psi;
    } else {
        auto hamiltonian = [&](double t) {
            Eigen::MatrixXcd h = h_static;
            for (const Residual &r : residual) {
                const cplx phase = std::polar(1.0, -kTwoPi * r.frequency * t);
                h(r.upper, r.lower) += r.half_rabi * phase;
                h(r.lower, r.upper) += r.half_rabi * std::conj(phase);
            }
            return h;
        };
        const double h_max = 1.0 / (100.0 * f_max);
        const long steps = static_cast<long>(std::ceil(t_end / h_max));
        const double dt = t_end / static_cast<double>(steps);
        const double c1 = 0.5 - std::sqrt(3.0) / 6.0;
        const double c2 = 0.5 + std::sqrt(3.0) / 6.0;
        for (long s = 0; s < steps; ++s) {
            const double t = s * dt;
            const Eigen::MatrixXcd h1 = hamiltonian(t + c1 * dt);
            const Eigen::MatrixXcd h2 = hamiltonian(t + c2 * dt);
            // Fourth-order Magnus: Omega = -i K with K Hermitian.
            const Eigen::MatrixXcd comm = h2 * h1 - h1 * h2;
            const Eigen::MatrixXcd k =
                0.5 * dt * (h1 + h2) + cplx(0.0, -std::sqrt(3.0) / 12.0 * dt * dt) * comm;
            psi = expm_hermitian(0.5 * (k + k.adjoint())) * psi;
        }
        result.steps = steps;
    }

    result.populations.resize(n);
    double norm = 0.0;
    for (size_t i = 0; i < n; ++i) {
        result.populations[i] = std::norm(psi[static_cast<Eigen::Index>(i)]);
        norm += result.populations[i];
    }
    if (!std::isfinite(norm) || std::abs(norm - 1.0) > 1e-9) {
        throw IntegrationError("simulate_scheme: unitarity lost (norm " + std::to_string(norm) + ")");
    }
    return result;
}

SimulationResult simulate_scheme(const DriveScheme &scheme) {
    scheme.validate();
    if (scheme.initial.empty()) throw InvalidArgument("simulate_scheme: scheme has no initial populations");
    std::vector<double> pops(scheme.levels.size(), 0.0);
    for (const auto &[label, p] : scheme.initial) pops[scheme.index_of(label)] = p;
    return simulate_scheme(scheme, pops);
}

std::vector<SelectivityRow> selectivity_report(const DriveScheme &scheme) {
    scheme.validate();
    std::optional<SimulationResult> sim;
    if (!scheme.initial.empty()) sim = simulate_scheme(scheme);
    std::vector<SelectivityRow> rows;
    for (const Tone &tone : scheme.tones) {
        const double f = tone.frequency_hz(scheme.levels);
        for (const SpuriousChannel &sp : tone.spurious) {
            SelectivityRow row;
            row.transition = sp.lower + "<->" + sp.upper;
            row.rabi_hz = sp.rabi_hz;
            const double e_l = scheme.levels[scheme.index_of(sp.lower)].energy_hz;
            const double e_u = scheme.levels[scheme.index_of(sp.upper)].energy_hz;
            row.detuning_hz = f - (e_u - e_l);
            row.peak_transfer = rabi_envelope(sp.rabi_hz, row.detuning_hz);
            row.transfer_at_duration = rabi_transfer(sp.rabi_hz, row.detuning_hz, scheme.duration_s);
            if (sim) row.simulated_population = sim->populations[scheme.index_of(sp.upper)];
            rows.push_back(row);
        }
    }
    return rows;
}

double solve_rabi_for_transfer(double detuning_hz, double t, double target) {
    if (!(t > 0.0) || !(target > 0.0 && target <= 1.0)) {
        throw InvalidArgument("solve_rabi_for_transfer: need t > 0 and target in (0, 1]");
    }
    // Scan upward to the first crossing, then bisect.
    const double step = 1.0 / (200.0 * t);
    double lo = 0.0;
    double hi = 0.0;
    bool found = false;
    for (int i = 1; i <= 4000; ++i) {
        hi = i * step;
        if (rabi_transfer(hi, detuning_hz, t) >= target) {
            found = true;
            break;
        }
        lo = hi;
    }
    if (!found) throw InvalidArgument("solve_rabi_for_transfer: target transfer is not reachable");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (rabi_transfer(mid, detuning_hz, t) >= target) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

DriveScheme splitting_scheme() {
    constexpr double kDetuning = 2.2e3;
    constexpr double kNeighbour = 9.0e3;
    constexpr double kDuration = 70e-6;
    const double rabi = solve_rabi_for_transfer(kDetuning, kDuration, 0.5);

    DriveScheme s;
    // The neighbours sit 9 kHz from the A-B transition frequency, on the side
    // away from the applied detuning.
    s.levels = {{"1A", 0.0}, {"2A", 0.0}, {"1B", 0.0}, {"2B", 0.0},
                {"F2,mF=-1", -kNeighbour}, {"F1,mF=+1", -kNeighbour}};
    s.tones = {
        {"1A", "1B", rabi, kDetuning, {{"2B", "F2,mF=-1", rabi}}},
        {"2A", "2B", rabi, kDetuning, {{"1B", "F1,mF=+1", rabi}}},
    };
    s.duration_s = kDuration;
    s.initial = {{"1A", 0.5}, {"2A", 0.5}};
    return s;
}

DriveScheme a_rotation_scheme(double spurious_rabi_hz) {
    constexpr double kPiHalfTime = 960e-6;
    constexpr double kTwoPhotonDetuning = 10e3;
    DriveScheme s;
    s.levels = {{"1A", 0.0}, {"2A", 0.0}, {"1B", 0.0}, {"2B", -kTwoPhotonDetuning}};
    s.tones = {{"1A", "2A", 1.0 / (4.0 * kPiHalfTime), 0.0, {{"1B", "2B", spurious_rabi_hz}}}};
    s.duration_s = kPiHalfTime;
    s.initial = {{"1A", 0.5}, {"1B", 0.5}};
    return s;
}

}  // namespace eprbec
