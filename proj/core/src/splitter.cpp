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

#include "eprbec/splitter.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "eprbec/errors.hpp"

namespace eprbec {

namespace {

constexpr double kNormTolerance = 1e-12;

double binomial(int n, int k) {
    return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

cplx ipow(cplx base, int exponent) {
    cplx out(1.0, 0.0);
    for (int i = 0; i < exponent; ++i) {
        out *= base;
    }
    return out;
}

/// Dense enumeration of the four-mode basis with a fixed total atom number.
struct FockBasis {
    explicit FockBasis(int n_total) : n(n_total) {
        for (int a = 0; a <= n; ++a) {
            for (int n1A = 0; n1A <= a; ++n1A) {
                for (int n1B = 0; n1B <= n - a; ++n1B) {
                    keys.push_back({n1A, a - n1A, n1B, n - a - n1B});
                }
            }
        }
        for (size_t i = 0; i < keys.size(); ++i) {
            index.emplace(keys[i], i);
        }
    }

    int n;
    std::vector<FockKey> keys;
    std::map<FockKey, size_t> index;
};

enum class Sub { A, B };

/// S+ of one subsystem: moves an atom from |2> to |1>.
Eigen::VectorXcd apply_raise(const FockBasis &basis, const Eigen::VectorXcd &psi, Sub sub, bool lower) {
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi.size());
    for (size_t i = 0; i < basis.keys.size(); ++i) {
        if (psi[i] == cplx(0.0)) continue;
        FockKey k = basis.keys[i];
        int &up = sub == Sub::A ? k.n1A : k.n1B;
        int &dn = sub == Sub::A ? k.n2A : k.n2B;
        int from = lower ? up : dn;
        if (from == 0) continue;
        int to = lower ? dn : up;
        double coeff = std::sqrt(static_cast<double>(from) * (to + 1));
        if (lower) {
            --up;
            ++dn;
        } else {
            ++up;
            --dn;
        }
        out[basis.index.at(k)] += coeff * psi[i];
    }
    return out;
}

}  // namespace

BipartiteFockState::BipartiteFockState(int n_atoms_total, Map amplitudes)
    : n_atoms_total_(n_atoms_total), amplitudes_(std::move(amplitudes)) {
    if (n_atoms_total_ < 0) {
        throw InvalidArgument("BipartiteFockState: negative atom number");
    }
    double norm_sq = 0.0;
    for (const auto &[key, amp] : amplitudes_) {
        if (key.total() != n_atoms_total_ || key.n1A < 0 || key.n2A < 0 || key.n1B < 0 || key.n2B < 0) {
            throw InvalidArgument("BipartiteFockState: key violates the total atom number");
        }
        norm_sq += std::norm(amp);
    }
    if (std::abs(norm_sq - 1.0) > kNormTolerance) {
        throw InvalidArgument("BipartiteFockState: amplitudes are not normalized");
    }
}

cplx BipartiteFockState::amplitude(const FockKey &key) const {
    auto it = amplitudes_.find(key);
    return it == amplitudes_.end() ? cplx(0.0) : it->second;
}

double BipartiteFockState::norm() const {
    double s = 0.0;
    for (const auto &[key, amp] : amplitudes_) {
        s += std::norm(amp);
    }
    return std::sqrt(s);
}

BipartiteFockState split_exact(const DickeState &state, double transmission, int limit) {
    const int n = state.n_atoms();
    if (n > limit) {
        throw SizeLimitError(
            "split_exact: N=" + std::to_string(n) + " exceeds the exact-engine limit of " + std::to_string(limit) +
            "; use split_moments for large atom numbers");
    }
    if (!(transmission >= 0.0 && transmission <= 1.0)) {
        throw InvalidArgument("split_exact: transmission must lie in [0, 1]");
    }
    const cplx t(std::sqrt(transmission), 0.0);
    const cplx r(0.0, std::sqrt(1.0 - transmission));

    BipartiteFockState::Map out;
    for (int n1 = 0; n1 <= n; ++n1) {
        const cplx c = state.amplitude(n1);
        if (c == cplx(0.0)) continue;
        const int n2 = n - n1;
        for (int k1 = 0; k1 <= n1; ++k1) {
            for (int k2 = 0; k2 <= n2; ++k2) {
                cplx coeff = std::sqrt(binomial(n1, k1) * binomial(n2, k2)) * ipow(t, n1 + n2 - k1 - k2) *
                             ipow(r, k1 + k2);
                if (coeff == cplx(0.0)) continue;
                out[{n1 - k1, n2 - k2, k1, k2}] += coeff * c;
            }
        }
    }
    return BipartiteFockState(n, std::move(out));
}

BipartiteFockState embed_in_A(const DickeState &state) {
    BipartiteFockState::Map out;
    const int n = state.n_atoms();
    for (int k = 0; k <= n; ++k) {
        if (state.amplitude(k) != cplx(0.0)) {
            out[{k, n - k, 0, 0}] = state.amplitude(k);
        }
    }
    return BipartiteFockState(n, std::move(out));
}

JointMoments split_moments(const SpinMoments &moments, double transmission) {
    const double p = transmission;
    if (!(p > 0.0 && p < 1.0)) {
        throw InvalidArgument("split_moments: transmission must lie strictly between 0 and 1");
    }
    const double q = 1.0 - p;
    const double n = moments.n_atoms;
    const Mat3 c = moments.covariance();
    const Mat3 partition = Mat3::Identity() * (p * q * n / 4.0);

    JointMoments out;
    out.mean.head<3>() = p * moments.mean;
    out.mean.tail<3>() = q * moments.mean;
    out.covariance.topLeftCorner<3, 3>() = p * p * c + partition;
    out.covariance.bottomRightCorner<3, 3>() = q * q * c + partition;
    out.covariance.topRightCorner<3, 3>() = p * q * c - partition;
    out.covariance.bottomLeftCorner<3, 3>() = (p * q * c - partition).transpose();
    out.n_mean_A = p * n;
    out.n_mean_B = q * n;
    out.n_var_A = p * q * n;
    out.n_var_B = p * q * n;
    out.number_spin_cov.head<3>() = p * q * moments.mean;
    out.number_spin_cov.tail<3>() = -p * q * moments.mean;
    return out;
}

JointMoments moments_from_bipartite(const BipartiteFockState &state) {
    const FockBasis basis(state.n_atoms_total());
    const size_t dim = basis.keys.size();
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
    for (const auto &[key, amp] : state.amplitudes()) {
        psi[basis.index.at(key)] = amp;
    }

    Eigen::VectorXcd ops[6];
    Eigen::VectorXcd n_a(dim);
    for (int s = 0; s < 2; ++s) {
        Sub sub = s == 0 ? Sub::A : Sub::B;
        Eigen::VectorXcd up = apply_raise(basis, psi, sub, false);
        Eigen::VectorXcd down = apply_raise(basis, psi, sub, true);
        ops[3 * s + 0] = 0.5 * (up + down);
        ops[3 * s + 1] = cplx(0.0, -0.5) * (up - down);
        Eigen::VectorXcd sz(dim);
        for (size_t i = 0; i < dim; ++i) {
            const FockKey &k = basis.keys[i];
            sz[i] = 0.5 * (sub == Sub::A ? k.n1A - k.n2A : k.n1B - k.n2B) * psi[i];
        }
        ops[3 * s + 2] = sz;
    }
    for (size_t i = 0; i < dim; ++i) {
        n_a[i] = static_cast<double>(basis.keys[i].n1A + basis.keys[i].n2A) * psi[i];
    }

    JointMoments out;
    Eigen::Matrix<double, 6, 6> second;
    for (int a = 0; a < 6; ++a) {
        out.mean[a] = psi.dot(ops[a]).real();
        for (int b = a; b < 6; ++b) {
            double v = ops[a].dot(ops[b]).real();
            second(a, b) = v;
            second(b, a) = v;
        }
    }
    out.covariance = second - out.mean * out.mean.transpose();

    const double n_total = state.n_atoms_total();
    double mean_na = psi.dot(n_a).real();
    double second_na = n_a.squaredNorm();
    out.n_mean_A = mean_na;
    out.n_mean_B = n_total - mean_na;
    out.n_var_A = second_na - mean_na * mean_na;
    out.n_var_B = out.n_var_A;
    for (int a = 0; a < 6; ++a) {
        out.number_spin_cov[a] = n_a.dot(ops[a]).real() - mean_na * out.mean[a];
    }
    return out;
}

}  // namespace eprbec
