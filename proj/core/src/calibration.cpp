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

#include "eprbec/calibration.hpp"

#include <cmath>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "eprbec/errors.hpp"
#include "eprbec/rng.hpp"
#include "eprbec/spin_core.hpp"

namespace eprbec {

namespace {

struct Regression {
    Eigen::VectorXd beta;
    Eigen::VectorXd se;
    double residual_sd = 0.0;
};

/// Ordinary least squares with coefficient standard errors. Throws
/// Unidentifiable if the design matrix is rank deficient.
Regression least_squares(const Eigen::MatrixXd &x, const Eigen::VectorXd &y) {
    const Eigen::Index n = x.rows();
    const Eigen::Index p = x.cols();
    if (n <= p) {
        throw Unidentifiable("calibration: need more shots than fit parameters");
    }
    // Column scaling keeps the rank test independent of signal units.
    Eigen::VectorXd scale = x.colwise().norm().transpose();
    for (Eigen::Index j = 0; j < p; ++j) {
        if (scale[j] == 0.0) {
            throw Unidentifiable("calibration: a state never carries signal");
        }
    }
    const Eigen::MatrixXd xs = x * scale.cwiseInverse().asDiagonal();
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xs);
    qr.setThreshold(1e-10);
    if (qr.rank() < p) {
        throw Unidentifiable("calibration: populations do not vary independently across the scan");
    }
    Regression r;
    r.beta = qr.solve(y).cwiseQuotient(scale);
    const Eigen::VectorXd resid = y - x * r.beta;
    const double s2 = resid.squaredNorm() / static_cast<double>(n - p);
    r.residual_sd = std::sqrt(resid.squaredNorm() / static_cast<double>(n - 1));
    const Eigen::MatrixXd xtx_inv = (x.transpose() * x).inverse();
    r.se = (s2 * xtx_inv.diagonal()).cwiseSqrt();
    return r;
}

/// Shared tail of the detectivity fits: columns 0..n_intercepts-1 are
/// intercepts, the remaining three are s2, s3, s4.
DetectivityEstimate detectivity_from(const Regression &r, int n_intercepts) {
    DetectivityEstimate est;
    for (int i = 1; i < 4; ++i) {
        const double f = -r.beta[n_intercepts + i - 1];
        if (!(f > 0.0)) {
            throw Unidentifiable("calibration: fitted inverse detectivity of state " + std::to_string(i + 1) +
                                 " is not positive");
        }
        est.detectivity[i] = 1.0 / f;
        est.std_error[i] = r.se[n_intercepts + i - 1] / (f * f);
    }
    est.residual_sd = r.residual_sd;
    return est;
}

std::vector<Counts4> corrected(const std::vector<Counts4> &signals, const Counts4 &detectivity) {
    std::vector<Counts4> out = signals;
    for (Counts4 &s : out) {
        for (int i = 0; i < 4; ++i) s[i] /= detectivity[i];
    }
    return out;
}

}  // namespace

void DetectorModel::validate() const {
    if (!(conversion > 0.0) || !std::isfinite(conversion)) {
        throw InvalidArgument("detector: conversion must be positive");
    }
    for (double d : detectivity) {
        if (!(d > 0.0 && d <= 1.2)) throw InvalidArgument("detector: detectivities must lie in (0, 1.2]");
    }
    if (!(readout_sigma >= 0.0) || !std::isfinite(readout_sigma)) {
        throw InvalidArgument("detector: readout_sigma must be >= 0");
    }
}

std::vector<Counts4> simulate_raw_signals(
    const std::vector<Counts4> &true_counts, const DetectorModel &detector, uint64_t seed) {
    detector.validate();
    std::vector<Counts4> out(true_counts.size());
    for (size_t k = 0; k < true_counts.size(); ++k) {
        Rng rng = make_rng(seed, stream::calibration, k);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int i = 0; i < 4; ++i) {
            out[k][i] = detector.conversion * detector.detectivity[i] * true_counts[k][i] +
                        detector.readout_sigma * gauss(rng);
        }
    }
    return out;
}

std::vector<Counts4> make_rabi_scan(int n_atoms, int n_points, uint64_t seed) {
    if (n_atoms < 1 || n_points < 2) throw InvalidArgument("make_rabi_scan: need n_atoms >= 1 and n_points >= 2");
    std::vector<Counts4> out(static_cast<size_t>(n_points));
    for (int k = 0; k < n_points; ++k) {
        const double t = static_cast<double>(k) / (n_points - 1);
        // Incommensurate scan frequencies keep the three population ratios
        // linearly independent.
        const double w = 0.5 + 0.4 * std::sin(2.0 * kPi * 2.3 * t + 0.3);
        const double u = std::pow(std::sin(kPi * 3.1 * t), 2);
        const double v = std::pow(std::sin(kPi * 4.7 * t + 0.5), 2);
        Rng rng = make_rng(seed, stream::scan, static_cast<uint64_t>(k));
        const int n_a = std::binomial_distribution<int>(n_atoms, w)(rng);
        const int n1a = std::binomial_distribution<int>(n_a, u)(rng);
        const int n1b = std::binomial_distribution<int>(n_atoms - n_a, v)(rng);
        out[static_cast<size_t>(k)] = {static_cast<double>(n1a), static_cast<double>(n_a - n1a),
                                       static_cast<double>(n1b), static_cast<double>(n_atoms - n_a - n1b)};
    }
    return out;
}

std::vector<Counts4> make_css_shots(int n_atoms, int n_shots, uint64_t seed) {
    if (n_atoms < 1 || n_shots < 1) throw InvalidArgument("make_css_shots: need n_atoms >= 1 and n_shots >= 1");
    std::vector<Counts4> out(static_cast<size_t>(n_shots));
    for (int k = 0; k < n_shots; ++k) {
        Rng rng = make_rng(seed, stream::scan, static_cast<uint64_t>(k) | (uint64_t{1} << 62));
        const int n1 = std::binomial_distribution<int>(n_atoms, 0.5)(rng);
        out[static_cast<size_t>(k)] = {static_cast<double>(n1), static_cast<double>(n_atoms - n1), 0.0, 0.0};
    }
    return out;
}

DetectivityEstimate calibrate_detectivity(const std::vector<Counts4> &scan_signals) {
    const Eigen::Index n = static_cast<Eigen::Index>(scan_signals.size());
    Eigen::MatrixXd x(n, 4);
    Eigen::VectorXd y(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const Counts4 &s = scan_signals[static_cast<size_t>(k)];
        x.row(k) << 1.0, s[1], s[2], s[3];
        y[k] = s[0];
    }
    return detectivity_from(least_squares(x, y), 1);
}

ConversionEstimate calibrate_conversion(
    const std::vector<Counts4> &css_signals, double n_nominal, double detection_sigma_atoms) {
    if (css_signals.size() < 2) throw InvalidArgument("calibrate_conversion: need at least 2 shots");
    if (!(n_nominal > 0.0)) throw InvalidArgument("calibrate_conversion: n_nominal must be positive");
    if (!(detection_sigma_atoms >= 0.0)) throw InvalidArgument("calibrate_conversion: detection sigma must be >= 0");
    const double n = static_cast<double>(css_signals.size());
    double sum_total = 0.0;
    double sum_diff = 0.0;
    for (const Counts4 &s : css_signals) {
        sum_total += s[0] + s[1];
        sum_diff += s[0] - s[1];
    }
    const double mean_total = sum_total / n;
    const double mean_diff = sum_diff / n;
    double var_diff = 0.0;
    for (const Counts4 &s : css_signals) var_diff += std::pow(s[0] - s[1] - mean_diff, 2);
    var_diff /= n - 1.0;
    if (!(mean_total > 0.0) || !(var_diff > 0.0)) {
        throw CalibrationFailure("calibrate_conversion: signals carry no projection noise");
    }

    const double sigma2 = detection_sigma_atoms * detection_sigma_atoms;
    ConversionEstimate est;
    double c = mean_total / n_nominal;
    for (int it = 1; it <= 100; ++it) {
        const double next = (var_diff - 2.0 * c * c * sigma2) / mean_total;
        if (!(next > 0.0)) {
            throw CalibrationFailure("calibrate_conversion: detection noise exceeds the observed variance");
        }
        const double change = std::abs(next - c) / next;
        c = next;
        if (change < 1e-6) {
            est.conversion = c;
            est.iterations = it;
            est.n_mean = mean_total / c;
            est.std_error = var_diff * std::sqrt(2.0 / (n - 1.0)) / (mean_total + 4.0 * c * sigma2);
            return est;
        }
    }
    throw CalibrationFailure("calibrate_conversion: no convergence in 100 iterations");
}

Counts4 Calibration::invert(const Counts4 &signals) const {
    Counts4 out;
    for (int i = 0; i < 4; ++i) out[i] = signals[i] / (conversion * detectivity[i]);
    return out;
}

Calibration calibrate_sequential(
    const std::vector<Counts4> &scan_signals,
    const std::vector<Counts4> &css_signals,
    double n_nominal,
    double detection_sigma_atoms) {
    const DetectivityEstimate d = calibrate_detectivity(scan_signals);
    const ConversionEstimate c =
        calibrate_conversion(corrected(css_signals, d.detectivity), n_nominal, detection_sigma_atoms);
    return {c.conversion, c.std_error, d.detectivity, d.std_error};
}

Calibration calibrate_joint(
    const std::vector<Counts4> &scan_signals,
    const std::vector<Counts4> &css_signals,
    double n_nominal,
    double detection_sigma_atoms) {
    const size_t n_scan = scan_signals.size();
    const Eigen::Index n = static_cast<Eigen::Index>(n_scan + css_signals.size());
    Eigen::MatrixXd x(n, 5);
    Eigen::VectorXd y(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const bool scan = static_cast<size_t>(k) < n_scan;
        const Counts4 &s = scan ? scan_signals[static_cast<size_t>(k)] : css_signals[static_cast<size_t>(k) - n_scan];
        x.row(k) << (scan ? 1.0 : 0.0), (scan ? 0.0 : 1.0), s[1], s[2], s[3];
        y[k] = s[0];
    }
    const DetectivityEstimate d = detectivity_from(least_squares(x, y), 2);
    const ConversionEstimate c =
        calibrate_conversion(corrected(css_signals, d.detectivity), n_nominal, detection_sigma_atoms);
    return {c.conversion, c.std_error, d.detectivity, d.std_error};
}

}  // namespace eprbec
