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

#include <cmath>
#include <span>
#include <vector>

namespace sample_stats {

inline double mean(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

inline double covariance(std::span<const double> x, std::span<const double> y) {
    const double mx = mean(x), my = mean(y);
    double s = 0.0;
    for (size_t i = 0; i < x.size(); ++i) s += (x[i] - mx) * (y[i] - my);
    return s / static_cast<double>(x.size() - 1);
}

inline double variance(std::span<const double> x) {
    return covariance(x, x);
}

/// Large-sample standard error of covariance(x, y).
inline double covariance_se(std::span<const double> x, std::span<const double> y) {
    const double mx = mean(x), my = mean(y), c = covariance(x, y);
    double s = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double p = (x[i] - mx) * (y[i] - my) - c;
        s += p * p;
    }
    const double n = static_cast<double>(x.size());
    return std::sqrt(s / (n - 1) / n);
}

}  // namespace sample_stats
