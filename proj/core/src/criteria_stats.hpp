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

#include "eprbec/criteria.hpp"

namespace eprbec::detail {

/// Second-order statistics every criterion is a function of. Index order of
/// the y block: (Sy^A, Sy^B, delta_t).
struct CriteriaStats {
    double mean_az = 0.0;
    double mean_bz = 0.0;
    double var_az = 0.0;
    double var_bz = 0.0;
    double cov_z = 0.0;
    Eigen::Vector3d mean_y = Eigen::Vector3d::Zero();
    Eigen::Matrix3d cov_y = Eigen::Matrix3d::Zero();
    double sx_a = 0.0;
    double sx_b = 0.0;
    SettingCounts counts;
};

BlockCriteria criteria_from_stats(const CriteriaStats &stats, const CorrectionPolicy &policy);

/// Entanglement criterion at fixed gains from the uncorrected statistics.
double ent_value(const CriteriaStats &stats, double g_z, double g_y);

}  // namespace eprbec::detail
