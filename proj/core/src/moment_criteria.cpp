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

#include "criteria_stats.hpp"
#include "eprbec/criteria.hpp"

namespace eprbec {

CriteriaValues criteria_from_moments(
    const JointMoments &moments, const NoiseModel &noise, double theta_B, const CorrectionPolicy &policy) {
    noise.validate();
    const Eigen::Matrix<double, 6, 6> &c = moments.covariance;
    const Mat3 c_aa = c.topLeftCorner<3, 3>();
    const Mat3 c_bb = c.bottomRightCorner<3, 3>();
    const Mat3 c_ab = c.topRightCorner<3, 3>();
    const Vec3 mu_a = moments.mean_A();
    const Vec3 mu_b = moments.mean_B();
    const double det_var = 0.5 * noise.detection_sigma * noise.detection_sigma;

    const Vec3 ez = Vec3::UnitZ();
    const Vec3 ey = Vec3::UnitY();
    const Vec3 ex = Vec3::UnitX();
    const Vec3 uz = measured_direction_B(Basis::z, theta_B, 0.0);
    const Vec3 uy = measured_direction_B(Basis::y, theta_B, 0.0);

    // Averages over a Gaussian azimuthal phase of standard deviation s.
    const double s = noise.jitter_phase_sigma();
    const double e_cos = std::exp(-0.5 * s * s);
    const double e_cos2 = 0.5 * (1.0 + std::exp(-2.0 * s * s));
    const double e_sin2 = 0.5 * (1.0 - std::exp(-2.0 * s * s));

    detail::CriteriaStats st;
    st.mean_az = mu_a.dot(ez);
    st.mean_bz = mu_b.dot(uz);
    st.var_az = ez.dot(c_aa * ez) + det_var;
    st.var_bz = uz.dot(c_bb * uz) + det_var;
    st.cov_z = ez.dot(c_ab * uz);

    const double mu_u = mu_b.dot(uy);
    const double mu_x = mu_b.dot(ex);
    const double second_u = uy.dot(c_bb * uy) + mu_u * mu_u;
    const double second_x = ex.dot(c_bb * ex) + mu_x * mu_x;
    const double sigma_t = noise.jitter_sigma_dt;
    const double w = noise.omega_rf;

    st.mean_y = {mu_a.dot(ey), e_cos * mu_u, 0.0};
    st.cov_y(0, 0) = ey.dot(c_aa * ey) + det_var;
    st.cov_y(1, 1) = e_sin2 * second_x + e_cos2 * second_u - e_cos * e_cos * mu_u * mu_u + det_var;
    st.cov_y(0, 1) = st.cov_y(1, 0) = e_cos * ey.dot(c_ab * uy);
    st.cov_y(2, 2) = sigma_t * sigma_t;
    st.cov_y(1, 2) = st.cov_y(2, 1) = sigma_t * sigma_t * w * std::exp(-0.5 * w * w * sigma_t * sigma_t) * mu_x;
    st.cov_y(0, 2) = st.cov_y(2, 0) = 0.0;

    st.sx_a = mu_a.dot(ex);
    st.sx_b = e_cos * mu_x;
    return detail::criteria_from_stats(st, policy).values;
}

}  // namespace eprbec
