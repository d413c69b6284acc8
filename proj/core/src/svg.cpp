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

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "eprbec/io.hpp"

namespace eprbec {

namespace {

struct Series {
    const char *label;
    const char *color;
    bool filled;
    double CriteriaValues::*field;
};

constexpr Series kSeries[] = {
    {"E_Ent", "#c0392b", true, &CriteriaValues::ent},
    {"E_EPR (B->A)", "#c0392b", false, &CriteriaValues::epr_b_to_a},
    {"E_Hei^A", "#2c5aa0", true, &CriteriaValues::hei_a},
};

}  // namespace

std::string sweep_svg(const std::vector<SweepRow> &rows) {
    constexpr double W = 640.0, H = 420.0, L = 70.0, R = 160.0, T = 30.0, B = 60.0;
    double t_min = 0.0, t_max = kPi, y_max = 2.0;
    for (const SweepRow &r : rows) {
        t_min = std::min(t_min, r.theta);
        t_max = std::max(t_max, r.theta);
        for (const Series &s : kSeries) y_max = std::max(y_max, r.values.*s.field + r.errors.*s.field);
    }
    y_max = std::ceil(y_max * 1.1);
    const double pw = W - L - R;
    const double ph = H - T - B;
    auto px = [&](double t) { return L + (t - t_min) / (t_max - t_min) * pw; };
    auto py = [&](double v) { return T + ph - std::clamp(v, 0.0, y_max) / y_max * ph; };

    std::ostringstream o;
    o << std::fixed << std::setprecision(2);
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
      << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double t = t_min + (t_max - t_min) * i / 4.0;
        o << "<line x1=\"" << px(t) << "\" y1=\"" << T + ph << "\" x2=\"" << px(t) << "\" y2=\"" << T + ph + 5
          << "\" stroke=\"black\"/>\n";
        o << "<text x=\"" << px(t) << "\" y=\"" << T + ph + 20 << "\" text-anchor=\"middle\">" << std::setprecision(3)
          << t / kPi << "&#960;</text>\n"
          << std::setprecision(2);
    }
    const int y_ticks = static_cast<int>(y_max);
    const int y_step = std::max(1, y_ticks / 8);
    for (int v = 0; v <= y_ticks; v += y_step) {
        o << "<line x1=\"" << L - 5 << "\" y1=\"" << py(v) << "\" x2=\"" << L << "\" y2=\"" << py(v)
          << "\" stroke=\"black\"/>\n";
        o << "<text x=\"" << L - 8 << "\" y=\"" << py(v) + 4 << "\" text-anchor=\"end\">" << v << "</text>\n";
    }
    o << "<line x1=\"" << L << "\" y1=\"" << py(1.0) << "\" x2=\"" << L + pw << "\" y2=\"" << py(1.0)
      << "\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n";
    o << "<text x=\"" << L + pw / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">rotation angle &#952;</text>\n";
    o << "<text x=\"18\" y=\"" << T + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << T + ph / 2
      << ")\">criterion</text>\n";

    for (size_t si = 0; si < std::size(kSeries); ++si) {
        const Series &s = kSeries[si];
        if (!rows.empty()) {
            o << "<polyline fill=\"none\" stroke=\"" << s.color << "\" points=\"";
            for (const SweepRow &r : rows) o << px(r.theta) << ',' << py(r.values.*s.field) << ' ';
            o << "\"/>\n";
        }
        for (const SweepRow &r : rows) {
            const double x = px(r.theta);
            const double v = r.values.*s.field;
            const double e = r.errors.*s.field;
            o << "<line x1=\"" << x << "\" y1=\"" << py(v - e) << "\" x2=\"" << x << "\" y2=\"" << py(v + e)
              << "\" stroke=\"" << s.color << "\"/>\n";
            o << "<circle cx=\"" << x << "\" cy=\"" << py(v) << "\" r=\"4\" stroke=\"" << s.color << "\" fill=\""
              << (s.filled ? s.color : "white") << "\"/>\n";
        }
        const double ly = T + 20 + 20 * static_cast<double>(si);
        o << "<circle cx=\"" << L + pw + 20 << "\" cy=\"" << ly << "\" r=\"4\" stroke=\"" << s.color << "\" fill=\""
          << (s.filled ? s.color : "white") << "\"/>\n";
        o << "<text x=\"" << L + pw + 30 << "\" y=\"" << ly + 4 << "\">" << s.label << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

}  // namespace eprbec
