// Copyright 2026 The cqed Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Static SVG rendering of sweep output: frequency against current, one
// polyline per line kind. Gaps where a point failed break the polyline.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "cqed/sweep.hpp"

namespace cqed::svg {

struct PlotOptions {
    int width = 720;
    int height = 480;
    std::string title;
};

namespace detail {

inline std::string num(double v, int digits = 6) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

inline std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

/// Roughly five round tick values covering [lo, hi].
inline std::vector<double> ticks(double lo, double hi) {
    const double span = hi - lo;
    if (!(span > 0.0)) return {lo};
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (m * mag >= raw) {
            step = m * mag;
            break;
        }
    std::vector<double> out;
    for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step) out.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
    return out;
}

inline constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                           "#9467bd", "#8c564b", "#e377c2", "#17becf"};

}  // namespace detail

inline void plot_sweep(std::ostream& out, const std::vector<SweepRow>& rows, const PlotOptions& opt = {}) {
    // Series in order of first appearance.
    std::vector<std::string> names;
    std::map<std::string, std::vector<std::pair<double, double>>> series;
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const SweepRow& r : rows) {
        if (!series.count(r.line)) names.push_back(r.line);
        series[r.line].emplace_back(r.current, r.frequency);
        x0 = std::min(x0, r.current);
        x1 = std::max(x1, r.current);
        if (std::isfinite(r.frequency)) {
            y0 = std::min(y0, r.frequency);
            y1 = std::max(y1, r.frequency);
        }
    }
    if (!std::isfinite(x0)) x0 = 0.0, x1 = 1.0;
    if (!std::isfinite(y0)) y0 = 0.0, y1 = 1.0;
    if (x1 == x0) x0 -= 0.5, x1 += 0.5;
    if (y1 == y0) y0 -= 0.5, y1 += 0.5;
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;

    const double left = 80, right = 160, top = 40, bottom = 60;
    const double pw = opt.width - left - right, ph = opt.height - top - bottom;
    auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
    auto sy = [&](double y) { return top + (y1 - y) / (y1 - y0) * ph; };
    using detail::num;

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\"" << opt.height
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!opt.title.empty())
        out << "<text x=\"" << num(left + pw / 2) << "\" y=\"24\" text-anchor=\"middle\">" << detail::escape(opt.title)
            << "</text>\n";
    out << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(pw) << "\" height=\"" << num(ph)
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double t : detail::ticks(x0, x1)) {
        out << "<line x1=\"" << num(sx(t)) << "\" y1=\"" << num(top + ph) << "\" x2=\"" << num(sx(t)) << "\" y2=\""
            << num(top + ph + 5) << "\" stroke=\"black\"/>";
        out << "<text x=\"" << num(sx(t)) << "\" y=\"" << num(top + ph + 18) << "\" text-anchor=\"middle\">"
            << num(t * 1e3, 4) << "</text>\n";
    }
    for (double t : detail::ticks(y0, y1)) {
        out << "<line x1=\"" << num(left - 5) << "\" y1=\"" << num(sy(t)) << "\" x2=\"" << num(left) << "\" y2=\""
            << num(sy(t)) << "\" stroke=\"black\"/>";
        out << "<text x=\"" << num(left - 8) << "\" y=\"" << num(sy(t) + 4) << "\" text-anchor=\"end\">" << num(t, 4)
            << "</text>\n";
    }
    out << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << num(opt.height - 15)
        << "\" text-anchor=\"middle\">coil current (mA)</text>\n";
    out << "<text transform=\"translate(20," << num(top + ph / 2)
        << ") rotate(-90)\" text-anchor=\"middle\">frequency (GHz)</text>\n";

    for (std::size_t s = 0; s < names.size(); ++s) {
        const char* color = detail::kPalette[s % std::size(detail::kPalette)];
        auto points = series[names[s]];
        std::stable_sort(points.begin(), points.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        std::string path;
        bool pen_down = false;
        for (const auto& [x, y] : points) {
            if (!std::isfinite(y)) {
                pen_down = false;
                continue;
            }
            path += (pen_down ? " L" : " M") + num(sx(x)) + "," + num(sy(y));
            pen_down = true;
        }
        if (!path.empty())
            out << "<path d=\"" << path.substr(1) << "\" fill=\"none\" stroke=\"" << color
                << "\" stroke-width=\"1.5\"/>\n";
        const double ly = top + 16.0 * static_cast<double>(s + 1);
        out << "<line x1=\"" << num(left + pw + 12) << "\" y1=\"" << num(ly - 4) << "\" x2=\"" << num(left + pw + 32)
            << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>";
        out << "<text x=\"" << num(left + pw + 38) << "\" y=\"" << num(ly) << "\">" << detail::escape(names[s])
            << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace cqed::svg
