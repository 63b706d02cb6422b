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

// Peak extraction from two-tone spectroscopy maps and assignment of peaks to
// predicted lines.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "cqed/errors.hpp"
#include "cqed/sweep.hpp"

namespace cqed {

/// Magnitude grid, one row per coil current.
struct SpectroscopyDataset {
    std::vector<double> currents;     // A, strictly ascending
    std::vector<double> frequencies;  // GHz, strictly ascending
    Eigen::MatrixXd magnitudes;       // currents x frequencies

    void validate() const {
        if (magnitudes.rows() != static_cast<Eigen::Index>(currents.size()) ||
            magnitudes.cols() != static_cast<Eigen::Index>(frequencies.size()))
            throw DataError("spectroscopy grid is " + std::to_string(magnitudes.rows()) + "x" +
                            std::to_string(magnitudes.cols()) + " but axes are " + std::to_string(currents.size()) +
                            "x" + std::to_string(frequencies.size()));
        auto strictly_ascending = [](const std::vector<double>& v) {
            return std::adjacent_find(v.begin(), v.end(), [](double a, double b) { return !(a < b); }) == v.end();
        };
        if (!strictly_ascending(currents)) throw DataError("current axis is not strictly ascending");
        if (!strictly_ascending(frequencies)) throw DataError("frequency axis is not strictly ascending");
    }
};

struct Peak {
    double current = 0.0;     // A
    double frequency = 0.0;   // GHz
    double prominence = 0.0;  // fraction of the trace's dynamic range
    std::string line;         // assigned line name, empty when unassigned

    bool assigned() const { return !line.empty(); }
};

struct PeakSet {
    std::vector<Peak> peaks;
    std::vector<std::string> warnings;

    std::size_t assigned_count() const {
        return static_cast<std::size_t>(
            std::count_if(peaks.begin(), peaks.end(), [](const Peak& p) { return p.assigned(); }));
    }
};

namespace detail {

/// Centered moving average; the window shrinks at the edges.
inline std::vector<double> moving_average(const std::vector<double>& y, int window) {
    const int n = static_cast<int>(y.size());
    const int half = window / 2;
    std::vector<double> out(y.size());
    for (int i = 0; i < n; ++i) {
        const int lo = std::max(0, i - half);
        const int hi = std::min(n - 1, i + half);
        double sum = 0.0;
        for (int k = lo; k <= hi; ++k) sum += y[static_cast<std::size_t>(k)];
        out[static_cast<std::size_t>(i)] = sum / static_cast<double>(hi - lo + 1);
    }
    return out;
}

inline double median(std::vector<double> v) {
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double upper = v[mid];
    if (v.size() % 2 == 1) return upper;
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

/// Topographic prominence of the local maximum at i.
inline double prominence_at(const std::vector<double>& s, std::size_t i) {
    double left = s[i];
    for (std::size_t k = i; k-- > 0;) {
        if (s[k] > s[i]) break;
        left = std::min(left, s[k]);
    }
    double right = s[i];
    for (std::size_t k = i + 1; k < s.size(); ++k) {
        if (s[k] > s[i]) break;
        right = std::min(right, s[k]);
    }
    return s[i] - std::max(left, right);
}

/// Abscissa of the vertex of the parabola through three points, clamped to
/// the outer two.
inline double parabolic_vertex(double x0, double y0, double x1, double y1, double x2, double y2) {
    const double u0 = x0 - x1;
    const double u2 = x2 - x1;
    const double det = u0 * u2 * (u0 - u2);
    const double a = ((y0 - y1) * u2 - (y2 - y1) * u0) / det;
    const double b = ((y2 - y1) * u0 * u0 - (y0 - y1) * u2 * u2) / det;
    if (!(a < 0.0)) return x1;
    return x1 + std::clamp(-b / (2.0 * a), u0, u2);
}

}  // namespace detail

/// Finds peaks in every current trace.
///
/// Each trace is smoothed, referenced to its median, and rectified, so both
/// peaks and dips count. Local maxima whose prominence reaches
/// min_prominence times the smoothed trace's dynamic range are kept and
/// refined by a three-point parabola. Traces containing non-finite values are
/// skipped with a warning.
inline PeakSet extract_peaks(const SpectroscopyDataset& ds, int smoothing_window, double min_prominence,
                             unsigned threads = 1) {
    if (smoothing_window < 1 || smoothing_window % 2 == 0)
        throw std::invalid_argument("extract_peaks: smoothing_window must be odd and >= 1");
    if (!(min_prominence > 0.0 && min_prominence <= 1.0))
        throw std::invalid_argument("extract_peaks: min_prominence must lie in (0, 1]");
    ds.validate();
    if (ds.frequencies.size() < 3)
        throw EmptyColumn("spectroscopy traces need at least 3 frequency samples, got " +
                          std::to_string(ds.frequencies.size()));

    const std::size_t rows = ds.currents.size();
    const std::size_t cols = ds.frequencies.size();
    std::vector<std::vector<Peak>> per_row(rows);
    std::vector<std::string> row_warning(rows);

    detail::parallel_for(rows, threads, [&](std::size_t r) {
        std::vector<double> trace(cols);
        for (std::size_t c = 0; c < cols; ++c) trace[c] = ds.magnitudes(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        if (!std::all_of(trace.begin(), trace.end(), [](double v) { return std::isfinite(v); })) {
            row_warning[r] = "skipped trace at current " + std::to_string(ds.currents[r]) + " A: non-finite values";
            return;
        }
        const std::vector<double> smooth = detail::moving_average(trace, smoothing_window);
        const auto [lo, hi] = std::minmax_element(smooth.begin(), smooth.end());
        const double range = *hi - *lo;
        if (!(range > 0.0)) return;
        const double base = detail::median(smooth);
        std::vector<double> s(cols);
        for (std::size_t c = 0; c < cols; ++c) s[c] = std::abs(smooth[c] - base);

        const double threshold = min_prominence * range;
        for (std::size_t i = 1; i + 1 < cols; ++i) {
            if (!(s[i] > s[i - 1] && s[i] >= s[i + 1])) continue;
            if (s[i] < threshold) continue;  // prominence never exceeds the height
            const double prom = detail::prominence_at(s, i);
            if (prom < threshold) continue;
            const double f = detail::parabolic_vertex(ds.frequencies[i - 1], s[i - 1], ds.frequencies[i], s[i],
                                                      ds.frequencies[i + 1], s[i + 1]);
            per_row[r].push_back({ds.currents[r], f, prom / range, {}});
        }
    });

    PeakSet out;
    for (std::size_t r = 0; r < rows; ++r) {
        out.peaks.insert(out.peaks.end(), per_row[r].begin(), per_row[r].end());
        if (!row_warning[r].empty()) out.warnings.push_back(row_warning[r]);
    }
    return out;
}

/// Model line positions at one coil current. NaN marks a line the model
/// could not evaluate there.
struct LinePrediction {
    double current = 0.0;
    std::vector<std::string> names;
    std::vector<double> frequencies;
};

/// Labels each peak with the nearest predicted line within max_distance.
///
/// At most one peak per line per current survives: the nearest, with ties
/// going to the earlier peak. Losing and out-of-range peaks are unassigned.
/// Predictions are matched to peaks by exact current.
inline PeakSet assign_peaks_to_lines(PeakSet peaks, const std::vector<LinePrediction>& prediction,
                                     double max_distance) {
    std::map<double, std::size_t> by_current;
    for (std::size_t k = 0; k < prediction.size(); ++k) by_current.emplace(prediction[k].current, k);

    struct Claim {
        std::size_t peak;
        double distance;
    };
    std::map<std::pair<std::size_t, std::size_t>, Claim> winners;  // (prediction, line) -> claim

    for (std::size_t i = 0; i < peaks.peaks.size(); ++i) {
        Peak& peak = peaks.peaks[i];
        peak.line.clear();
        const auto it = by_current.find(peak.current);
        if (it == by_current.end())
            throw std::invalid_argument("assign_peaks_to_lines: no prediction at current " +
                                        std::to_string(peak.current));
        const LinePrediction& pred = prediction[it->second];
        std::size_t best = pred.frequencies.size();
        double best_distance = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < pred.frequencies.size(); ++k) {
            const double dist = std::abs(peak.frequency - pred.frequencies[k]);
            if (dist < best_distance) {
                best = k;
                best_distance = dist;
            }
        }
        if (best == pred.frequencies.size() || !(best_distance <= max_distance)) continue;
        const auto key = std::make_pair(it->second, best);
        const auto found = winners.find(key);
        if (found == winners.end() || best_distance < found->second.distance) winners[key] = {i, best_distance};
    }
    for (const auto& [key, claim] : winners) peaks.peaks[claim.peak].line = prediction[key.first].names[key.second];
    return peaks;
}

}  // namespace cqed
