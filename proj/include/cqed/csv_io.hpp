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

// CSV readers and writers for spectroscopy grids, decay traces, sweeps and
// fit residuals. Numbers are written with printf-style formatting so output
// is byte-stable; NaN is written as "nan".

#pragma once

#include <Eigen/Dense>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "cqed/decay_fit.hpp"
#include "cqed/errors.hpp"
#include "cqed/peaks.hpp"
#include "cqed/spectrum_fit.hpp"
#include "cqed/sweep.hpp"

namespace cqed::csv {

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = line.find(',', pos);
        out.push_back(trim(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos)));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

/// Parses a full cell as a double; empty cells and "nan" give NaN.
inline bool parse_number(std::string_view s, double& value) {
    if (s.empty()) {
        value = std::numeric_limits<double>::quiet_NaN();
        return true;
    }
    if (s.front() == '+') s.remove_prefix(1);
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    return ec == std::errc() && end == s.data() + s.size();
}

inline double number_at(std::string_view s, std::size_t row, std::size_t col) {
    double v = 0.0;
    if (!parse_number(s, v))
        throw DataError("row " + std::to_string(row) + ", column " + std::to_string(col) + ": not a number: '" +
                        std::string(s) + "'");
    return v;
}

inline bool skippable(std::string_view line) {
    line = trim(line);
    return line.empty() || line.front() == '#';
}

inline std::string format(double v, int digits) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

template <typename Reader>
auto read_file(const std::string& path, Reader reader) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    return reader(in);
}

}  // namespace detail

/// Grid layout: first row is the frequency axis (GHz) after one label cell,
/// each following row is a current (A) and its magnitudes.
inline SpectroscopyDataset read_spectroscopy(std::istream& in) {
    SpectroscopyDataset ds;
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t row = 0;
    bool have_axis = false;
    while (std::getline(in, line)) {
        ++row;
        if (detail::skippable(line)) continue;
        const auto cells = detail::split(line);
        if (!have_axis) {
            if (cells.size() < 2) throw DataError("spectroscopy header has no frequency columns");
            for (std::size_t c = 1; c < cells.size(); ++c) {
                const double f = detail::number_at(cells[c], row, c + 1);
                if (!std::isfinite(f)) throw DataError("frequency axis has a non-finite entry in column " + std::to_string(c + 1));
                ds.frequencies.push_back(f);
            }
            have_axis = true;
            continue;
        }
        if (cells.size() != ds.frequencies.size() + 1)
            throw DataError("row " + std::to_string(row) + " has " + std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(ds.frequencies.size() + 1));
        const double current = detail::number_at(cells[0], row, 1);
        if (!std::isfinite(current)) throw DataError("row " + std::to_string(row) + ": non-finite current");
        ds.currents.push_back(current);
        std::vector<double> values(ds.frequencies.size());
        for (std::size_t c = 1; c < cells.size(); ++c) values[c - 1] = detail::number_at(cells[c], row, c + 1);
        rows.push_back(std::move(values));
    }
    if (!have_axis) throw DataError("spectroscopy file is empty");
    if (rows.empty()) throw DataError("spectroscopy file has no current rows");
    ds.magnitudes.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(ds.frequencies.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c)
            ds.magnitudes(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    ds.validate();
    return ds;
}

inline SpectroscopyDataset read_spectroscopy(const std::string& path) {
    return detail::read_file(path, [](std::istream& in) { return read_spectroscopy(in); });
}

inline void write_spectroscopy(std::ostream& out, const SpectroscopyDataset& ds) {
    ds.validate();
    std::string line = "current_A\\frequency_GHz";
    for (double f : ds.frequencies) line += "," + detail::format(f, 12);
    out << line << '\n';
    for (std::size_t r = 0; r < ds.currents.size(); ++r) {
        line = detail::format(ds.currents[r], 12);
        for (Eigen::Index c = 0; c < ds.magnitudes.cols(); ++c)
            line += "," + detail::format(ds.magnitudes(static_cast<Eigen::Index>(r), c), 8);
        out << line << '\n';
    }
}

/// Two columns (delay_us, population); a non-numeric first row is a header.
inline DecayTrace read_decay(std::istream& in) {
    DecayTrace trace;
    std::string line;
    std::size_t row = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++row;
        if (detail::skippable(line)) continue;
        const auto cells = detail::split(line);
        double probe = 0.0;
        if (first && !detail::parse_number(cells[0], probe)) {
            first = false;
            continue;
        }
        first = false;
        if (cells.size() != 2)
            throw DataError("decay row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                            " cells, expected 2");
        trace.delays_us.push_back(detail::number_at(cells[0], row, 1));
        trace.population.push_back(detail::number_at(cells[1], row, 2));
    }
    trace.validate();
    return trace;
}

inline DecayTrace read_decay(const std::string& path) {
    return detail::read_file(path, [](std::istream& in) { return read_decay(in); });
}

inline void write_decay(std::ostream& out, const DecayTrace& trace) {
    out << "delay_us,population\n";
    for (std::size_t k = 0; k < trace.delays_us.size(); ++k)
        out << detail::format(trace.delays_us[k], 12) << ',' << detail::format(trace.population[k], 12) << '\n';
}

inline void write_sweep(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "current_A,flux_ratio,line_kind,frequency_GHz,status\n";
    for (const SweepRow& r : rows)
        out << detail::format(r.current, 12) << ',' << detail::format(r.flux_ratio, 12) << ',' << r.line << ','
            << detail::format(r.frequency, 12) << ',' << r.status << '\n';
}

/// One row per peak; residual columns stay empty for unassigned peaks.
inline void write_residuals(std::ostream& out, const FitResult& fit) {
    out << "current_A,observed_GHz,prominence,line,predicted_GHz,residual_GHz\n";
    Eigen::Index k = 0;
    for (const Peak& p : fit.peaks.peaks) {
        out << detail::format(p.current, 12) << ',' << detail::format(p.frequency, 12) << ','
            << detail::format(p.prominence, 6) << ',' << p.line << ',';
        if (p.assigned() && k < fit.residuals.size()) {
            const double r = fit.residuals(k++);
            out << detail::format(p.frequency + r, 12) << ',' << detail::format(r, 6);
        } else {
            out << ',';
        }
        out << '\n';
    }
}

}  // namespace cqed::csv
