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

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "cqed/dressed.hpp"
#include "cqed/junction.hpp"
#include "cqed/lines.hpp"
#include "cqed/transmon.hpp"

namespace cqed {

struct ModelConfig {
    ChargeBasisConfig basis;
    int n_q_levels = 6;
};

/// Full dressed solve at one flux point; tp_base supplies E_C and n_g, E_J
/// comes from the SQUID.
inline DressedSpectrum solve_at_flux(const SquidParams& squid, const TransmonParams& tp_base,
                                     const CavityParams& cav, double phi_ratio, const ModelConfig& model) {
    TransmonParams tp = tp_base;
    tp.e_j = ej_of_flux(squid, phi_ratio);
    const TransmonEigens te = solve_transmon(tp, model.basis, model.n_q_levels);
    return solve_dressed(te, model.n_q_levels, cav);
}

struct SweepOptions {
    ModelConfig model;
    /// Worker threads; 0 picks the hardware concurrency.
    unsigned threads = 0;
};

struct SweepRow {
    double current = 0.0;     // A
    double flux_ratio = 0.0;  // Phi / Phi0
    std::string line;
    double frequency = std::numeric_limits<double>::quiet_NaN();  // GHz
    std::string status = "ok";
};

namespace detail {

inline const char* status_of(const std::exception& e) {
    if (dynamic_cast<const MissingLabel*>(&e)) return "missing_label";
    if (dynamic_cast<const CutoffError*>(&e)) return "cutoff";
    if (dynamic_cast<const ConvergenceError*>(&e)) return "convergence";
    if (dynamic_cast<const DimensionError*>(&e)) return "dimension";
    return "error";
}

/// Runs body(i) for i in [0, count) across a few threads. Each index is
/// handled exactly once, so writes into per-index slots need no locking.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) body(i);
        });
}

}  // namespace detail

/// Line frequencies across a list of coil currents.
///
/// Rows come out sorted by current, then in request order. A point that fails
/// keeps its rows, with a NaN frequency and the failure in `status`. Lines
/// through a state whose label is ambiguous keep their frequency and get
/// status "ambiguous".
inline std::vector<SweepRow> flux_sweep_spectrum(const SquidParams& squid, const FluxCalibration& cal,
                                                 const TransmonParams& tp_base, const CavityParams& cav,
                                                 const std::vector<double>& currents,
                                                 const std::vector<LineRequest>& lines,
                                                 const SweepOptions& options = {}) {
    squid.validate();
    cal.validate();
    cav.validate();
    tp_base.validate();
    options.model.basis.validate();
    if (options.model.n_q_levels < 1 || options.model.n_q_levels > options.model.basis.dimension())
        throw std::invalid_argument("flux_sweep_spectrum: n_q_levels out of range");
    if (lines.empty()) throw std::invalid_argument("flux_sweep_spectrum: no lines requested");

    std::vector<std::size_t> order(currents.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return currents[a] < currents[b]; });

    std::vector<SweepRow> rows(currents.size() * lines.size());
    detail::parallel_for(order.size(), options.threads, [&](std::size_t slot) {
        const double current = currents[order[slot]];
        const double phi = flux_from_current(cal, current);
        SweepRow* out = &rows[slot * lines.size()];
        for (std::size_t k = 0; k < lines.size(); ++k) out[k] = {current, phi, lines[k].name()};
        try {
            const DressedSpectrum ds = solve_at_flux(squid, tp_base, cav, phi, options.model);
            for (std::size_t k = 0; k < lines.size(); ++k) {
                try {
                    out[k].frequency = evaluate_line(ds, lines[k]).frequency;
                } catch (const MissingLabel&) {
                    // Either absent or mixed beyond recognition; keep the
                    // frequency in the second case but flag it.
                    try {
                        out[k].frequency = evaluate_line(ds, lines[k], true).frequency;
                        out[k].status = "ambiguous";
                    } catch (const std::exception& e) {
                        out[k].status = detail::status_of(e);
                    }
                } catch (const std::exception& e) {
                    out[k].status = detail::status_of(e);
                }
            }
        } catch (const std::exception& e) {
            for (std::size_t k = 0; k < lines.size(); ++k) out[k].status = detail::status_of(e);
        }
    });
    return rows;
}

}  // namespace cqed
