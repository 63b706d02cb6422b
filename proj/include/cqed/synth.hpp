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

// Synthetic two-tone spectroscopy maps rendered from the dressed model.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "cqed/peaks.hpp"
#include "cqed/spectrum_fit.hpp"

namespace cqed {

struct SynthOptions {
    std::vector<double> currents;  // A
    double freq_start = 1.0;       // GHz
    double freq_stop = 8.0;
    double freq_step = 1e-3;
    double linewidth = 5e-3;   // Gaussian sigma, GHz
    double amplitude = 1.0;
    double freq_noise = 0.0;   // sigma of per-point line jitter, GHz
    double amp_noise = 0.0;    // sigma of additive magnitude noise
    std::uint64_t seed = 0;

    void validate() const {
        if (currents.empty()) throw std::invalid_argument("synth: no currents");
        if (!(freq_step > 0.0) || !(freq_stop > freq_start))
            throw std::invalid_argument("synth: need freq_stop > freq_start and freq_step > 0");
        if (!(linewidth > 0.0)) throw std::invalid_argument("synth: linewidth must be > 0");
        if (freq_noise < 0.0 || amp_noise < 0.0) throw std::invalid_argument("synth: noise levels must be >= 0");
    }
};

/// Uniform frequency axis from freq_start to freq_stop inclusive (rounded to
/// whole steps).
inline std::vector<double> frequency_axis(double start, double stop, double step) {
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 0.5)) + 1;
    std::vector<double> axis(count);
    for (std::size_t k = 0; k < count; ++k) axis[k] = start + static_cast<double>(k) * step;
    return axis;
}

/// Gaussian lines at the model's frequencies on a current x frequency grid.
/// Points where a line cannot be evaluated are left out. Deterministic for a
/// fixed seed.
inline SpectroscopyDataset synthesize_spectroscopy(const Theta& theta, const SpectrumModel& model,
                                                   const SynthOptions& opt) {
    opt.validate();
    SpectroscopyDataset ds;
    ds.currents = opt.currents;
    std::sort(ds.currents.begin(), ds.currents.end());
    ds.frequencies = frequency_axis(opt.freq_start, opt.freq_stop, opt.freq_step);
    ds.magnitudes = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(ds.currents.size()),
                                          static_cast<Eigen::Index>(ds.frequencies.size()));
    ds.validate();

    const std::vector<LinePrediction> lines = model.predict(theta, ds.currents);
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double reach = 8.0 * opt.linewidth;
    const auto cols = static_cast<Eigen::Index>(ds.frequencies.size());

    for (Eigen::Index r = 0; r < ds.magnitudes.rows(); ++r) {
        for (double center : lines[static_cast<std::size_t>(r)].frequencies) {
            const double jitter = opt.freq_noise > 0.0 ? opt.freq_noise * normal(rng) : 0.0;
            if (!std::isfinite(center)) continue;
            center += jitter;
            const auto first = static_cast<Eigen::Index>(
                std::max(0.0, std::ceil((center - reach - opt.freq_start) / opt.freq_step)));
            for (Eigen::Index c = first; c < cols; ++c) {
                const double offset = ds.frequencies[static_cast<std::size_t>(c)] - center;
                if (offset > reach) break;
                ds.magnitudes(r, c) += opt.amplitude * std::exp(-0.5 * offset * offset / (opt.linewidth * opt.linewidth));
            }
        }
        if (opt.amp_noise > 0.0)
            for (Eigen::Index c = 0; c < cols; ++c) ds.magnitudes(r, c) += opt.amp_noise * normal(rng);
    }
    return ds;
}

}  // namespace cqed
