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

#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <random>

#include "cqed/peaks.hpp"
#include "cqed/synth.hpp"

using Catch::Matchers::WithinAbs;

namespace {

cqed::SpectroscopyDataset lorentzian_grid(const std::vector<double>& centers, double start, double stop, double step,
                                          double hwhm = 4e-3) {
    cqed::SpectroscopyDataset ds;
    ds.currents = {0.0};
    for (double f = start; f <= stop + 1e-12; f += step) ds.frequencies.push_back(f);
    ds.magnitudes = Eigen::MatrixXd::Zero(1, static_cast<Eigen::Index>(ds.frequencies.size()));
    for (std::size_t c = 0; c < ds.frequencies.size(); ++c)
        for (double f0 : centers) {
            const double u = (ds.frequencies[c] - f0) / hwhm;
            ds.magnitudes(0, static_cast<Eigen::Index>(c)) += 1.0 / (1.0 + u * u);
        }
    return ds;
}

}  // namespace

TEST_CASE("single line is found within half a step", "[peaks]") {
    const double step = 1e-3;
    for (double center : {3.460, 3.4604, 3.4597}) {
        const cqed::PeakSet ps = cqed::extract_peaks(lorentzian_grid({center}, 3.3, 3.6, step), 1, 0.2);
        REQUIRE(ps.peaks.size() == 1);
        CHECK_THAT(ps.peaks[0].frequency, WithinAbs(center, 0.5 * step));
        CHECK(ps.peaks[0].current == 0.0);
        CHECK_FALSE(ps.peaks[0].assigned());
    }
}

TEST_CASE("two separated lines give exactly two peaks", "[peaks]") {
    const cqed::PeakSet ps = cqed::extract_peaks(lorentzian_grid({3.1, 3.6}, 3.0, 3.8, 1e-3), 3, 0.2);
    REQUIRE(ps.peaks.size() == 2);
    CHECK_THAT(ps.peaks[0].frequency, WithinAbs(3.1, 5e-4));
    CHECK_THAT(ps.peaks[1].frequency, WithinAbs(3.6, 5e-4));
}

TEST_CASE("extraction is invariant under affine rescaling", "[peaks]") {
    cqed::SpectroscopyDataset ds = lorentzian_grid({3.2, 3.45, 3.47}, 3.0, 3.8, 1e-3);
    std::mt19937_64 rng(2);
    std::normal_distribution<double> noise(0.0, 0.02);
    for (Eigen::Index c = 0; c < ds.magnitudes.cols(); ++c) ds.magnitudes(0, c) += noise(rng);
    const cqed::PeakSet base = cqed::extract_peaks(ds, 3, 0.1);
    REQUIRE(base.peaks.size() >= 3);
    for (auto [a, b] : {std::pair{4.0, -1.5}, std::pair{-0.25, 7.0}, std::pair{1e3, 1e3}}) {
        cqed::SpectroscopyDataset scaled = ds;
        scaled.magnitudes = (a * ds.magnitudes.array() + b).matrix();
        const cqed::PeakSet other = cqed::extract_peaks(scaled, 3, 0.1);
        REQUIRE(other.peaks.size() == base.peaks.size());
        for (std::size_t k = 0; k < base.peaks.size(); ++k) {
            CHECK_THAT(other.peaks[k].frequency, WithinAbs(base.peaks[k].frequency, 1e-9));
            CHECK_THAT(other.peaks[k].prominence, WithinAbs(base.peaks[k].prominence, 1e-9));
        }
    }
}

TEST_CASE("degenerate traces", "[peaks]") {
    SECTION("trace with NaN is skipped with a warning") {
        cqed::SpectroscopyDataset ds = lorentzian_grid({3.46}, 3.3, 3.6, 1e-3);
        ds.currents = {0.0, 1e-4};
        ds.magnitudes.conservativeResize(2, Eigen::NoChange);
        ds.magnitudes.row(1) = ds.magnitudes.row(0);
        ds.magnitudes.row(0).setConstant(std::numeric_limits<double>::quiet_NaN());
        const cqed::PeakSet ps = cqed::extract_peaks(ds, 1, 0.2);
        REQUIRE(ps.peaks.size() == 1);
        CHECK(ps.peaks[0].current == 1e-4);
        REQUIRE(ps.warnings.size() == 1);
    }
    SECTION("fewer than three frequencies") {
        cqed::SpectroscopyDataset ds;
        ds.currents = {0.0};
        ds.frequencies = {1.0, 2.0};
        ds.magnitudes = Eigen::MatrixXd::Ones(1, 2);
        CHECK_THROWS_AS(cqed::extract_peaks(ds, 1, 0.2), cqed::EmptyColumn);
    }
    SECTION("flat trace has no peaks") {
        cqed::SpectroscopyDataset ds = lorentzian_grid({}, 3.3, 3.6, 1e-3);
        CHECK(cqed::extract_peaks(ds, 1, 0.2).peaks.empty());
    }
    SECTION("bad arguments") {
        const cqed::SpectroscopyDataset ds = lorentzian_grid({3.46}, 3.3, 3.6, 1e-3);
        CHECK_THROWS_AS(cqed::extract_peaks(ds, 2, 0.2), std::invalid_argument);
        CHECK_THROWS_AS(cqed::extract_peaks(ds, 1, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(cqed::extract_peaks(ds, 1, 1.5), std::invalid_argument);
    }
}

TEST_CASE("noisy synthetic map recovers the model line", "[peaks]") {
    const cqed::Theta theta{0.14, 11.6, 0.35, 7.0, 0.07, 0.0, 1e-3};
    cqed::SpectrumModel model;
    model.lines = {cqed::LineRequest::parse("0.0>1.0")};
    cqed::SynthOptions opt;
    for (int k = 0; k < 25; ++k) opt.currents.push_back(-0.45e-3 + 0.0375e-3 * k);
    opt.freq_start = 1.0;
    opt.freq_stop = 4.0;
    opt.linewidth = 5e-3;
    opt.amp_noise = 0.1;  // SNR 10
    opt.seed = 99;
    const cqed::SpectroscopyDataset ds = cqed::synthesize_spectroscopy(theta, model, opt);
    const auto truth = model.predict(theta, ds.currents);

    const cqed::PeakSet ps = cqed::extract_peaks(ds, 5, 0.5, 2);
    double sum = 0.0;
    int found = 0;
    for (std::size_t r = 0; r < ds.currents.size(); ++r) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& p : ps.peaks)
            if (p.current == ds.currents[r]) best = std::min(best, std::abs(p.frequency - truth[r].frequencies[0]));
        if (best < 3.0 * opt.linewidth) {
            sum += best * best;
            ++found;
        }
    }
    CHECK(found == static_cast<int>(ds.currents.size()));
    CHECK(std::sqrt(sum / found) < 0.2 * opt.linewidth);
    // Same result whatever the thread count.
    const cqed::PeakSet serial = cqed::extract_peaks(ds, 5, 0.5, 1);
    REQUIRE(serial.peaks.size() == ps.peaks.size());
    for (std::size_t k = 0; k < ps.peaks.size(); ++k) CHECK(serial.peaks[k].frequency == ps.peaks[k].frequency);
}

TEST_CASE("assignment to predicted lines", "[peaks]") {
    const std::vector<cqed::LinePrediction> pred{{0.0, {"a", "b"}, {3.0, 4.0}}, {1.0, {"a", "b"}, {3.1, 4.1}}};
    SECTION("exact peaks all assigned") {
        cqed::PeakSet ps;
        ps.peaks = {{0.0, 3.0, 1, {}}, {0.0, 4.0, 1, {}}, {1.0, 3.1, 1, {}}, {1.0, 4.1, 1, {}}};
        const cqed::PeakSet out = cqed::assign_peaks_to_lines(ps, pred, 0.05);
        CHECK(out.assigned_count() == 4);
        CHECK(out.peaks[1].line == "b");
        CHECK(out.peaks[2].line == "a");
    }
    SECTION("far peak stays unassigned") {
        cqed::PeakSet ps;
        ps.peaks = {{0.0, 3.5, 1, {}}};
        CHECK(cqed::assign_peaks_to_lines(ps, pred, 0.1).assigned_count() == 0);
    }
    SECTION("equidistant peaks: the earlier one wins") {
        // Offsets exact in binary so both distances are bit-identical.
        cqed::PeakSet ps;
        ps.peaks = {{0.0, 3.0 + 0.03125, 1, {}}, {0.0, 3.0 - 0.03125, 1, {}}};
        const cqed::PeakSet out = cqed::assign_peaks_to_lines(ps, pred, 0.05);
        CHECK(out.peaks[0].line == "a");
        CHECK(out.peaks[1].line.empty());
    }
    SECTION("nearer peak wins regardless of order") {
        cqed::PeakSet ps;
        ps.peaks = {{0.0, 3.04, 1, {}}, {0.0, 3.01, 1, {}}};
        const cqed::PeakSet out = cqed::assign_peaks_to_lines(ps, pred, 0.05);
        CHECK(out.peaks[0].line.empty());
        CHECK(out.peaks[1].line == "a");
    }
    SECTION("missing prediction is a precondition violation") {
        cqed::PeakSet ps;
        ps.peaks = {{2.0, 3.0, 1, {}}};
        CHECK_THROWS_AS(cqed::assign_peaks_to_lines(ps, pred, 0.05), std::invalid_argument);
    }
}
