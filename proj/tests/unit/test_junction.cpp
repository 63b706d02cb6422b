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
#include <complex>
#include <random>

#include "cqed/junction.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// |E_J1 + E_J2 exp(2 pi i x)| for the two junctions of the loop.
double two_junction_oracle(double ej_sum, double d, double x) {
    const double e1 = 0.5 * ej_sum * (1.0 - d);
    const double e2 = 0.5 * ej_sum * (1.0 + d);
    return std::abs(std::complex<double>(e1) + e2 * std::polar(1.0, 2.0 * std::acos(-1.0) * x));
}

// E_J / h = Delta / (8 e R_n) with the exact SI electron charge.
constexpr double kElectron = 1.602176634e-19;

}  // namespace

TEST_CASE("SQUID energy matches the two-junction phasor sum", "[junction]") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> flux(-3.0, 3.0), asym(0.0, 0.99), total(0.1, 60.0);
    for (int k = 0; k < 1000; ++k) {
        const cqed::SquidParams s{total(rng), asym(rng)};
        const double x = flux(rng);
        CHECK_THAT(cqed::ej_of_flux(s, x), WithinRel(two_junction_oracle(s.ej_sum, s.d, x), 1e-12));
    }
}

TEST_CASE("SQUID energy at the sweet spots", "[junction]") {
    const cqed::SquidParams s{11.6, 0.35};
    CHECK(cqed::ej_of_flux(s, 0.0) == 11.6);
    CHECK_THAT(cqed::ej_of_flux(s, 0.5), WithinRel(0.35 * 11.6, 1e-14));
    CHECK_THAT(cqed::ej_of_flux(s, 0.5 - 1e-9), WithinRel(0.35 * 11.6, 1e-12));
    CHECK_THAT(cqed::ej_of_flux({11.6, 0.0}, 0.5), WithinAbs(0.0, 1e-12));
}

TEST_CASE("flux calibration round trip", "[junction]") {
    const cqed::FluxCalibration cal{-0.12e-3, 0.93e-3};
    for (double phi : {-1.3, -0.5, 0.0, 0.25, 2.0})
        CHECK_THAT(cqed::flux_from_current(cal, cqed::current_from_flux(cal, phi)), WithinAbs(phi, 1e-12));
    CHECK(cqed::flux_from_current(cal, -0.12e-3) == 0.0);
    CHECK_THROWS_AS((cqed::FluxCalibration{0.0, 0.0}.validate()), std::invalid_argument);
}

TEST_CASE("Ambegaokar-Baratoff inversion", "[junction]") {
    SECTION("gap inferred from the device values") {
        const double gap_a = cqed::ab_inferred_gap(1.9e3, 13.7);
        const double gap_b = cqed::ab_inferred_gap(2.4e3, 11.6);
        CHECK_THAT(gap_a, WithinRel(8.0 * kElectron * 1.9e3 * 13.7e9, 1e-9));
        CHECK_THAT(gap_b, WithinRel(8.0 * kElectron * 2.4e3 * 11.6e9, 1e-9));
        CHECK_THAT(gap_a * 1e6, WithinAbs(33.36, 0.01));
        CHECK_THAT(gap_b * 1e6, WithinAbs(35.68, 0.01));
        CHECK_THAT(162e-6 / gap_a, WithinAbs(4.86, 0.01));
    }
    SECTION("forward and inverse agree") {
        for (double gap_uv : {33.0, 162.0, 390.0}) {
            const double ej = cqed::ab_josephson_energy({2.4e3, gap_uv * 1e-6});
            CHECK_THAT(cqed::ab_inferred_gap(2.4e3, ej), WithinRel(gap_uv * 1e-6, 1e-12));
        }
        // Aluminium gap at 2.4 kOhm would give ~52.7 GHz.
        CHECK_THAT(cqed::ab_josephson_energy({2.4e3, 162e-6}), WithinAbs(52.66, 0.01));
    }
    SECTION("non-physical input") {
        CHECK_THROWS_AS(cqed::ab_inferred_gap(0.0, 11.6), std::invalid_argument);
        CHECK_THROWS_AS(cqed::ab_inferred_gap(-5.0, 11.6), std::invalid_argument);
        CHECK_THROWS_AS(cqed::JunctionDC({0.0, 1e-4}).validate(), std::invalid_argument);
    }
}
