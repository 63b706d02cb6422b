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
#include <random>

#include "cqed/decay_fit.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

cqed::DecayTrace make_trace(double a, double b, double t1, double span, int points, double noise = 0.0,
                            std::uint64_t seed = 0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n01(0.0, 1.0);
    cqed::DecayTrace tr;
    for (int k = 0; k < points; ++k) {
        const double t = span * k / (points - 1);
        tr.delays_us.push_back(t);
        tr.population.push_back(a * std::exp(-t / t1) + b + noise * std::abs(a) * n01(rng));
    }
    return tr;
}

}  // namespace

TEST_CASE("noiseless traces are fitted exactly", "[decay_fit]") {
    for (double t1 : {0.08, 0.69}) {
        const cqed::DecayFit fit = cqed::fit_exponential_decay(make_trace(1.0, 0.0, t1, 5.0 * t1, 50));
        CHECK_THAT(fit.t1_us, WithinRel(t1, 1e-6));
        CHECK_THAT(fit.amplitude, WithinRel(1.0, 1e-6));
        CHECK_THAT(fit.offset, WithinAbs(0.0, 1e-6));
        CHECK(fit.residual_rms < 1e-9);
    }
    // Rising trace with an offset, as for a ground-state readout.
    const cqed::DecayFit rising = cqed::fit_exponential_decay(make_trace(-0.8, 0.9, 0.3, 1.5, 30));
    CHECK_THAT(rising.t1_us, WithinRel(0.3, 1e-6));
    CHECK_THAT(rising.amplitude, WithinRel(-0.8, 1e-6));
}

TEST_CASE("noisy short T1 lands within the quoted uncertainty", "[decay_fit]") {
    int inside = 0, covered = 0;
    const int trials = 50;
    for (int s = 0; s < trials; ++s) {
        const cqed::DecayFit fit = cqed::fit_exponential_decay(make_trace(1.0, 0.05, 0.08, 0.5, 51, 0.05, 100 + s));
        if (std::abs(fit.t1_us - 0.08) <= 0.01) ++inside;
        if (std::abs(fit.t1_us - 0.08) <= fit.t1_sigma_us) ++covered;
    }
    CHECK(inside >= 0.68 * trials);
    // The curvature error bar is honest to within the binomial spread.
    CHECK(covered >= 0.5 * trials);
    CHECK(covered <= 0.9 * trials);
}

TEST_CASE("scaling the delays scales T1", "[decay_fit]") {
    const cqed::DecayTrace base = make_trace(1.0, 0.1, 0.2, 1.0, 40, 0.03, 8);
    const double t1 = cqed::fit_exponential_decay(base).t1_us;
    for (double lambda : {0.5, 4.0, 3.7, 1e-3}) {
        cqed::DecayTrace scaled = base;
        for (double& t : scaled.delays_us) t *= lambda;
        const double t1s = cqed::fit_exponential_decay(scaled).t1_us;
        if (lambda == 0.5 || lambda == 4.0)
            CHECK(t1s == t1 * lambda);
        else
            CHECK_THAT(t1s, WithinRel(t1 * lambda, 1e-12));
    }
}

TEST_CASE("decay fit errors", "[decay_fit]") {
    SECTION("flat trace") {
        cqed::DecayTrace flat;
        for (int k = 0; k < 20; ++k) {
            flat.delays_us.push_back(0.1 * k);
            flat.population.push_back(0.4);
        }
        CHECK_THROWS_AS(cqed::fit_exponential_decay(flat), cqed::NonDecaying);
    }
    SECTION("too few points") {
        CHECK_THROWS_AS(cqed::fit_exponential_decay(make_trace(1.0, 0.0, 0.5, 1.0, 3)), cqed::InsufficientData);
        CHECK_THROWS_AS(cqed::fit_exponential_decay(make_trace(1.0, 0.0, 0.5, 1.0, 2)), cqed::InsufficientData);
    }
    SECTION("malformed traces") {
        cqed::DecayTrace tr = make_trace(1.0, 0.0, 0.5, 1.0, 10);
        tr.delays_us[3] = tr.delays_us[2];
        CHECK_THROWS_AS(cqed::fit_exponential_decay(tr), cqed::DataError);
        tr = make_trace(1.0, 0.0, 0.5, 1.0, 10);
        tr.population.pop_back();
        CHECK_THROWS_AS(cqed::fit_exponential_decay(tr), cqed::DataError);
    }
}
