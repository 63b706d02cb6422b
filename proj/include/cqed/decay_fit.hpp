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

// Energy-relaxation fits: y(t) = A exp(-t / T1) + B.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "cqed/errors.hpp"
#include "cqed/least_squares.hpp"

namespace cqed {

struct DecayTrace {
    std::vector<double> delays_us;
    std::vector<double> population;

    void validate() const {
        if (delays_us.size() != population.size()) throw DataError("decay trace: column lengths differ");
        for (std::size_t k = 0; k < delays_us.size(); ++k) {
            if (!std::isfinite(delays_us[k]) || !std::isfinite(population[k]))
                throw DataError("decay trace: non-finite value at row " + std::to_string(k));
            if (delays_us[k] < 0.0) throw DataError("decay trace: negative delay");
            if (k > 0 && !(delays_us[k] > delays_us[k - 1])) throw DataError("decay trace: delays not ascending");
        }
    }
};

struct DecayFit {
    double amplitude = 0.0;
    double offset = 0.0;
    double t1_us = 0.0;
    double t1_sigma_us = 0.0;
    double residual_rms = 0.0;
    int iterations = 0;
};

/// Upper bound on T1 as a multiple of the longest delay; a fit that ends
/// there is reported as NonDecaying.
inline constexpr double kMaxT1OverSpan = 1e3;

/// Least-squares fit of A exp(-t / T1) + B.
///
/// Starts from B = tail mean, A = head mean - B and a log-linear estimate of
/// T1, then refines all three with Levenberg-Marquardt. Time is normalized by
/// the longest delay internally.
inline DecayFit fit_exponential_decay(const DecayTrace& trace) {
    trace.validate();
    const std::size_t n = trace.delays_us.size();
    if (n < 4) throw InsufficientData("decay fit needs at least 4 points, got " + std::to_string(n));
    const double span = trace.delays_us.back();
    if (!(span > 0.0)) throw InsufficientData("decay trace has zero duration");

    Eigen::VectorXd tau(static_cast<Eigen::Index>(n)), y(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) {
        tau(static_cast<Eigen::Index>(k)) = trace.delays_us[k] / span;
        y(static_cast<Eigen::Index>(k)) = trace.population[k];
    }

    const Eigen::Index window = std::max<Eigen::Index>(2, static_cast<Eigen::Index>(n) / 5);
    const double offset0 = y.tail(window).mean();
    const double amplitude0 = y.head(window).mean() - offset0;
    const double spread = y.maxCoeff() - y.minCoeff();
    if (!(std::abs(amplitude0) > 1e-12 * std::max(spread, std::abs(offset0))) || !(spread > 0.0))
        throw NonDecaying("trace shows no decay between head and tail");

    // log((y - B) / A) = -tau / T over the points still well above the offset.
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int used = 0;
    for (Eigen::Index k = 0; k < tau.size(); ++k) {
        const double ratio = (y(k) - offset0) / amplitude0;
        if (ratio <= 0.05) continue;
        const double ly = std::log(ratio);
        sx += tau(k);
        sy += ly;
        sxx += tau(k) * tau(k);
        sxy += tau(k) * ly;
        ++used;
    }
    double t0 = 0.3;
    if (used >= 2) {
        const double slope = (used * sxy - sx * sy) / (used * sxx - sx * sx);
        if (slope < 0.0 && std::isfinite(slope)) t0 = -1.0 / slope;
    }
    t0 = std::clamp(t0, 1e-4, 0.5 * kMaxT1OverSpan);

    auto residual = [&](const Eigen::VectorXd& p) {
        return (p(0) * (-tau.array() / p(2)).exp() + p(1) - y.array()).matrix().eval();
    };
    auto jacobian = [&](const Eigen::VectorXd& p) {
        Eigen::MatrixXd jac(tau.size(), 3);
        const Eigen::ArrayXd e = (-tau.array() / p(2)).exp();
        jac.col(0) = e.matrix();
        jac.col(1).setOnes();
        jac.col(2) = (p(0) * e * tau.array() / (p(2) * p(2))).matrix();
        return jac;
    };
    constexpr double inf = std::numeric_limits<double>::infinity();
    Eigen::Vector3d start(amplitude0, offset0, t0);
    Eigen::Vector3d lower(-inf, -inf, 1e-9);
    Eigen::Vector3d upper(inf, inf, kMaxT1OverSpan);
    lsq::Options opt;
    opt.step_tolerance = 1e-12;
    const lsq::Result res = lsq::levenberg_marquardt(residual, jacobian, start, lower, upper, opt);

    if (res.x(2) >= kMaxT1OverSpan * (1.0 - 1e-9))
        throw NonDecaying("fitted T1 ran to the upper bound (" + std::to_string(kMaxT1OverSpan * span) + " us)");
    if (!res.converged) throw NoConvergence("decay fit did not converge");

    DecayFit out;
    out.amplitude = res.x(0);
    out.offset = res.x(1);
    out.t1_us = res.x(2) * span;
    const Eigen::MatrixXd cov = lsq::covariance(res.jacobian, res.cost);
    out.t1_sigma_us = cov.size() > 0 ? std::sqrt(std::max(cov(2, 2), 0.0)) * span : 0.0;
    out.residual_rms = std::sqrt(res.cost / static_cast<double>(n));
    out.iterations = res.iterations;
    return out;
}

}  // namespace cqed
