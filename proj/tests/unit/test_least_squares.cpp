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

#include "cqed/least_squares.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace lsq = cqed::lsq;

namespace {

Eigen::VectorXd unbounded(Eigen::Index n, double sign) {
    return Eigen::VectorXd::Constant(n, sign * std::numeric_limits<double>::infinity());
}

}  // namespace

TEST_CASE("straight-line fit matches the normal equations", "[lsq]") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> noise(0.0, 0.1);
    const int m = 40;
    Eigen::VectorXd t(m), y(m);
    for (int k = 0; k < m; ++k) {
        t(k) = 0.25 * k;
        y(k) = 1.5 - 0.7 * t(k) + noise(rng);
    }
    Eigen::MatrixXd design(m, 2);
    design.col(0).setOnes();
    design.col(1) = t;
    const Eigen::Vector2d exact = (design.transpose() * design).ldlt().solve(design.transpose() * y);

    auto residual = [&](const Eigen::VectorXd& p) { return (design * p - y).eval(); };
    auto jacobian = [&](const Eigen::VectorXd&) { return design; };
    const lsq::Result res =
        lsq::levenberg_marquardt(residual, jacobian, Eigen::Vector2d(0.0, 0.0), unbounded(2, -1), unbounded(2, 1));
    REQUIRE(res.converged);
    CHECK_THAT(res.x(0), WithinRel(exact(0), 1e-8));
    CHECK_THAT(res.x(1), WithinRel(exact(1), 1e-8));

    const Eigen::MatrixXd cov = lsq::covariance(res.jacobian, res.cost);
    const double s2 = (design * exact - y).squaredNorm() / (m - 2);
    const Eigen::MatrixXd ref = s2 * (design.transpose() * design).inverse();
    CHECK(cov.isApprox(ref, 1e-8));
}

TEST_CASE("Rosenbrock valley", "[lsq]") {
    auto residual = [](const Eigen::VectorXd& p) {
        return Eigen::Vector2d(10.0 * (p(1) - p(0) * p(0)), 1.0 - p(0)).eval();
    };
    auto jacobian = [](const Eigen::VectorXd& p) {
        Eigen::Matrix2d j;
        j << -20.0 * p(0), 10.0, -1.0, 0.0;
        return Eigen::MatrixXd(j);
    };
    const lsq::Result res =
        lsq::levenberg_marquardt(residual, jacobian, Eigen::Vector2d(-1.2, 1.0), unbounded(2, -1), unbounded(2, 1));
    REQUIRE(res.converged);
    CHECK_THAT(res.x(0), WithinAbs(1.0, 1e-8));
    CHECK_THAT(res.x(1), WithinAbs(1.0, 1e-8));
    CHECK(res.cost < 1e-20);
}

TEST_CASE("bounds are respected", "[lsq]") {
    auto residual = [](const Eigen::VectorXd& p) { return Eigen::VectorXd::Constant(1, p(0) - 3.0).eval(); };
    auto jacobian = [](const Eigen::VectorXd&) { return Eigen::MatrixXd::Ones(1, 1).eval(); };
    const lsq::Result res = lsq::levenberg_marquardt(residual, jacobian, Eigen::VectorXd::Constant(1, 0.0),
                                                     Eigen::VectorXd::Constant(1, -1.0),
                                                     Eigen::VectorXd::Constant(1, 2.0));
    CHECK(res.converged);
    CHECK(res.x(0) == 2.0);
    CHECK_THROWS_AS(lsq::levenberg_marquardt(residual, jacobian, Eigen::VectorXd::Zero(1), Eigen::VectorXd::Zero(2),
                                             Eigen::VectorXd::Zero(1)),
                    std::invalid_argument);
}

TEST_CASE("finite-difference stencils converge to the analytic Jacobian", "[lsq]") {
    auto fn = [](const Eigen::VectorXd& p) {
        return Eigen::Vector3d(std::sin(p(0)) * p(1), std::exp(0.3 * p(1)), p(0) * p(0) * p(1)).eval();
    };
    const Eigen::Vector2d x(0.7, -1.3);
    Eigen::MatrixXd exact(3, 2);
    exact << std::cos(x(0)) * x(1), std::sin(x(0)), 0.0, 0.3 * std::exp(0.3 * x(1)), 2.0 * x(0) * x(1), x(0) * x(0);
    const double fwd = (lsq::finite_difference_jacobian(fn, x, 1e-7, lsq::Stencil::forward) - exact).norm();
    const double c2 = (lsq::finite_difference_jacobian(fn, x, 1e-5, lsq::Stencil::central2) - exact).norm();
    const double c4 = (lsq::finite_difference_jacobian(fn, x, 1e-3, lsq::Stencil::central4) - exact).norm();
    CHECK(fwd < 1e-6);
    CHECK(c2 < 1e-9);
    CHECK(c4 < 1e-11);
}

TEST_CASE("covariance of a rank-deficient Jacobian is empty", "[lsq]") {
    Eigen::MatrixXd j(4, 2);
    j << 1, 2, 2, 4, 3, 6, 4, 8;
    CHECK(lsq::covariance(j, 1.0).size() == 0);
    CHECK(lsq::covariance(Eigen::MatrixXd::Zero(3, 2), 1.0).size() == 0);
}
