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

// Small dense nonlinear least squares: box-constrained Levenberg-Marquardt
// with Marquardt diagonal scaling, plus finite-difference Jacobians.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cqed::lsq {

struct Options {
    int max_iterations = 200;
    /// Converged once ||dx|| <= step_tolerance * (||x|| + step_tolerance).
    double step_tolerance = 1e-9;
    double initial_lambda = 1e-3;
};

struct Result {
    Eigen::VectorXd x;
    Eigen::VectorXd residuals;
    Eigen::MatrixXd jacobian;  // at x
    double cost = 0.0;         // sum of squared residuals
    int iterations = 0;
    double step_norm = std::numeric_limits<double>::infinity();  // relative, last accepted step
    bool converged = false;
};

enum class Stencil {
    forward,   // (f(x+h) - f(x)) / h
    central2,  // (f(x+h) - f(x-h)) / 2h
    central4,  // (-f(x+2h) + 8 f(x+h) - 8 f(x-h) + f(x-2h)) / 12h
};

/// m x n Jacobian of a vector function by finite differences with absolute
/// step h in every coordinate.
template <class Fn>
Eigen::MatrixXd finite_difference_jacobian(Fn&& fn, const Eigen::VectorXd& x, double h,
                                           Stencil stencil = Stencil::central2) {
    Eigen::MatrixXd jac;
    Eigen::VectorXd probe = x;
    auto at = [&](Eigen::Index j, double offset) {
        probe(j) = x(j) + offset;
        Eigen::VectorXd v = fn(probe);
        probe(j) = x(j);
        return v;
    };
    Eigen::VectorXd base;
    if (stencil == Stencil::forward) base = fn(x);
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        Eigen::VectorXd column;
        if (stencil == Stencil::forward) {
            column = (at(j, h) - base) / h;
        } else if (stencil == Stencil::central2) {
            column = (at(j, h) - at(j, -h)) / (2.0 * h);
        } else {
            column = (-at(j, 2.0 * h) + 8.0 * at(j, h) - 8.0 * at(j, -h) + at(j, -2.0 * h)) / (12.0 * h);
        }
        if (j == 0) jac.resize(column.size(), x.size());
        jac.col(j) = column;
    }
    return jac;
}

/// Minimizes ||residual(x)||^2 subject to lower <= x <= upper.
///
/// Trial points are projected onto the box. Each iteration evaluates the
/// Jacobian once; rejected trials only raise the damping. Iteration stops on
/// a small relative step, or when no damping can reduce the cost further.
template <class ResidualFn, class JacobianFn>
Result levenberg_marquardt(ResidualFn&& residual, JacobianFn&& jacobian, Eigen::VectorXd x,
                           const Eigen::VectorXd& lower, const Eigen::VectorXd& upper, const Options& opt = {}) {
    if (lower.size() != x.size() || upper.size() != x.size())
        throw std::invalid_argument("levenberg_marquardt: bound dimensions differ from x");
    x = x.cwiseMax(lower).cwiseMin(upper);

    Result out;
    Eigen::VectorXd r = residual(x);
    double cost = r.squaredNorm();
    double lambda = opt.initial_lambda;
    auto small = [&](const Eigen::VectorXd& step, const Eigen::VectorXd& at) {
        return step.norm() <= opt.step_tolerance * (at.norm() + opt.step_tolerance);
    };

    while (out.iterations < opt.max_iterations && !out.converged) {
        ++out.iterations;
        const Eigen::MatrixXd jac = jacobian(x);
        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        const Eigen::VectorXd grad = jac.transpose() * r;
        Eigen::VectorXd scale = jtj.diagonal();
        for (Eigen::Index k = 0; k < scale.size(); ++k)
            if (!(scale(k) > 0.0)) scale(k) = 1e-12;

        while (true) {
            Eigen::MatrixXd damped = jtj;
            damped.diagonal() += lambda * scale;
            const Eigen::VectorXd delta = damped.ldlt().solve(-grad);
            const Eigen::VectorXd trial = (x + delta).cwiseMax(lower).cwiseMin(upper);
            const Eigen::VectorXd step = trial - x;
            if (small(step, x)) {
                out.converged = true;
                break;
            }
            const Eigen::VectorXd r_trial = residual(trial);
            const double cost_trial = r_trial.squaredNorm();
            if (std::isfinite(cost_trial) && cost_trial < cost) {
                out.step_norm = step.norm() / (x.norm() + opt.step_tolerance);
                x = trial;
                r = r_trial;
                cost = cost_trial;
                lambda = std::max(lambda * 0.3, 1e-12);
                if (small(step, x)) out.converged = true;
                break;
            }
            lambda *= 10.0;
            if (lambda > 1e16) {
                // Cost cannot be reduced at any damping: stationary to rounding.
                out.converged = true;
                break;
            }
        }
    }

    out.x = x;
    out.residuals = r;
    out.cost = cost;
    out.jacobian = jacobian(x);
    if (out.converged && !std::isfinite(out.step_norm)) out.step_norm = 0.0;
    return out;
}

/// Covariance s^2 (J^T J)^-1 with s^2 = cost / (m - n), taken as zero when
/// m <= n. Returns an empty matrix when J^T J is numerically singular
/// (reciprocal condition number below rcond_floor).
inline Eigen::MatrixXd covariance(const Eigen::MatrixXd& jac, double cost, double rcond_floor = 1e-14) {
    const Eigen::Index m = jac.rows();
    const Eigen::Index n = jac.cols();
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jtj);
    const double hi = eig.eigenvalues().maxCoeff();
    const double lo = eig.eigenvalues().minCoeff();
    if (!(hi > 0.0) || !(lo > rcond_floor * hi)) return {};
    const double s2 = m > n ? cost / static_cast<double>(m - n) : 0.0;
    return s2 * eig.eigenvectors() * eig.eigenvalues().cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace cqed::lsq
