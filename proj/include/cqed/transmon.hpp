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

// Bare transmon: H = 4 E_C (n - n_g)^2 - E_J cos(phi) in the charge basis.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "cqed/errors.hpp"

namespace cqed {

struct TransmonParams {
    double e_c = 0.0;  // GHz
    double e_j = 0.0;  // GHz
    double n_g = 0.0;

    void validate() const {
        if (!(e_c > 0.0)) throw std::invalid_argument("TransmonParams: e_c must be > 0");
        if (!(e_j >= 0.0)) throw std::invalid_argument("TransmonParams: e_j must be >= 0");
        if (!std::isfinite(n_g)) throw std::invalid_argument("TransmonParams: n_g must be finite");
    }
};

/// Charge states -n_cut..n_cut are kept.
struct ChargeBasisConfig {
    int n_cut = 30;
    /// Re-solve at 2 * n_cut and compare the requested levels.
    bool check_cutoff = true;
    /// Absolute level tolerance for the doubling check, GHz.
    double cutoff_tolerance = 1e-9;

    int dimension() const { return 2 * n_cut + 1; }

    void validate() const {
        if (n_cut < 1) throw std::invalid_argument("ChargeBasisConfig: n_cut must be >= 1");
        if (!(cutoff_tolerance > 0.0))
            throw std::invalid_argument("ChargeBasisConfig: cutoff_tolerance must be > 0");
    }
};

/// Lowest transmon levels, ground state at zero, and <i|(n - n_g)|j> among
/// them.
struct TransmonEigens {
    Eigen::VectorXd energies;
    Eigen::MatrixXd n_elements;

    int levels() const { return static_cast<int>(energies.size()); }
};

inline Eigen::MatrixXd build_charge_hamiltonian(const TransmonParams& p, const ChargeBasisConfig& cfg) {
    p.validate();
    cfg.validate();
    const int dim = cfg.dimension();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) {
        const double q = static_cast<double>(k - cfg.n_cut) - p.n_g;
        h(k, k) = 4.0 * p.e_c * q * q;
        if (k + 1 < dim) {
            h(k, k + 1) = -0.5 * p.e_j;
            h(k + 1, k) = -0.5 * p.e_j;
        }
    }
    return h;
}

namespace detail {

/// Flip each column so that its largest-magnitude entry is positive. Entries
/// within a relative 1e-9 of the maximum count as tied; the lowest index wins.
inline void fix_eigenvector_phases(Eigen::MatrixXd& vectors) {
    for (Eigen::Index col = 0; col < vectors.cols(); ++col) {
        const double peak = vectors.col(col).cwiseAbs().maxCoeff();
        for (Eigen::Index row = 0; row < vectors.rows(); ++row) {
            if (std::abs(vectors(row, col)) >= (1.0 - 1e-9) * peak) {
                if (vectors(row, col) < 0.0) vectors.col(col) *= -1.0;
                break;
            }
        }
    }
}

// Eigenpairs of a symmetric tridiagonal matrix. The dense solver skips its
// Householder reduction here but also its normalization, and the QL sweeps
// can then stall; scale to unit max-norm first.
inline void solve_tridiagonal(const Eigen::VectorXd& diag, const Eigen::VectorXd& offdiag, const TransmonParams& p,
                              int n_cut, Eigen::VectorXd& values, Eigen::MatrixXd& vectors) {
    double norm = diag.cwiseAbs().maxCoeff();
    if (offdiag.size() > 0) norm = std::max(norm, offdiag.cwiseAbs().maxCoeff());
    const double inv = norm > 0.0 ? 1.0 / norm : 1.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag * inv, offdiag * inv, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success)
        throw ConvergenceError("transmon eigensolver failed to converge (e_c=" + std::to_string(p.e_c) +
                               ", e_j=" + std::to_string(p.e_j) + ", n_cut=" + std::to_string(n_cut) + ")");
    values = solver.eigenvalues() * (1.0 / inv);
    vectors = solver.eigenvectors();
}

// n_g = 0: the Hamiltonian commutes with n -> -n. Solve the symmetric
// sector {|0>, (|k> + |-k>)/sqrt2} and the antisymmetric sector
// {(|k> - |-k>)/sqrt2} separately and map back to the charge basis.
inline void solve_by_parity(const TransmonParams& p, int n_cut, int n_levels, Eigen::VectorXd& values,
                            Eigen::MatrixXd& vectors) {
    const int dim = 2 * n_cut + 1;
    const double r = std::sqrt(0.5);
    std::vector<std::pair<double, Eigen::VectorXd>> states;

    Eigen::VectorXd ds(n_cut + 1), os(n_cut);
    for (int k = 0; k <= n_cut; ++k) ds(k) = 4.0 * p.e_c * k * k;
    os.setConstant(-0.5 * p.e_j);
    if (n_cut > 0) os(0) = -0.5 * p.e_j * std::sqrt(2.0);
    Eigen::VectorXd vals;
    Eigen::MatrixXd vecs;
    solve_tridiagonal(ds, os, p, n_cut, vals, vecs);
    for (int m = 0; m < std::min(n_levels, n_cut + 1); ++m) {
        Eigen::VectorXd full = Eigen::VectorXd::Zero(dim);
        full(n_cut) = vecs(0, m);
        for (int k = 1; k <= n_cut; ++k) full(n_cut + k) = full(n_cut - k) = r * vecs(k, m);
        states.emplace_back(vals(m), std::move(full));
    }

    if (n_cut > 0) {
        Eigen::VectorXd da(n_cut), oa(n_cut - 1);
        for (int k = 1; k <= n_cut; ++k) da(k - 1) = 4.0 * p.e_c * k * k;
        oa.setConstant(-0.5 * p.e_j);
        solve_tridiagonal(da, oa, p, n_cut, vals, vecs);
        for (int m = 0; m < std::min(n_levels, n_cut); ++m) {
            Eigen::VectorXd full = Eigen::VectorXd::Zero(dim);
            for (int k = 1; k <= n_cut; ++k) {
                full(n_cut + k) = r * vecs(k - 1, m);
                full(n_cut - k) = -r * vecs(k - 1, m);
            }
            states.emplace_back(vals(m), std::move(full));
        }
    }

    std::stable_sort(states.begin(), states.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    values.resize(n_levels);
    vectors.resize(dim, n_levels);
    for (int m = 0; m < n_levels; ++m) {
        values(m) = states[m].first;
        vectors.col(m) = states[m].second;
    }
}

inline TransmonEigens solve_transmon_once(const TransmonParams& p, int n_cut, int n_levels) {
    const int dim = 2 * n_cut + 1;
    Eigen::VectorXd charge(dim);
    for (int k = 0; k < dim; ++k) charge(k) = static_cast<double>(k - n_cut) - p.n_g;

    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
    if (p.n_g == 0.0) {
        solve_by_parity(p, n_cut, n_levels, values, vectors);
    } else {
        Eigen::VectorXd diag = 4.0 * p.e_c * charge.array().square();
        Eigen::VectorXd offdiag = Eigen::VectorXd::Constant(dim - 1, -0.5 * p.e_j);
        solve_tridiagonal(diag, offdiag, p, n_cut, values, vectors);
        vectors.conservativeResize(Eigen::NoChange, n_levels);
    }
    fix_eigenvector_phases(vectors);

    TransmonEigens out;
    out.energies = values.head(n_levels).array() - values(0);
    out.n_elements = vectors.transpose() * charge.asDiagonal() * vectors;
    return out;
}

}  // namespace detail

/// Lowest n_levels transmon eigenstates.
///
/// Throws CutoffError when cfg.check_cutoff is set and the levels move by
/// more than cfg.cutoff_tolerance on doubling n_cut.
inline TransmonEigens solve_transmon(const TransmonParams& p, const ChargeBasisConfig& cfg, int n_levels = 6) {
    p.validate();
    cfg.validate();
    if (n_levels < 1 || n_levels > cfg.dimension())
        throw std::invalid_argument("solve_transmon: n_levels must lie in [1, 2 n_cut + 1]");

    TransmonEigens out = detail::solve_transmon_once(p, cfg.n_cut, n_levels);
    if (cfg.check_cutoff) {
        const TransmonEigens wide = detail::solve_transmon_once(p, 2 * cfg.n_cut, n_levels);
        const double drift = (wide.energies - out.energies).cwiseAbs().maxCoeff();
        if (drift > cfg.cutoff_tolerance)
            throw CutoffError("charge cutoff n_cut=" + std::to_string(cfg.n_cut) +
                              " not converged (level drift " + std::to_string(drift) + " GHz)");
    }
    return out;
}

/// sqrt(8 E_J E_C) - E_C; only meaningful for E_J / E_C >> 1.
inline double asymptotic_f01(const TransmonParams& p) {
    return std::sqrt(8.0 * p.e_j * p.e_c) - p.e_c;
}

}  // namespace cqed
