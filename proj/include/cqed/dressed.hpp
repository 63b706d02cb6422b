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

// Transmon (truncated to its eigenbasis) coupled to one cavity mode:
//
//   H = sum_i E_i |i><i| + omega_c a^dag a + g (a^dag + a) n
//
// with the counter-rotating terms kept. Dressed eigenstates are labeled by
// their dominant bare product state |n_q, n_ph>.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <compare>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cqed/errors.hpp"
#include "cqed/transmon.hpp"

namespace cqed {

struct CavityParams {
    double omega_c = 0.0;  // GHz
    int n_ph_max = 5;
    double g = 0.0;  // GHz

    void validate() const {
        if (!(omega_c > 0.0)) throw std::invalid_argument("CavityParams: omega_c must be > 0");
        if (n_ph_max < 1) throw std::invalid_argument("CavityParams: n_ph_max must be >= 1");
        if (!std::isfinite(g)) throw std::invalid_argument("CavityParams: g must be finite");
    }
};

struct StateLabel {
    int n_q = 0;
    int n_ph = 0;

    friend auto operator<=>(const StateLabel&, const StateLabel&) = default;
};

inline std::string to_string(StateLabel s) {
    return std::to_string(s.n_q) + "." + std::to_string(s.n_ph);
}

/// Overlap weights at or below this are ambiguous. The slack absorbs rounding
/// at an exact 50/50 crossing.
inline constexpr double kAmbiguityThreshold = 0.5 + 1e-9;

struct DressedLevel {
    StateLabel label;
    double energy = 0.0;  // GHz
    double weight = 0.0;  // |<bare|dressed>|^2 of the assigned label

    bool ambiguous() const { return weight <= kAmbiguityThreshold; }
};

struct DressedSpectrum {
    /// Ascending in energy.
    std::vector<DressedLevel> levels;
    int n_q_levels = 0;
    CavityParams cavity;

    const DressedLevel* find(StateLabel label) const {
        for (const auto& level : levels)
            if (level.label == label) return &level;
        return nullptr;
    }

    /// Energy of a labeled state. Throws MissingLabel if the label is absent,
    /// or ambiguous and allow_ambiguous is false.
    double energy(StateLabel label, bool allow_ambiguous = false) const {
        const DressedLevel* level = find(label);
        if (level == nullptr) throw MissingLabel("state " + to_string(label) + " outside the kept subspace");
        if (!allow_ambiguous && level->ambiguous())
            throw MissingLabel("state " + to_string(label) + " is ambiguous (overlap " +
                               std::to_string(level->weight) + ")");
        return level->energy;
    }

    bool any_ambiguous() const {
        return std::any_of(levels.begin(), levels.end(), [](const DressedLevel& l) { return l.ambiguous(); });
    }
};

/// Product basis |i, n>, index i * (n_ph_max + 1) + n.
inline std::vector<StateLabel> product_basis(int n_q_levels, int n_ph_max) {
    std::vector<StateLabel> basis;
    basis.reserve(static_cast<std::size_t>(n_q_levels * (n_ph_max + 1)));
    for (int i = 0; i < n_q_levels; ++i)
        for (int n = 0; n <= n_ph_max; ++n) basis.push_back({i, n});
    return basis;
}

inline Eigen::MatrixXd build_dressed_hamiltonian(const TransmonEigens& te, int n_q_levels, const CavityParams& cav) {
    cav.validate();
    if (n_q_levels < 1 || n_q_levels > te.levels())
        throw DimensionError("n_q_levels=" + std::to_string(n_q_levels) + " but only " +
                             std::to_string(te.levels()) + " transmon levels available");
    if (te.n_elements.rows() < n_q_levels || te.n_elements.cols() < n_q_levels)
        throw DimensionError("charge matrix smaller than the energy list");

    const int photons = cav.n_ph_max + 1;
    const int dim = n_q_levels * photons;
    auto index = [photons](int i, int n) { return i * photons + n; };

    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < n_q_levels; ++i)
        for (int n = 0; n < photons; ++n) h(index(i, n), index(i, n)) = te.energies(i) + n * cav.omega_c;

    // g <i|n|j> sqrt(n+1) couples |i, n+1> and |j, n>.
    for (int i = 0; i < n_q_levels; ++i) {
        for (int j = 0; j < n_q_levels; ++j) {
            const double coupling = cav.g * te.n_elements(i, j);
            for (int n = 0; n + 1 < photons; ++n) {
                const double element = coupling * std::sqrt(static_cast<double>(n + 1));
                h(index(i, n + 1), index(j, n)) += element;
                h(index(j, n), index(i, n + 1)) += element;
            }
        }
    }
    return h;
}

/// Assigns each eigenvector (column) the bare label with which it has the
/// largest overlap, injectively: all (eigenstate, bare) pairs are taken in
/// descending overlap order and accepted when both sides are still free.
inline DressedSpectrum label_dressed_states(const Eigen::VectorXd& eigenvalues, const Eigen::MatrixXd& eigenvectors,
                                            std::span<const StateLabel> bare_basis) {
    const auto dim = static_cast<Eigen::Index>(bare_basis.size());
    if (eigenvectors.rows() != dim || eigenvectors.cols() != eigenvalues.size() || eigenvalues.size() > dim)
        throw DimensionError("eigenpairs do not match the bare basis");

    struct Candidate {
        double weight;
        Eigen::Index state;
        Eigen::Index bare;
    };
    auto by_weight = [](const Candidate& a, const Candidate& b) {
        if (a.weight != b.weight) return a.weight > b.weight;
        if (a.state != b.state) return a.state < b.state;
        return a.bare < b.bare;
    };
    // Sorting the few large overlaps first and the long tail only if still
    // needed visits pairs in the same order as one full sort.
    constexpr double split = 1e-4;
    std::vector<Candidate> major, minor;
    for (Eigen::Index s = 0; s < eigenvalues.size(); ++s)
        for (Eigen::Index b = 0; b < dim; ++b) {
            const double amp = eigenvectors(b, s);
            (amp * amp >= split ? major : minor).push_back({amp * amp, s, b});
        }

    std::vector<Eigen::Index> bare_of_state(static_cast<std::size_t>(eigenvalues.size()), -1);
    std::vector<char> bare_taken(static_cast<std::size_t>(dim), 0);
    std::vector<double> weight_of_state(static_cast<std::size_t>(eigenvalues.size()), 0.0);
    Eigen::Index remaining = eigenvalues.size();
    auto take = [&](std::vector<Candidate>& candidates) {
        std::sort(candidates.begin(), candidates.end(), by_weight);
        for (const auto& c : candidates) {
            if (remaining == 0) return;
            auto& slot = bare_of_state[static_cast<std::size_t>(c.state)];
            if (slot >= 0 || bare_taken[static_cast<std::size_t>(c.bare)]) continue;
            slot = c.bare;
            bare_taken[static_cast<std::size_t>(c.bare)] = 1;
            weight_of_state[static_cast<std::size_t>(c.state)] = c.weight;
            --remaining;
        }
    };
    take(major);
    if (remaining > 0) take(minor);

    std::vector<Eigen::Index> order(static_cast<std::size_t>(eigenvalues.size()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return eigenvalues(a) < eigenvalues(b); });

    DressedSpectrum out;
    out.levels.reserve(order.size());
    for (Eigen::Index s : order) {
        const auto idx = static_cast<std::size_t>(s);
        out.levels.push_back({bare_basis[static_cast<std::size_t>(bare_of_state[idx])], eigenvalues(s),
                              weight_of_state[idx]});
    }
    return out;
}

namespace detail {

/// True when <i|n|j> vanishes for i + j even, i.e. the transmon levels have
/// definite parity (n_g = 0). The coupling then conserves
/// (-1)^(n_q + n_ph) and the dressed problem splits into two blocks.
inline bool conserves_parity(const TransmonEigens& te, int n_q_levels) {
    const auto sub = te.n_elements.topLeftCorner(n_q_levels, n_q_levels);
    const double scale = sub.cwiseAbs().maxCoeff();
    for (int i = 0; i < n_q_levels; ++i)
        for (int j = i % 2; j < n_q_levels; j += 2)
            if (std::abs(sub(i, j)) > 1e-10 * scale) return false;
    return true;
}

inline DressedSpectrum diagonalize_and_label(const Eigen::MatrixXd& h, std::span<const StateLabel> basis) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
    if (solver.info() != Eigen::Success) throw ConvergenceError("dressed eigensolver failed to converge");
    return label_dressed_states(solver.eigenvalues(), solver.eigenvectors(), basis);
}

}  // namespace detail

/// Diagonalizes the dressed Hamiltonian and labels the result.
inline DressedSpectrum solve_dressed(const TransmonEigens& te, int n_q_levels, const CavityParams& cav) {
    const Eigen::MatrixXd h = build_dressed_hamiltonian(te, n_q_levels, cav);
    const auto basis = product_basis(n_q_levels, cav.n_ph_max);

    DressedSpectrum out;
    if (detail::conserves_parity(te, n_q_levels)) {
        // Elements between the two parity sectors are exactly zero, so each
        // block is solved and labeled on its own.
        for (int sector = 0; sector < 2; ++sector) {
            std::vector<Eigen::Index> rows;
            std::vector<StateLabel> labels;
            for (std::size_t k = 0; k < basis.size(); ++k)
                if ((basis[k].n_q + basis[k].n_ph) % 2 == sector) {
                    rows.push_back(static_cast<Eigen::Index>(k));
                    labels.push_back(basis[k]);
                }
            const Eigen::MatrixXd block = h(rows, rows);
            DressedSpectrum part = detail::diagonalize_and_label(block, labels);
            out.levels.insert(out.levels.end(), part.levels.begin(), part.levels.end());
        }
        std::stable_sort(out.levels.begin(), out.levels.end(),
                         [](const DressedLevel& a, const DressedLevel& b) { return a.energy < b.energy; });
    } else {
        out = detail::diagonalize_and_label(h, basis);
    }
    out.n_q_levels = n_q_levels;
    out.cavity = cav;
    return out;
}

/// E(to) - E(from), GHz. Negative for downward transitions.
inline double transition_frequency(const DressedSpectrum& ds, StateLabel from, StateLabel to,
                                   bool allow_ambiguous = false) {
    return ds.energy(to, allow_ambiguous) - ds.energy(from, allow_ambiguous);
}

}  // namespace cqed
