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

// Fitting the dressed transmon-cavity model to assigned spectroscopy peaks.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cqed/errors.hpp"
#include "cqed/least_squares.hpp"
#include "cqed/lines.hpp"
#include "cqed/peaks.hpp"
#include "cqed/sweep.hpp"

namespace cqed {

enum class FitParam : int {
    e_c,
    ej_sum,
    d,
    omega_c,
    g,
    current_at_zero_flux,
    current_per_flux_quantum,
};

inline constexpr int kFitParamCount = 7;

/// Stable external names, with units.
inline constexpr std::array<std::string_view, kFitParamCount> kFitParamNames = {
    "e_c_ghz", "ej_sum_ghz", "d", "omega_c_ghz", "g_ghz", "current_at_zero_flux_a", "current_per_flux_quantum_a",
};

using Theta = std::array<double, kFitParamCount>;

inline constexpr std::size_t index_of(FitParam p) { return static_cast<std::size_t>(p); }

struct FitParams {
    Theta theta{};
    Theta lower{};
    Theta upper{};
    std::array<bool, kFitParamCount> frozen{};

    /// Bounds around an initial guess. The flux period keeps its sign and
    /// stays within a factor 10 of the guess. The spectrum depends on d and g
    /// only through their squares, so both get symmetric ranges: a one-sided
    /// bound at zero would be a stationary trap for the solver. Signs are
    /// folded away after the fit.
    static FitParams with_default_bounds(const Theta& theta) {
        constexpr double inf = std::numeric_limits<double>::infinity();
        FitParams p;
        p.theta = theta;
        p.lower = {1e-4, 1e-3, -0.999, 1e-2, -10.0, -inf, 0.0};
        p.upper = {50.0, 1e4, 0.999, 1e3, 10.0, inf, 0.0};
        const double period = theta[index_of(FitParam::current_per_flux_quantum)];
        const double a = period / 10.0;
        const double b = period * 10.0;
        p.lower[index_of(FitParam::current_per_flux_quantum)] = std::min(a, b);
        p.upper[index_of(FitParam::current_per_flux_quantum)] = std::max(a, b);
        return p;
    }

    int free_count() const {
        return static_cast<int>(std::count(frozen.begin(), frozen.end(), false));
    }

    void validate() const {
        for (std::size_t k = 0; k < theta.size(); ++k) {
            if (!(lower[k] <= upper[k]))
                throw std::invalid_argument("FitParams: empty bounds for " + std::string(kFitParamNames[k]));
            if (!(theta[k] >= lower[k] && theta[k] <= upper[k]))
                throw std::invalid_argument("FitParams: " + std::string(kFitParamNames[k]) + " outside its bounds");
        }
        const double d = theta[index_of(FitParam::d)];
        if (!(std::abs(d) < 1.0)) throw std::invalid_argument("FitParams: |d| must be < 1");
        if (theta[index_of(FitParam::current_per_flux_quantum)] == 0.0)
            throw std::invalid_argument("FitParams: current_per_flux_quantum must be nonzero");
    }
};

/// Everything about the model that is not fitted.
struct SpectrumModel {
    std::vector<LineRequest> lines;
    ModelConfig model{{20, false, 1e-9}, 6};
    int n_ph_max = 5;
    double n_g = 0.0;

    SquidParams squid(const Theta& t) const {
        return {t[index_of(FitParam::ej_sum)], std::abs(t[index_of(FitParam::d)])};
    }
    TransmonParams transmon(const Theta& t) const { return {t[index_of(FitParam::e_c)], 0.0, n_g}; }
    CavityParams cavity(const Theta& t) const {
        return {t[index_of(FitParam::omega_c)], n_ph_max, std::abs(t[index_of(FitParam::g)])};
    }
    FluxCalibration calibration(const Theta& t) const {
        return {t[index_of(FitParam::current_at_zero_flux)], t[index_of(FitParam::current_per_flux_quantum)]};
    }

    TransmonEigens solve_transmon_at(const Theta& t, double current) const {
        TransmonParams tp = transmon(t);
        tp.e_j = ej_of_flux(squid(t), flux_from_current(calibration(t), current));
        return cqed::solve_transmon(tp, model.basis, model.n_q_levels);
    }

    DressedSpectrum solve(const Theta& t, double current) const {
        return solve_dressed(solve_transmon_at(t, current), model.n_q_levels, cavity(t));
    }

    /// All requested lines at each current. Ambiguous labels are accepted
    /// so predictions stay defined through avoided crossings; labels outside
    /// the kept subspace give NaN.
    std::vector<LinePrediction> predict(const Theta& t, const std::vector<double>& currents) const {
        std::vector<LinePrediction> out;
        out.reserve(currents.size());
        for (double current : currents) {
            LinePrediction p{current, {}, {}};
            const DressedSpectrum ds = solve(t, current);
            for (const auto& line : lines) {
                p.names.push_back(line.name());
                try {
                    p.frequencies.push_back(evaluate_line(ds, line, true).frequency);
                } catch (const MissingLabel&) {
                    p.frequencies.push_back(std::numeric_limits<double>::quiet_NaN());
                }
            }
            out.push_back(std::move(p));
        }
        return out;
    }
};

struct SpectrumFitOptions {
    double max_distance = 0.1;  // GHz, peak-to-line assignment radius
    int max_outer_iterations = 10;
    lsq::Options solver{};
    /// Relative finite-difference step in scaled parameters.
    double fd_step = 1e-6;
    lsq::Stencil stencil = lsq::Stencil::forward;
};

struct FitResult {
    Theta theta{};
    Theta sigma{};  // 1 sigma; zero for frozen parameters
    std::array<bool, kFitParamCount> frozen{};
    Eigen::VectorXd residuals;  // predicted - observed, GHz, one per assigned peak
    double residual_rms = 0.0;
    int iterations = 0;  // inner iterations, summed over passes
    int outer_iterations = 0;
    double final_step_norm = 0.0;
    bool converged = false;
    bool assignment_stable = false;
    std::vector<std::string> boundary_stuck;
    std::vector<std::string> warnings;
    PeakSet peaks;  // with the final assignment
};

/// Sum of squared line residuals for a fixed peak assignment.
class SpectrumObjective {
public:
    SpectrumObjective(const SpectrumModel& model, const std::vector<Peak>& assigned) : model_(&model) {
        std::map<std::string, std::size_t> line_index;
        for (std::size_t k = 0; k < model.lines.size(); ++k) line_index.emplace(model.lines[k].name(), k);
        std::map<double, std::size_t> current_index;
        for (const Peak& p : assigned) {
            const auto line = line_index.find(p.line);
            if (line == line_index.end()) throw std::invalid_argument("peak assigned to unknown line '" + p.line + "'");
            const auto [it, inserted] = current_index.emplace(p.current, currents_.size());
            if (inserted) currents_.push_back(p.current);
            terms_.push_back({it->second, line->second, p.frequency});
        }
    }

    std::size_t size() const { return terms_.size(); }
    std::size_t distinct_currents() const { return currents_.size(); }

    /// Not thread-safe: transmon solves are cached across calls.
    Eigen::VectorXd residuals(const Theta& t) const {
        const std::vector<TransmonEigens>& bare = transmon_levels(t);
        const CavityParams cav = model_->cavity(t);
        std::vector<DressedSpectrum> spectra;
        spectra.reserve(currents_.size());
        for (const TransmonEigens& te : bare) spectra.push_back(solve_dressed(te, model_->model.n_q_levels, cav));
        Eigen::VectorXd r(static_cast<Eigen::Index>(terms_.size()));
        for (std::size_t k = 0; k < terms_.size(); ++k) {
            const Term& term = terms_[k];
            r(static_cast<Eigen::Index>(k)) =
                evaluate_line(spectra[term.current], model_->lines[term.line], true).frequency - term.observed;
        }
        return r;
    }

    double cost(const Theta& t) const { return residuals(t).squaredNorm(); }

    /// Gradient of cost with respect to every parameter, by finite
    /// differences with absolute steps `steps`.
    Theta gradient(const Theta& t, const Theta& steps, lsq::Stencil stencil) const {
        Theta g{};
        for (std::size_t k = 0; k < t.size(); ++k) {
            auto at = [&](double offset) {
                Theta probe = t;
                probe[k] += offset;
                return cost(probe);
            };
            const double h = steps[k];
            switch (stencil) {
                case lsq::Stencil::forward: g[k] = (at(h) - at(0.0)) / h; break;
                case lsq::Stencil::central2: g[k] = (at(h) - at(-h)) / (2.0 * h); break;
                case lsq::Stencil::central4:
                    g[k] = (-at(2.0 * h) + 8.0 * at(h) - 8.0 * at(-h) + at(-2.0 * h)) / (12.0 * h);
                    break;
            }
        }
        return g;
    }

private:
    /// Only these parameters enter the bare transmon problem, so cavity-only
    /// changes (and their finite-difference probes) reuse earlier solves.
    using TransmonKey = std::array<double, 5>;

    const std::vector<TransmonEigens>& transmon_levels(const Theta& t) const {
        const TransmonKey key{t[index_of(FitParam::e_c)], t[index_of(FitParam::ej_sum)], t[index_of(FitParam::d)],
                              t[index_of(FitParam::current_at_zero_flux)],
                              t[index_of(FitParam::current_per_flux_quantum)]};
        for (const auto& [cached_key, levels] : cache_)
            if (cached_key == key) return levels;
        std::vector<TransmonEigens> levels;
        levels.reserve(currents_.size());
        for (double current : currents_) levels.push_back(model_->solve_transmon_at(t, current));
        if (cache_.size() >= kCacheSize) cache_.erase(cache_.begin());
        cache_.emplace_back(key, std::move(levels));
        return cache_.back().second;
    }

    static constexpr std::size_t kCacheSize = 4;
    mutable std::vector<std::pair<TransmonKey, std::vector<TransmonEigens>>> cache_;

    struct Term {
        std::size_t current;
        std::size_t line;
        double observed;
    };
    const SpectrumModel* model_;
    std::vector<double> currents_;
    std::vector<Term> terms_;
};

namespace detail {

/// Per-parameter scale so that the solver works with O(1) unknowns.
inline Theta parameter_scale(const Theta& t) {
    Theta s{};
    const double period = std::abs(t[index_of(FitParam::current_per_flux_quantum)]);
    s[index_of(FitParam::e_c)] = std::abs(t[index_of(FitParam::e_c)]);
    s[index_of(FitParam::ej_sum)] = std::abs(t[index_of(FitParam::ej_sum)]);
    s[index_of(FitParam::d)] = 1.0;
    s[index_of(FitParam::omega_c)] = std::abs(t[index_of(FitParam::omega_c)]);
    s[index_of(FitParam::g)] = std::max(std::abs(t[index_of(FitParam::g)]), 1e-3);
    s[index_of(FitParam::current_at_zero_flux)] = period;
    s[index_of(FitParam::current_per_flux_quantum)] = period;
    for (double& v : s)
        if (!(v > 0.0)) v = 1.0;
    return s;
}

struct PassResult {
    Theta theta;
    Theta sigma;
    Eigen::VectorXd residuals;
    int iterations;
    double step_norm;
    bool converged;
};

/// One least-squares pass over a fixed assignment.
inline PassResult fit_fixed_assignment(const SpectrumModel& model, const std::vector<Peak>& assigned,
                                       const FitParams& params, const Theta& start, const SpectrumFitOptions& opt) {
    const SpectrumObjective objective(model, assigned);
    std::vector<std::size_t> free;
    for (std::size_t k = 0; k < params.frozen.size(); ++k)
        if (!params.frozen[k]) free.push_back(k);
    const auto n = static_cast<Eigen::Index>(free.size());
    const Theta scale = parameter_scale(params.theta);

    auto unpack = [&](const Eigen::VectorXd& u) {
        Theta t = start;
        for (Eigen::Index j = 0; j < n; ++j) t[free[static_cast<std::size_t>(j)]] = u(j) * scale[free[static_cast<std::size_t>(j)]];
        return t;
    };
    Eigen::VectorXd u0(n), lo(n), hi(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const std::size_t k = free[static_cast<std::size_t>(j)];
        u0(j) = start[k] / scale[k];
        lo(j) = params.lower[k] / scale[k];
        hi(j) = params.upper[k] / scale[k];
    }
    auto residual = [&](const Eigen::VectorXd& u) { return objective.residuals(unpack(u)); };
    auto jacobian = [&](const Eigen::VectorXd& u) {
        return lsq::finite_difference_jacobian(residual, u, opt.fd_step, opt.stencil);
    };
    const lsq::Result res = lsq::levenberg_marquardt(residual, jacobian, u0, lo, hi, opt.solver);

    const Eigen::MatrixXd cov = lsq::covariance(res.jacobian, res.cost);
    if (cov.size() == 0)
        throw NoConvergence("fit is not locally identifiable: curvature matrix is singular (" +
                            std::to_string(assigned.size()) + " peaks at " +
                            std::to_string(objective.distinct_currents()) + " currents)");

    PassResult out{unpack(res.x), Theta{}, res.residuals, res.iterations, res.step_norm, res.converged};
    for (Eigen::Index j = 0; j < n; ++j) {
        const std::size_t k = free[static_cast<std::size_t>(j)];
        out.sigma[k] = std::sqrt(std::max(cov(j, j), 0.0)) * scale[k];
    }
    return out;
}

inline std::vector<double> distinct_currents(const PeakSet& peaks) {
    std::set<double> seen;
    for (const Peak& p : peaks.peaks) seen.insert(p.current);
    return {seen.begin(), seen.end()};
}

inline std::vector<Peak> assigned_only(const PeakSet& peaks) {
    std::vector<Peak> out;
    for (const Peak& p : peaks.peaks)
        if (p.assigned()) out.push_back(p);
    return out;
}

}  // namespace detail

/// Fits the free parameters of `init` to the peaks.
///
/// Alternates peak-to-line assignment with a least-squares pass until the
/// assignment repeats, for at most max_outer_iterations passes.
///
/// Throws InsufficientData when fewer peaks are assigned than there are
/// free parameters, and NoConvergence when a pass exhausts its iteration
/// budget or the optimum is not identifiable. Parameters that end on a bound
/// are listed in FitResult::boundary_stuck.
inline FitResult fit_spectrum(const PeakSet& peaks, const FitParams& init, const SpectrumModel& model,
                              const SpectrumFitOptions& opt = {}) {
    init.validate();
    if (model.lines.empty()) throw std::invalid_argument("fit_spectrum: no lines to fit");
    const int free_count = init.free_count();
    if (free_count == 0) throw std::invalid_argument("fit_spectrum: every parameter is frozen");

    const std::vector<double> currents = detail::distinct_currents(peaks);
    FitResult out;
    out.frozen = init.frozen;
    out.warnings = peaks.warnings;
    Theta theta = init.theta;
    PeakSet current_assignment;
    std::vector<Peak> previous;

    for (int pass = 1; pass <= opt.max_outer_iterations; ++pass) {
        current_assignment = assign_peaks_to_lines(peaks, model.predict(theta, currents), opt.max_distance);
        std::vector<Peak> assigned = detail::assigned_only(current_assignment);
        const bool same = pass > 1 && assigned.size() == previous.size() &&
                          std::equal(assigned.begin(), assigned.end(), previous.begin(), [](const Peak& a, const Peak& b) {
                              return a.current == b.current && a.frequency == b.frequency && a.line == b.line;
                          });
        if (same) {
            out.assignment_stable = true;
            break;
        }
        if (static_cast<int>(assigned.size()) < free_count)
            throw InsufficientData(std::to_string(assigned.size()) + " assigned peaks for " +
                                   std::to_string(free_count) + " free parameters");

        const detail::PassResult res = detail::fit_fixed_assignment(model, assigned, init, theta, opt);
        out.outer_iterations = pass;
        out.iterations += res.iterations;
        out.final_step_norm = res.step_norm;
        out.converged = res.converged;
        out.sigma = res.sigma;
        out.residuals = res.residuals;
        theta = res.theta;
        previous = std::move(assigned);
        if (!res.converged)
            throw NoConvergence("no convergence after " + std::to_string(res.iterations) +
                                " iterations (step norm " + std::to_string(res.step_norm) + ")");
    }
    if (!out.assignment_stable)
        out.warnings.push_back("peak assignment still changing after " + std::to_string(opt.max_outer_iterations) +
                               " passes");

    // Report residuals against the assignment they were minimized for.
    PeakSet final_peaks = peaks;
    {
        std::map<std::pair<double, double>, std::string> line_of;
        for (const Peak& p : previous) line_of[{p.current, p.frequency}] = p.line;
        for (Peak& p : final_peaks.peaks) {
            const auto it = line_of.find({p.current, p.frequency});
            p.line = it == line_of.end() ? std::string{} : it->second;
        }
    }
    out.peaks = std::move(final_peaks);
    theta[index_of(FitParam::d)] = std::abs(theta[index_of(FitParam::d)]);
    theta[index_of(FitParam::g)] = std::abs(theta[index_of(FitParam::g)]);
    out.theta = theta;
    out.residual_rms = out.residuals.size() > 0 ? std::sqrt(out.residuals.squaredNorm() / out.residuals.size()) : 0.0;

    const Theta scale = detail::parameter_scale(init.theta);
    for (std::size_t k = 0; k < theta.size(); ++k) {
        if (init.frozen[k]) continue;
        const double tol = 1e-9 * scale[k];
        if (std::abs(theta[k] - init.lower[k]) <= tol || std::abs(theta[k] - init.upper[k]) <= tol)
            out.boundary_stuck.emplace_back(kFitParamNames[k]);
    }

    // The inner loop runs without the doubling check; do it once here.
    SpectrumModel checked = model;
    checked.model.basis.check_cutoff = true;
    for (double current : currents) {
        try {
            checked.solve_transmon_at(theta, current);
        } catch (const CutoffError& e) {
            out.warnings.push_back(std::string("at the fitted parameters: ") + e.what());
            break;
        }
    }
    return out;
}

/// 1 sigma from refitting bootstrap resamples of the assigned peaks, keeping
/// the assignment fixed.
inline Theta bootstrap_sigma(const FitResult& fit, const FitParams& init, const SpectrumModel& model,
                             int resamples, std::uint64_t seed, const SpectrumFitOptions& opt = {}) {
    if (resamples < 2) throw std::invalid_argument("bootstrap_sigma: need at least 2 resamples");
    const std::vector<Peak> assigned = detail::assigned_only(fit.peaks);
    if (assigned.empty()) throw InsufficientData("bootstrap_sigma: no assigned peaks");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, assigned.size() - 1);

    std::vector<Theta> samples;
    for (int b = 0; b < resamples; ++b) {
        std::vector<Peak> draw;
        draw.reserve(assigned.size());
        for (std::size_t k = 0; k < assigned.size(); ++k) draw.push_back(assigned[pick(rng)]);
        try {
            samples.push_back(detail::fit_fixed_assignment(model, draw, init, fit.theta, opt).theta);
        } catch (const NoConvergence&) {
            // Degenerate resample (too few distinct currents); skip it.
        }
    }
    if (samples.size() < 2) throw NoConvergence("bootstrap: fewer than 2 resamples converged");
    Theta sigma{};
    for (std::size_t k = 0; k < sigma.size(); ++k) {
        double mean = 0.0;
        for (const Theta& s : samples) mean += s[k];
        mean /= static_cast<double>(samples.size());
        double var = 0.0;
        for (const Theta& s : samples) var += (s[k] - mean) * (s[k] - mean);
        sigma[k] = std::sqrt(var / static_cast<double>(samples.size() - 1));
    }
    return sigma;
}

}  // namespace cqed
