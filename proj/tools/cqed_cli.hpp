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

// Command-line front end. run() is the whole program minus main(), so tests
// can drive it with argument vectors and string streams.
//
// Exit codes: 0 success, 2 configuration, 3 data or solver, 4 convergence or
// fit quality.

#pragma once

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cqed/cqed.hpp"

namespace cqed::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kDataError = 3, kQualityError = 4 };

struct ModelArgs {
    double e_c = 0.14;
    double ej_sum = 11.6;
    double d = 0.35;
    double omega_c = 7.0;
    double g = 0.07;
    double i0 = 0.0;
    double period = 1e-3;
    double n_g = 0.0;
    int n_ph_max = 5;
    int n_levels = 6;
    int n_cut = 30;
    std::vector<std::string> lines{"0.0>1.0", "raman_A", "raman_B", "raman_C"};
    CLI::Option* omega_opt = nullptr;
    CLI::Option* g_opt = nullptr;

    Theta theta() const { return {e_c, ej_sum, d, omega_c, g, i0, period}; }

    std::vector<LineRequest> line_requests() const {
        std::vector<LineRequest> out;
        for (const std::string& s : lines) out.push_back(LineRequest::parse(s));
        if (out.empty()) throw std::invalid_argument("no lines requested");
        return out;
    }

    SpectrumModel spectrum_model(int basis_cut) const {
        SpectrumModel m;
        m.lines = line_requests();
        m.model = ModelConfig{{basis_cut, false, 1e-9}, n_levels};
        m.n_ph_max = n_ph_max;
        m.n_g = n_g;
        return m;
    }

    /// Warns when the cavity parameters fall back to their defaults, which
    /// are placeholders rather than measured device values.
    void warn_placeholders(std::ostream& err) const {
        if (omega_opt && g_opt && (omega_opt->count() == 0 || g_opt->count() == 0))
            err << "warning: cavity frequency and/or coupling not given; using placeholder values omega_c="
                << omega_c << " GHz, g=" << g << " GHz\n";
    }
};

struct CurrentArgs {
    std::vector<double> list;
    double start = -0.6e-3;
    double stop = 0.6e-3;
    int count = 121;

    std::vector<double> values() const {
        if (!list.empty()) return list;
        if (count < 1) throw std::invalid_argument("current count must be >= 1");
        if (count == 1) return {start};
        std::vector<double> out(static_cast<std::size_t>(count));
        for (int k = 0; k < count; ++k) out[static_cast<std::size_t>(k)] = start + (stop - start) * k / (count - 1);
        return out;
    }
};

struct SimulateArgs {
    ModelArgs model;
    CurrentArgs currents;
    std::string output = "-";
    std::string plot;
    unsigned threads = 0;
};

struct SynthArgs {
    ModelArgs model;
    CurrentArgs currents;
    double freq_start = 1.0;
    double freq_stop = 8.0;
    double freq_step = 1e-3;
    double linewidth = 5e-3;
    double amplitude = 1.0;
    double freq_noise = 0.0;
    double amp_noise = 0.0;
    double snr = 0.0;
    std::uint64_t seed = 0;
    std::string output = "-";
};

struct FitArgs {
    ModelArgs model;
    std::string input;
    std::string output = "-";
    std::string residuals;
    std::vector<std::string> freeze;
    int smoothing = 1;
    double min_prominence = 0.2;
    double max_distance = 0.1;
    int max_outer = 10;
    int max_iterations = 200;
    int bootstrap = 0;
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

struct AbcheckArgs {
    double r_n = 0.0;
    std::optional<double> ej;
    std::optional<double> delta_uv;
    bool json = false;
};

struct T1fitArgs {
    std::string input;
    std::string output = "-";
};

namespace detail {

/// Runs `write` against `out` for "-", else against a fresh file.
template <typename Writer>
void emit(const std::string& path, std::ostream& out, Writer write) {
    if (path == "-" || path.empty()) {
        write(out);
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::invalid_argument("cannot write '" + path + "'");
    write(file);
    if (!file) throw std::invalid_argument("write to '" + path + "' failed");
}

inline void require_distinct(const std::vector<std::string>& paths) {
    std::set<std::string> seen;
    for (const std::string& p : paths) {
        if (p.empty() || p == "-") continue;
        if (!seen.insert(p).second) throw std::invalid_argument("path '" + p + "' is used twice");
    }
}

inline void add_model_options(CLI::App& cmd, ModelArgs& m) {
    cmd.add_option("--ec", m.e_c, "charging energy E_C (GHz)")->capture_default_str();
    cmd.add_option("--ej-sum", m.ej_sum, "total SQUID Josephson energy (GHz)")->capture_default_str();
    cmd.add_option("--d", m.d, "SQUID junction asymmetry")->capture_default_str();
    m.omega_opt = cmd.add_option("--omega-c", m.omega_c, "bare cavity frequency (GHz)")->capture_default_str();
    m.g_opt = cmd.add_option("--g", m.g, "qubit-cavity coupling (GHz)")->capture_default_str();
    cmd.add_option("--i0", m.i0, "coil current at zero flux (A)")->capture_default_str();
    cmd.add_option("--period", m.period, "coil current per flux quantum (A)")->capture_default_str();
    cmd.add_option("--ng", m.n_g, "offset charge")->capture_default_str();
    cmd.add_option("--n-ph-max", m.n_ph_max, "photon cutoff")->capture_default_str();
    cmd.add_option("--n-levels", m.n_levels, "transmon levels kept in the dressed problem")->capture_default_str();
    cmd.add_option("--lines", m.lines, "comma-separated lines, e.g. 0.0>1.0,raman_A")
        ->delimiter(',')
        ->capture_default_str();
}

inline void add_current_options(CLI::App& cmd, CurrentArgs& c) {
    cmd.add_option("--currents", c.list, "explicit comma-separated coil currents (A)")->delimiter(',');
    cmd.add_option("--current-start", c.start, "first coil current (A)")->capture_default_str();
    cmd.add_option("--current-stop", c.stop, "last coil current (A)")->capture_default_str();
    cmd.add_option("--current-count", c.count, "number of evenly spaced currents")->capture_default_str();
}

inline bool solver_failure(const std::string& status) {
    return status != "ok" && status != "missing_label" && status != "ambiguous";
}

}  // namespace detail

inline int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
    try {
        detail::require_distinct({a.output, a.plot});
        a.model.warn_placeholders(err);
        const SquidParams squid{a.model.ej_sum, a.model.d};
        const TransmonParams tp{a.model.e_c, 0.0, a.model.n_g};
        const CavityParams cav{a.model.omega_c, a.model.n_ph_max, a.model.g};
        const FluxCalibration cal{a.model.i0, a.model.period};
        SweepOptions opt;
        opt.model = ModelConfig{{a.model.n_cut, true, 1e-9}, a.model.n_levels};
        opt.threads = a.threads;
        const std::vector<double> currents = a.currents.values();
        if (currents.empty()) throw std::invalid_argument("no currents given");
        const std::vector<SweepRow> rows =
            flux_sweep_spectrum(squid, cal, tp, cav, currents, a.model.line_requests(), opt);

        detail::emit(a.output, out, [&](std::ostream& s) { csv::write_sweep(s, rows); });
        if (!a.plot.empty())
            detail::emit(a.plot, out, [&](std::ostream& s) { svg::plot_sweep(s, rows, {720, 480, "transition lines"}); });

        std::size_t missing = 0, ambiguous = 0, failed = 0;
        for (const SweepRow& r : rows) {
            if (r.status == "missing_label") ++missing;
            if (r.status == "ambiguous") ++ambiguous;
            if (detail::solver_failure(r.status)) ++failed;
        }
        if (missing > 0) err << "warning: " << missing << " points with a label outside the basis\n";
        if (ambiguous > 0) err << "warning: " << ambiguous << " points with an ambiguous state label\n";
        if (failed > 0) {
            err << "error: solver failed at " << failed << " of " << rows.size() << " points (see status column)\n";
            return kDataError;
        }
        return kOk;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kDataError;
    }
}

inline int cmd_synth(const SynthArgs& a, std::ostream& out, std::ostream& err) {
    try {
        a.model.warn_placeholders(err);
        if (a.snr < 0.0) throw std::invalid_argument("snr must be >= 0");
        if (a.snr > 0.0 && a.amp_noise > 0.0) throw std::invalid_argument("give either --snr or --amp-noise");
        SynthOptions opt;
        opt.currents = a.currents.values();
        opt.freq_start = a.freq_start;
        opt.freq_stop = a.freq_stop;
        opt.freq_step = a.freq_step;
        opt.linewidth = a.linewidth;
        opt.amplitude = a.amplitude;
        opt.freq_noise = a.freq_noise;
        opt.amp_noise = a.snr > 0.0 ? a.amplitude / a.snr : a.amp_noise;
        opt.seed = a.seed;
        const Theta theta = a.model.theta();
        FitParams::with_default_bounds(theta).validate();
        const SpectroscopyDataset ds = synthesize_spectroscopy(theta, a.model.spectrum_model(a.model.n_cut), opt);
        detail::emit(a.output, out, [&](std::ostream& s) { csv::write_spectroscopy(s, ds); });
        return kOk;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kDataError;
    }
}

inline int cmd_fit(const FitArgs& a, std::ostream& out, std::ostream& err) {
    SpectrumModel model;
    FitParams init;
    SpectrumFitOptions opt;
    try {
        detail::require_distinct({a.input, a.output, a.residuals});
        a.model.warn_placeholders(err);
        model = a.model.spectrum_model(a.model.n_cut);
        init = FitParams::with_default_bounds(a.model.theta());
        for (const std::string& name : a.freeze) {
            std::size_t k = 0;
            while (k < kFitParamNames.size() && kFitParamNames[k] != name) ++k;
            if (k == kFitParamNames.size()) throw std::invalid_argument("unknown parameter to freeze: '" + name + "'");
            init.frozen[k] = true;
        }
        init.validate();
        if (!(a.max_distance > 0.0)) throw std::invalid_argument("max-distance must be > 0");
        if (a.max_outer < 1 || a.max_iterations < 1) throw std::invalid_argument("iteration limits must be >= 1");
        if (a.bootstrap == 1 || a.bootstrap < 0) throw std::invalid_argument("bootstrap needs 0 or >= 2 resamples");
        opt.max_distance = a.max_distance;
        opt.max_outer_iterations = a.max_outer;
        opt.solver.max_iterations = a.max_iterations;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    }

    PeakSet peaks;
    try {
        const SpectroscopyDataset ds = csv::read_spectroscopy(a.input);
        peaks = extract_peaks(ds, a.smoothing, a.min_prominence, a.threads);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kDataError;
    }

    try {
        FitResult fit = fit_spectrum(peaks, init, model, opt);
        nlohmann::json doc = json::to_json(fit);
        doc["diagnostics"]["sigma_method"] = "curvature";
        if (a.bootstrap >= 2) {
            fit.sigma = bootstrap_sigma(fit, init, model, a.bootstrap, a.seed, opt);
            doc["sigma"] = json::theta_object(fit.sigma);
            doc["diagnostics"]["sigma_method"] = "bootstrap";
            doc["diagnostics"]["bootstrap_resamples"] = a.bootstrap;
        }
        doc["lines"] = a.model.lines;
        for (const std::string& w : fit.warnings) err << "warning: " << w << '\n';
        for (const std::string& b : fit.boundary_stuck) err << "warning: " << b << " ended on a bound\n";
        detail::emit(a.output, out, [&](std::ostream& s) { s << doc.dump(2) << '\n'; });
        if (!a.residuals.empty())
            detail::emit(a.residuals, out, [&](std::ostream& s) { csv::write_residuals(s, fit); });
        return kOk;
    } catch (const InsufficientData& e) {
        err << "error: " << e.what() << '\n';
        return kQualityError;
    } catch (const NoConvergence& e) {
        err << "error: " << e.what() << '\n';
        return kQualityError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kDataError;
    }
}

/// Reference superconducting gaps (uV) for the discrepancy ratio.
inline constexpr std::pair<const char*, double> kReferenceGaps[] = {{"al", 162.0}, {"4hb_tas2", 390.0}};

inline int cmd_abcheck(const AbcheckArgs& a, std::ostream& out, std::ostream& err) {
    try {
        if (a.ej.has_value() == a.delta_uv.has_value())
            throw std::invalid_argument("give exactly one of --ej and --delta-uv");
        double ej = 0.0, gap = 0.0;
        if (a.ej) {
            ej = *a.ej;
            gap = ab_inferred_gap(a.r_n, ej) / constants::volts_per_microvolt;
        } else {
            gap = *a.delta_uv;
            ej = ab_josephson_energy({a.r_n, gap * constants::volts_per_microvolt});
        }
        if (a.json) {
            nlohmann::json doc = {{"r_n_ohm", a.r_n}, {"ej_ghz", ej}, {"gap_uv", gap}};
            for (const auto& [name, ref] : kReferenceGaps)
                doc["ratio"][name] = {{"reference_gap_uv", ref}, {"ratio", ref / gap}};
            out << doc.dump(2) << '\n';
        } else {
            char line[128];
            std::snprintf(line, sizeof line, "r_n_ohm   %.6g\nej_ghz    %.6g\ngap_uv    %.6g\n", a.r_n, ej, gap);
            out << line;
            for (const auto& [name, ref] : kReferenceGaps) {
                std::snprintf(line, sizeof line, "ratio_%-9s %.4g  (reference %g uV)\n", name, ref / gap, ref);
                out << line;
            }
        }
        return kOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    }
}

inline int cmd_t1fit(const T1fitArgs& a, std::ostream& out, std::ostream& err) {
    try {
        detail::require_distinct({a.input, a.output});
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    }
    try {
        const DecayFit fit = fit_exponential_decay(csv::read_decay(a.input));
        detail::emit(a.output, out, [&](std::ostream& s) { s << json::to_json(fit).dump(2) << '\n'; });
        return kOk;
    } catch (const NonDecaying& e) {
        err << "error: " << e.what() << '\n';
        return kQualityError;
    } catch (const NoConvergence& e) {
        err << "error: " << e.what() << '\n';
        return kQualityError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kDataError;
    }
}

/// Entry point. argv[0] is the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Transmon-cavity spectrum simulation and fitting", "cqed"};
    app.set_config("--config", "", "read options from a key=value file ([subcommand] sections)");
    std::string save_config;
    app.add_option("--save-config", save_config, "write the effective configuration to this file");
    app.require_subcommand(1);

    SimulateArgs sim;
    CLI::App* simulate = app.add_subcommand("simulate", "flux sweep of dressed transition lines");
    detail::add_model_options(*simulate, sim.model);
    detail::add_current_options(*simulate, sim.currents);
    simulate->add_option("--n-cut", sim.model.n_cut, "charge cutoff")->capture_default_str();
    simulate->add_option("-o,--output", sim.output, "sweep CSV ('-' for stdout)")->capture_default_str();
    simulate->add_option("--plot", sim.plot, "SVG plot of the lines");
    simulate->add_option("--threads", sim.threads, "worker threads (0 = all cores)")->capture_default_str();

    SynthArgs syn;
    syn.model.n_cut = 20;
    CLI::App* synth = app.add_subcommand("synth", "synthetic two-tone spectroscopy grid");
    detail::add_model_options(*synth, syn.model);
    detail::add_current_options(*synth, syn.currents);
    synth->add_option("--n-cut", syn.model.n_cut, "charge cutoff")->capture_default_str();
    synth->add_option("--freq-start", syn.freq_start, "GHz")->capture_default_str();
    synth->add_option("--freq-stop", syn.freq_stop, "GHz")->capture_default_str();
    synth->add_option("--freq-step", syn.freq_step, "GHz")->capture_default_str();
    synth->add_option("--linewidth", syn.linewidth, "Gaussian line sigma (GHz)")->capture_default_str();
    synth->add_option("--amplitude", syn.amplitude, "line amplitude")->capture_default_str();
    synth->add_option("--freq-noise", syn.freq_noise, "sigma of line-position jitter (GHz)")->capture_default_str();
    synth->add_option("--amp-noise", syn.amp_noise, "sigma of additive magnitude noise")->capture_default_str();
    synth->add_option("--snr", syn.snr, "amplitude / magnitude-noise sigma (0 = none)")->capture_default_str();
    synth->add_option("--seed", syn.seed, "random seed")->capture_default_str();
    synth->add_option("-o,--output", syn.output, "spectroscopy CSV ('-' for stdout)")->capture_default_str();

    FitArgs fa;
    fa.model.n_cut = 20;
    CLI::App* fit = app.add_subcommand("fit", "extract peaks from a spectroscopy grid and fit the model");
    detail::add_model_options(*fit, fa.model);
    fit->add_option("-i,--input", fa.input, "spectroscopy CSV")->required();
    fit->add_option("-o,--output", fa.output, "result JSON ('-' for stdout)")->capture_default_str();
    fit->add_option("--residuals", fa.residuals, "per-peak residual CSV");
    fit->add_option("--freeze", fa.freeze, "comma-separated parameter names held fixed")->delimiter(',');
    fit->add_option("--n-cut", fa.model.n_cut, "charge cutoff")->capture_default_str();
    fit->add_option("--smoothing", fa.smoothing, "moving-average window (odd)")->capture_default_str();
    fit->add_option("--min-prominence", fa.min_prominence, "peak threshold, fraction of trace range")
        ->capture_default_str();
    fit->add_option("--max-distance", fa.max_distance, "peak-to-line assignment radius (GHz)")->capture_default_str();
    fit->add_option("--max-outer", fa.max_outer, "assignment passes")->capture_default_str();
    fit->add_option("--max-iterations", fa.max_iterations, "solver iterations per pass")->capture_default_str();
    fit->add_option("--bootstrap", fa.bootstrap, "bootstrap resamples for sigma (0 = curvature)")
        ->capture_default_str();
    fit->add_option("--seed", fa.seed, "bootstrap seed")->capture_default_str();
    fit->add_option("--threads", fa.threads, "peak-extraction threads")->capture_default_str();

    AbcheckArgs ab;
    double ej_in = 0.0, delta_in = 0.0;
    CLI::App* abcheck = app.add_subcommand("abcheck", "Ambegaokar-Baratoff consistency check");
    abcheck->add_option("--rn", ab.r_n, "normal-state resistance (ohm)")->required();
    CLI::Option* ej_opt = abcheck->add_option("--ej", ej_in, "Josephson energy (GHz)");
    CLI::Option* delta_opt = abcheck->add_option("--delta-uv", delta_in, "superconducting gap (uV)");
    abcheck->add_flag("--json", ab.json, "JSON output");

    T1fitArgs t1;
    CLI::App* t1fit = app.add_subcommand("t1fit", "exponential fit of an energy-relaxation trace");
    t1fit->add_option("input,-i,--input", t1.input, "decay CSV (delay_us, population)")->required();
    t1fit->add_option("-o,--output", t1.output, "result JSON ('-' for stdout)")->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();  // program name
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kOk : kConfigError;
    }

    if (!save_config.empty()) {
        try {
            detail::emit(save_config, out, [&](std::ostream& s) { s << app.config_to_str(true, true); });
        } catch (const std::exception& e) {
            err << "error: " << e.what() << '\n';
            return kConfigError;
        }
    }

    if (*simulate) return cmd_simulate(sim, out, err);
    if (*synth) return cmd_synth(syn, out, err);
    if (*fit) return cmd_fit(fa, out, err);
    if (*abcheck) {
        if (ej_opt->count() > 0) ab.ej = ej_in;
        if (delta_opt->count() > 0) ab.delta_uv = delta_in;
        return cmd_abcheck(ab, out, err);
    }
    return cmd_t1fit(t1, out, err);
}

}  // namespace cqed::cli
