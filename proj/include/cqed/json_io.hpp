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

// JSON documents for fit results. Field names are stable.

#pragma once

#include <json.hpp>

#include <cmath>
#include <string>

#include "cqed/decay_fit.hpp"
#include "cqed/errors.hpp"
#include "cqed/spectrum_fit.hpp"

namespace cqed::json {

using nlohmann::json;

inline json theta_object(const Theta& t) {
    json out = json::object();
    for (std::size_t k = 0; k < t.size(); ++k) out[std::string(kFitParamNames[k])] = t[k];
    return out;
}

/// Reads a theta object; names not present keep their value in `into`.
inline Theta read_theta(const json& j, Theta into = {}) {
    if (!j.is_object()) throw DataError("theta must be a JSON object");
    for (std::size_t k = 0; k < into.size(); ++k) {
        const auto it = j.find(std::string(kFitParamNames[k]));
        if (it == j.end()) continue;
        if (!it->is_number()) throw DataError("theta." + std::string(kFitParamNames[k]) + " is not a number");
        into[k] = it->get<double>();
    }
    return into;
}

inline json to_json(const FitResult& fit) {
    json frozen = json::array();
    for (std::size_t k = 0; k < fit.frozen.size(); ++k)
        if (fit.frozen[k]) frozen.push_back(std::string(kFitParamNames[k]));
    return {
        {"theta", theta_object(fit.theta)},
        {"sigma", theta_object(fit.sigma)},
        {"residual_rms", fit.residual_rms},
        {"diagnostics",
         {
             {"converged", fit.converged},
             {"assignment_stable", fit.assignment_stable},
             {"iterations", fit.iterations},
             {"outer_iterations", fit.outer_iterations},
             {"final_step_norm", fit.final_step_norm},
             {"peaks", fit.peaks.peaks.size()},
             {"assigned_peaks", fit.residuals.size()},
             {"frozen", frozen},
             {"boundary_stuck", fit.boundary_stuck},
             {"warnings", fit.warnings},
         }},
    };
}

inline json to_json(const DecayFit& fit) {
    return {
        {"amplitude", fit.amplitude},
        {"offset", fit.offset},
        {"t1_us", fit.t1_us},
        {"t1_sigma_us", fit.t1_sigma_us},
        {"residual_rms", fit.residual_rms},
        {"iterations", fit.iterations},
    };
}

}  // namespace cqed::json
