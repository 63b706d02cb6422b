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

// SQUID flux tuning and the Ambegaokar-Baratoff junction relation.
//
// Energies are frequencies in GHz (E / h). The superconducting gap is carried
// as a voltage (Delta / e), which is what makes E_J = Phi0 * Delta / (4 R_n)
// dimensionally consistent.

#pragma once

#include <cmath>
#include <stdexcept>

#include "cqed/constants.hpp"

namespace cqed {

/// Two-junction loop: total Josephson energy and normalized asymmetry
/// d = (E_J2 - E_J1) / (E_J1 + E_J2).
struct SquidParams {
    double ej_sum = 0.0;  // GHz
    double d = 0.0;

    void validate() const {
        if (!(ej_sum > 0.0)) throw std::invalid_argument("SquidParams: ej_sum must be > 0");
        if (!(d >= 0.0 && d < 1.0)) throw std::invalid_argument("SquidParams: d must lie in [0, 1)");
    }
};

/// Affine coil-current to flux map.
struct FluxCalibration {
    double current_at_zero_flux = 0.0;      // A
    double current_per_flux_quantum = 1.0;  // A

    void validate() const {
        if (current_per_flux_quantum == 0.0 || !std::isfinite(current_per_flux_quantum))
            throw std::invalid_argument("FluxCalibration: current_per_flux_quantum must be nonzero");
        if (!std::isfinite(current_at_zero_flux))
            throw std::invalid_argument("FluxCalibration: current_at_zero_flux must be finite");
    }
};

struct JunctionDC {
    double r_n = 0.0;      // ohm
    double delta_v = 0.0;  // V

    void validate() const {
        if (!(r_n > 0.0)) throw std::invalid_argument("JunctionDC: r_n must be > 0");
        if (!(delta_v > 0.0)) throw std::invalid_argument("JunctionDC: delta_v must be > 0");
    }
};

/// |E_J(Phi)| = E_sum * sqrt(cos^2(pi x) + d^2 sin^2(pi x)), x = Phi / Phi0.
///
/// The argument is reduced to [-1/2, 1/2] first so that periodicity and
/// parity hold to rounding for large |x|.
inline double ej_of_flux(const SquidParams& squid, double phi_ratio) {
    const double reduced = phi_ratio - std::round(phi_ratio);
    const double c = std::cos(constants::pi * reduced);
    const double s = std::sin(constants::pi * reduced);
    return std::abs(squid.ej_sum) * std::sqrt(c * c + squid.d * squid.d * s * s);
}

inline double flux_from_current(const FluxCalibration& cal, double current) {
    return (current - cal.current_at_zero_flux) / cal.current_per_flux_quantum;
}

/// Inverse of flux_from_current.
inline double current_from_flux(const FluxCalibration& cal, double phi_ratio) {
    return cal.current_at_zero_flux + phi_ratio * cal.current_per_flux_quantum;
}

/// E_J / h in GHz predicted from the normal-state resistance and the gap.
inline double ab_josephson_energy(const JunctionDC& dc) {
    const double joules = constants::flux_quantum * dc.delta_v / (4.0 * dc.r_n);
    return joules / constants::planck / constants::hz_per_ghz;
}

/// Gap voltage (V) that reproduces a measured E_J / h (GHz) at resistance r_n.
inline double ab_inferred_gap(double r_n, double ej_ghz) {
    if (!(r_n > 0.0)) throw std::invalid_argument("ab_inferred_gap: r_n must be > 0");
    if (!(ej_ghz >= 0.0)) throw std::invalid_argument("ab_inferred_gap: ej must be >= 0");
    return 4.0 * r_n * ej_ghz * constants::hz_per_ghz * constants::planck / constants::flux_quantum;
}

}  // namespace cqed
