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

// Prints the qubit line and the three Raman lines across half a flux period
// for the 140 MHz / 11.6 GHz / d = 0.35 device.

#include <cstdio>
#include <vector>

#include "cqed/cqed.hpp"

int main() {
    const cqed::SquidParams squid{11.6, 0.35};
    const cqed::TransmonParams tp{0.14, 0.0, 0.0};
    const cqed::CavityParams cav{7.0, 5, 0.07};  // cavity values are placeholders
    const cqed::FluxCalibration cal{0.0, 1e-3};

    std::vector<double> currents;
    for (int k = 0; k <= 10; ++k) currents.push_back(0.05e-3 * k);
    std::vector<cqed::LineRequest> lines{cqed::LineRequest::parse("0.0>1.0"),
                                         cqed::LineRequest::raman(cqed::LineKind::raman_a),
                                         cqed::LineRequest::raman(cqed::LineKind::raman_b),
                                         cqed::LineRequest::raman(cqed::LineKind::raman_c)};

    const auto rows = cqed::flux_sweep_spectrum(squid, cal, tp, cav, currents, lines, {});
    std::printf("%10s %10s", "I (mA)", "Phi/Phi0");
    for (const auto& l : lines) std::printf(" %10s", l.name().c_str());
    std::printf("\n");
    for (std::size_t k = 0; k < rows.size(); k += lines.size()) {
        std::printf("%10.3f %10.3f", rows[k].current * 1e3, rows[k].flux_ratio);
        for (std::size_t j = 0; j < lines.size(); ++j) std::printf(" %10.4f", rows[k + j].frequency);
        std::printf("\n");
    }

    const double gap = cqed::ab_inferred_gap(2400.0, 11.6) / cqed::constants::volts_per_microvolt;
    std::printf("\ngap implied by R_n = 2.4 kOhm, E_J = 11.6 GHz: %.1f uV (Al: 162 uV, ratio %.2f)\n", gap,
                162.0 / gap);
}
