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

// Synthesizes a noisy two-tone map, extracts peaks and fits the model back.

#include <cstdio>
#include <random>

#include "cqed/cqed.hpp"

int main() {
    using namespace cqed;
    const Theta truth{0.14, 11.6, 0.35, 7.0, 0.2, 0.0, 1e-3};
    SpectrumModel model;
    for (const char* s : {"0.0>1.0", "1.0>2.0", "0.0>0.1", "raman_A", "raman_B", "raman_C"})
        model.lines.push_back(LineRequest::parse(s));

    SynthOptions so;
    for (int k = 0; k < 61; ++k) so.currents.push_back((-0.6 + 1.2 * k / 60.0) * 1e-3);
    so.freq_start = 0.1;
    so.freq_stop = 7.5;
    so.freq_noise = 1e-3;
    so.seed = 7;
    const SpectroscopyDataset ds = synthesize_spectroscopy(truth, model, so);
    const PeakSet peaks = extract_peaks(ds, 1, 0.2);

    Theta guess = truth;
    for (double& v : guess) v *= 1.01;
    guess[index_of(FitParam::current_at_zero_flux)] = 5e-6;

    const FitResult fit = fit_spectrum(peaks, FitParams::with_default_bounds(guess), model);
    std::printf("%zu peaks, %td assigned, rms %.3f MHz, %d iterations\n", peaks.peaks.size(), fit.residuals.size(),
                fit.residual_rms * 1e3, fit.iterations);
    for (int k = 0; k < kFitParamCount; ++k)
        std::printf("%-28s %14.8g +- %-10.3g (true %g)\n", std::string(kFitParamNames[k]).c_str(), fit.theta[k],
                    fit.sigma[k], truth[k]);
}
