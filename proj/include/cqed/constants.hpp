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

#pragma once

#include <numbers>

namespace cqed::constants {

/// Planck constant, J s (SI 2019, exact).
inline constexpr double planck = 6.62607015e-34;

/// Magnetic flux quantum h / 2e, Wb.
inline constexpr double flux_quantum = 2.067833848e-15;

inline constexpr double pi = std::numbers::pi;

inline constexpr double hz_per_ghz = 1e9;
inline constexpr double volts_per_microvolt = 1e-6;

}  // namespace cqed::constants
