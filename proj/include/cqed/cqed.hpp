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

// Umbrella header.

#pragma once

#include "cqed/constants.hpp"
#include "cqed/csv_io.hpp"
#include "cqed/decay_fit.hpp"
#include "cqed/dressed.hpp"
#include "cqed/errors.hpp"
#include "cqed/json_io.hpp"
#include "cqed/junction.hpp"
#include "cqed/least_squares.hpp"
#include "cqed/lines.hpp"
#include "cqed/peaks.hpp"
#include "cqed/spectrum_fit.hpp"
#include "cqed/svg_plot.hpp"
#include "cqed/sweep.hpp"
#include "cqed/synth.hpp"
#include "cqed/transmon.hpp"
