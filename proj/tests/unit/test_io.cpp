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

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cqed/csv_io.hpp"
#include "cqed/json_io.hpp"
#include "cqed/svg_plot.hpp"

using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinRel;

TEST_CASE("spectroscopy CSV round trip", "[io]") {
    cqed::SpectroscopyDataset ds;
    ds.currents = {-1e-4, 0.0, 2.5e-4};
    ds.frequencies = {3.0, 3.001, 3.002, 3.003};
    ds.magnitudes.resize(3, 4);
    ds.magnitudes << 0.1, 0.2, 0.3, 0.4, 1, 2, 3, 4, -0.5, 0.25, 1e-9, 7;
    ds.magnitudes(1, 2) = std::numeric_limits<double>::quiet_NaN();
    std::stringstream buf;
    cqed::csv::write_spectroscopy(buf, ds);
    const cqed::SpectroscopyDataset back = cqed::csv::read_spectroscopy(buf);
    CHECK(back.currents == ds.currents);
    CHECK(back.frequencies == ds.frequencies);
    for (Eigen::Index r = 0; r < 3; ++r)
        for (Eigen::Index c = 0; c < 4; ++c) {
            if (std::isnan(ds.magnitudes(r, c)))
                CHECK(std::isnan(back.magnitudes(r, c)));
            else
                CHECK_THAT(back.magnitudes(r, c), WithinRel(ds.magnitudes(r, c), 1e-7));
        }
}

TEST_CASE("malformed spectroscopy CSV", "[io]") {
    auto read = [](const std::string& text) {
        std::istringstream in(text);
        return cqed::csv::read_spectroscopy(in);
    };
    CHECK_THROWS_AS(read(""), cqed::DataError);
    CHECK_THROWS_AS(read("x,1,2,3\n"), cqed::DataError);
    CHECK_THROWS_AS(read("x,1,2,3\n0,1,2\n"), cqed::DataError);
    CHECK_THROWS_AS(read("x,1,2,3\n0,1,two,3\n"), cqed::DataError);
    CHECK_THROWS_AS(read("x,1,3,2\n0,1,2,3\n"), cqed::DataError);
    CHECK_THROWS_AS(read("x,1,2,3\n1e-3,1,2,3\n0,1,2,3\n"), cqed::DataError);
    CHECK_NOTHROW(read("# comment\nx,1,2,3\n\n0,1,,3\n"));
    CHECK(std::isnan(read("x,1,2,3\n0,1,,3\n").magnitudes(0, 1)));
}

TEST_CASE("decay CSV", "[io]") {
    std::istringstream in("delay_us,population\n0,1.0\n0.1,0.6\n0.2,0.37\n0.3,0.22\n");
    const cqed::DecayTrace tr = cqed::csv::read_decay(in);
    REQUIRE(tr.delays_us.size() == 4);
    CHECK(tr.population[2] == 0.37);
    std::stringstream out;
    cqed::csv::write_decay(out, tr);
    const cqed::DecayTrace back = cqed::csv::read_decay(out);
    CHECK(back.delays_us == tr.delays_us);
    CHECK(back.population == tr.population);

    std::istringstream headerless("0,1\n1,0.5\n");
    CHECK(cqed::csv::read_decay(headerless).delays_us.size() == 2);
    std::istringstream bad("delay_us,population\n0,1,2\n");
    CHECK_THROWS_AS(cqed::csv::read_decay(bad), cqed::DataError);
    std::istringstream descending("1,0.5\n0,1\n");
    CHECK_THROWS_AS(cqed::csv::read_decay(descending), cqed::DataError);
}

TEST_CASE("sweep CSV layout", "[io]") {
    std::vector<cqed::SweepRow> rows{{0.0, 0.0, "0.0>1.0", 3.4567, "ok"},
                                     {1e-4, 0.1, "raman_A", std::numeric_limits<double>::quiet_NaN(), "missing_label"}};
    std::ostringstream out;
    cqed::csv::write_sweep(out, rows);
    CHECK(out.str() ==
          "current_A,flux_ratio,line_kind,frequency_GHz,status\n"
          "0,0,0.0>1.0,3.4567,ok\n"
          "0.0001,0.1,raman_A,nan,missing_label\n");
}

TEST_CASE("fit result JSON", "[io]") {
    cqed::FitResult fit;
    fit.theta = {0.14, 11.6, 0.35, 7.0, 0.2, 1e-6, 1e-3};
    fit.sigma = {1e-5, 1e-3, 1e-5, 1e-4, 1e-3, 1e-9, 1e-8};
    fit.frozen[3] = true;
    fit.residuals = Eigen::VectorXd::Constant(3, 1e-3);
    fit.residual_rms = 1e-3;
    fit.converged = true;
    fit.warnings = {"something odd"};
    const nlohmann::json doc = cqed::json::to_json(fit);
    CHECK(doc["theta"]["g_ghz"] == 0.2);
    CHECK(doc["sigma"]["e_c_ghz"] == 1e-5);
    CHECK(doc["residual_rms"] == 1e-3);
    CHECK(doc["diagnostics"]["frozen"][0] == "omega_c_ghz");
    CHECK(doc["diagnostics"]["assigned_peaks"] == 3);

    // Parse and re-serialize: same document.
    const std::string text = doc.dump(2);
    CHECK(nlohmann::json::parse(text) == doc);
    CHECK(nlohmann::json::parse(text).dump(2) == text);

    const cqed::Theta back = cqed::json::read_theta(doc["theta"]);
    CHECK(back == fit.theta);
    CHECK_THROWS_AS(cqed::json::read_theta(nlohmann::json::array()), cqed::DataError);

    const nlohmann::json decay = cqed::json::to_json(cqed::DecayFit{1.0, 0.0, 0.69, 0.03, 1e-3, 7});
    CHECK(decay["t1_us"] == 0.69);
    CHECK(nlohmann::json::parse(decay.dump()) == decay);
}

TEST_CASE("SVG plot of a sweep", "[io]") {
    std::vector<cqed::SweepRow> rows;
    for (int k = 0; k < 5; ++k) {
        rows.push_back({1e-4 * k, 0.1 * k, "0.0>1.0", 3.0 - 0.1 * k, "ok"});
        rows.push_back({1e-4 * k, 0.1 * k, "raman_A", k == 2 ? std::nan("") : 5.0 + 0.1 * k, "ok"});
    }
    std::ostringstream out;
    cqed::svg::plot_sweep(out, rows, {640, 400, "a < b"});
    const std::string svg = out.str();
    CHECK_THAT(svg, ContainsSubstring("<svg"));
    CHECK_THAT(svg, ContainsSubstring("</svg>"));
    CHECK_THAT(svg, ContainsSubstring("a &lt; b"));
    CHECK_THAT(svg, ContainsSubstring("raman_A"));
    // The NaN point splits the Raman series into two pieces.
    std::size_t paths = 0;
    for (std::size_t pos = svg.find("<path"); pos != std::string::npos; pos = svg.find("<path", pos + 1)) ++paths;
    CHECK(paths == 2);
    const std::size_t raman_path = svg.rfind("<path");
    const std::string d = svg.substr(raman_path, svg.find("/>", raman_path) - raman_path);
    CHECK(std::count(d.begin(), d.end(), 'M') == 2);
}
