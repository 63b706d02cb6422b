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

// Spectroscopic lines as signed sums of dressed transition frequencies.
//
// Text form (also used as the line_kind column in sweep output):
//   "0.0>1.0"             single transition |0,0> -> |1,0>
//   "0.0>1.0+0.1>3.0"     custom sum of transitions
//   "raman_A" / "raman_B" / "raman_C"
// where "q.p" is transmon level q with p photons.

#pragma once

#include <algorithm>
#include <charconv>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cqed/dressed.hpp"

namespace cqed {

enum class LineKind { single, raman_a, raman_b, raman_c, custom_sum };

struct LineTerm {
    StateLabel from;
    StateLabel to;

    friend bool operator==(const LineTerm&, const LineTerm&) = default;
};

struct TransitionLine {
    LineKind kind = LineKind::single;
    double frequency = 0.0;  // GHz
    std::vector<LineTerm> terms;
};

class LineRequest {
public:
    LineRequest() = default;
    LineRequest(LineKind kind, std::vector<LineTerm> terms) : kind_(kind), terms_(std::move(terms)) {
        if (terms_.empty()) throw std::invalid_argument("LineRequest: at least one transition required");
    }

    static LineRequest single(StateLabel from, StateLabel to) { return {LineKind::single, {{from, to}}}; }

    /// The three composite lines (f_{1,0} - f_{0,0}) + (f_{k,0} - f_{k-3,1}),
    /// k = 3, 4, 5.
    static LineRequest raman(LineKind kind) {
        const LineTerm qubit{{0, 0}, {1, 0}};
        switch (kind) {
            case LineKind::raman_a: return {kind, {qubit, {{0, 1}, {3, 0}}}};
            case LineKind::raman_b: return {kind, {qubit, {{1, 1}, {4, 0}}}};
            case LineKind::raman_c: return {kind, {qubit, {{2, 1}, {5, 0}}}};
            default: throw std::invalid_argument("LineRequest::raman: not a Raman kind");
        }
    }

    static LineRequest parse(std::string_view text) {
        if (text == "raman_A") return raman(LineKind::raman_a);
        if (text == "raman_B") return raman(LineKind::raman_b);
        if (text == "raman_C") return raman(LineKind::raman_c);

        std::vector<LineTerm> terms;
        std::size_t pos = 0;
        while (true) {
            const std::size_t plus = text.find('+', pos);
            const std::string_view term = text.substr(pos, plus == std::string_view::npos ? text.npos : plus - pos);
            const std::size_t arrow = term.find('>');
            if (arrow == std::string_view::npos)
                throw std::invalid_argument("line '" + std::string(text) + "': expected 'q.p>q.p'");
            terms.push_back({parse_label(term.substr(0, arrow), text), parse_label(term.substr(arrow + 1), text)});
            if (plus == std::string_view::npos) break;
            pos = plus + 1;
        }
        return {terms.size() == 1 ? LineKind::single : LineKind::custom_sum, std::move(terms)};
    }

    LineKind kind() const { return kind_; }
    const std::vector<LineTerm>& terms() const { return terms_; }

    std::string name() const {
        switch (kind_) {
            case LineKind::raman_a: return "raman_A";
            case LineKind::raman_b: return "raman_B";
            case LineKind::raman_c: return "raman_C";
            default: break;
        }
        std::string out;
        for (const auto& t : terms_) {
            if (!out.empty()) out += '+';
            out += to_string(t.from) + ">" + to_string(t.to);
        }
        return out;
    }

    /// Highest transmon level and photon number referenced.
    StateLabel max_label() const {
        StateLabel m{0, 0};
        for (const auto& t : terms_)
            for (StateLabel s : {t.from, t.to}) {
                m.n_q = std::max(m.n_q, s.n_q);
                m.n_ph = std::max(m.n_ph, s.n_ph);
            }
        return m;
    }

private:
    static StateLabel parse_label(std::string_view s, std::string_view whole) {
        const std::size_t dot = s.find('.');
        StateLabel out;
        if (dot == std::string_view::npos || !parse_int(s.substr(0, dot), out.n_q) ||
            !parse_int(s.substr(dot + 1), out.n_ph) || out.n_q < 0 || out.n_ph < 0)
            throw std::invalid_argument("line '" + std::string(whole) + "': bad state label '" + std::string(s) + "'");
        return out;
    }

    static bool parse_int(std::string_view s, int& value) {
        if (s.empty()) return false;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
        return ec == std::errc{} && ptr == s.data() + s.size();
    }

    LineKind kind_ = LineKind::single;
    std::vector<LineTerm> terms_;
};

inline TransitionLine evaluate_line(const DressedSpectrum& ds, const LineRequest& request,
                                    bool allow_ambiguous = false) {
    TransitionLine out{request.kind(), 0.0, request.terms()};
    for (const auto& t : request.terms()) out.frequency += transition_frequency(ds, t.from, t.to, allow_ambiguous);
    return out;
}

/// Lines A, B and C, in that order.
inline std::vector<TransitionLine> raman_lines(const DressedSpectrum& ds) {
    return {evaluate_line(ds, LineRequest::raman(LineKind::raman_a)),
            evaluate_line(ds, LineRequest::raman(LineKind::raman_b)),
            evaluate_line(ds, LineRequest::raman(LineKind::raman_c))};
}

}  // namespace cqed
