// Copyright 2026 The ionreg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ionreg/circuit.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "ionreg/errors.hpp"
#include "ionreg/gates.hpp"

namespace ionreg {

namespace {

std::vector<std::string> split_words(std::string_view line) {
    std::vector<std::string> words;
    std::istringstream in{std::string(line)};
    std::string w;
    while (in >> w) words.push_back(w);
    return words;
}

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
}

[[noreturn]] void parse_error(std::size_t line, const std::string &message) {
    fail(ErrorKind::Parse, "line " + std::to_string(line) + ": " + message);
}

Ion parse_qubit(const std::string &word, std::size_t line) {
    const std::string w = upper(word);
    if (w == "Q1") return Ion::One;
    if (w == "Q2") return Ion::Two;
    parse_error(line, "expected qubit q1 or q2, got '" + word + "'");
}

double parse_angle(const std::string &word, std::size_t line) {
    double value = 0.0;
    const char *first = word.data();
    const char *last = word.data() + word.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value))
        parse_error(line, "invalid angle '" + word + "'");
    return value;
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::size_t Circuit::ms_count() const {
    return static_cast<std::size_t>(
        std::count_if(ops.begin(), ops.end(), [](const GateOp &op) { return op.kind == GateKind::MS; }));
}

void validate(const Circuit &circuit) {
    for (std::size_t i = 0; i < circuit.ops.size(); ++i) {
        const auto &op = circuit.ops[i];
        if (!std::isfinite(op.theta) || !std::isfinite(op.phi))
            fail(ErrorKind::Validation, "gate " + std::to_string(i) + " has a non-finite angle");
    }
}

Circuit parse_circuit(std::string_view text) {
    Circuit circuit;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        const auto words = split_words(line);
        if (words.empty()) continue;
        const std::string kw = upper(words[0]);
        auto expect_args = [&](std::size_t n) {
            if (words.size() != n + 1)
                parse_error(line_no, kw + " expects " + std::to_string(n) + " argument(s), got " +
                                         std::to_string(words.size() - 1));
        };
        if (kw == "RX" || kw == "RY" || kw == "RZ") {
            expect_args(2);
            const Ion q = parse_qubit(words[1], line_no);
            const double theta = parse_angle(words[2], line_no);
            circuit.ops.push_back(kw == "RX" ? GateOp::rx(theta, q) : kw == "RY" ? GateOp::ry(theta, q) : GateOp::rz(theta, q));
        } else if (kw == "RPHI") {
            expect_args(3);
            const Ion q = parse_qubit(words[1], line_no);
            circuit.ops.push_back(GateOp::rphi(parse_angle(words[2], line_no), parse_angle(words[3], line_no), q));
        } else if (kw == "MS") {
            expect_args(0);
            circuit.ops.push_back(GateOp::ms());
        } else if (kw == "BARRIER") {
            expect_args(0);
            circuit.ops.push_back(GateOp::barrier());
        } else {
            parse_error(line_no, "unknown gate '" + words[0] + "'");
        }
    }
    return circuit;
}

std::string format_circuit(const Circuit &circuit) {
    std::string out;
    for (const auto &op : circuit.ops) {
        const std::string q = op.qubit == Ion::One ? "q1" : "q2";
        switch (op.kind) {
            case GateKind::Rx: out += "RX " + q + " " + format_number(op.theta); break;
            case GateKind::Ry: out += "RY " + q + " " + format_number(op.theta); break;
            case GateKind::Rz: out += "RZ " + q + " " + format_number(op.theta); break;
            case GateKind::Rphi:
                out += "RPHI " + q + " " + format_number(op.theta) + " " + format_number(op.phi);
                break;
            case GateKind::MS: out += "MS"; break;
            case GateKind::Barrier: out += "BARRIER"; break;
        }
        out += '\n';
    }
    return out;
}

Mat4 ideal_unitary(const Circuit &circuit) {
    Mat4 u = Mat4::Identity();
    const Mat4 ms = ms_gate();
    for (const auto &op : circuit.ops) {
        switch (op.kind) {
            case GateKind::Rx: u = embed_single(r_x(op.theta), op.qubit) * u; break;
            case GateKind::Ry: u = embed_single(r_y(op.theta), op.qubit) * u; break;
            case GateKind::Rz: u = embed_single(r_z(op.theta), op.qubit) * u; break;
            case GateKind::Rphi: u = embed_single(r_phi(op.theta, op.phi), op.qubit) * u; break;
            case GateKind::MS: u = ms * u; break;
            case GateKind::Barrier: break;
        }
    }
    return u;
}

}  // namespace ionreg
