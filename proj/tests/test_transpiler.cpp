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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "helpers.hpp"
#include "ionreg/errors.hpp"
#include "ionreg/transpiler.hpp"

using namespace ionreg;
using testing_helpers::random_circuit;
using testing_helpers::schedule_of;

namespace {
NativeProgram with_transports(std::vector<NativeOp> ops) { return insert_transports(NativeProgram{std::move(ops)}); }
}  // namespace

TEST_CASE("parse and format circuits") {
    const Circuit c = parse_circuit("RX q1 3.14159\nry Q2 1.5708\n\n# comment\nRZ q1 0.7  # trailing\nRPHI q1 1.5708 0.3\nMS\nBARRIER\n");
    REQUIRE(c.ops.size() == 6);
    CHECK(c.ops[0] == GateOp::rx(3.14159, Ion::One));
    CHECK(c.ops[1] == GateOp::ry(1.5708, Ion::Two));
    CHECK(c.ops[2] == GateOp::rz(0.7, Ion::One));
    CHECK(c.ops[3] == GateOp::rphi(1.5708, 0.3, Ion::One));
    CHECK(c.ops[4].kind == GateKind::MS);
    CHECK(c.ops[5].kind == GateKind::Barrier);
    CHECK(parse_circuit(format_circuit(c)) == c);
}

TEST_CASE("parser errors name the line") {
    const auto message = [](const std::string &text) {
        try {
            parse_circuit(text);
        } catch (const Error &e) {
            CHECK(e.kind() == ErrorKind::Parse);
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message("MS\nRX q3 1.0\n").find("line 2") != std::string::npos);
    CHECK(message("RX q1\n").find("line 1") != std::string::npos);
    CHECK(message("MS\nMS\nCNOT q1 q2\n").find("line 3") != std::string::npos);
    CHECK(message("RX q1 abc\n").find("line 1") != std::string::npos);
    CHECK(message("RX q1 1.0 2.0\n").find("line 1") != std::string::npos);
    CHECK(message("MS q1\n").find("line 1") != std::string::npos);
    CHECK(message("RX q1 nan\n").find("line 1") != std::string::npos);
}

TEST_CASE("lowering single gates") {
    const NativeProgram p = lower(Circuit{{GateOp::rx(kPi, Ion::One)}}, 0.0);
    REQUIRE(p.ops.size() == 2);
    CHECK(p.ops[0] == NativeOp::transport(Configuration::Ion1));
    CHECK(p.ops[1] == NativeOp::sq(Ion::One, kPi, 0.0));

    const double theta = 0.9;
    const NativeProgram z = lower(Circuit{{GateOp::rz(theta, Ion::Two)}}, 0.0);
    CHECK(z.count(NativeKind::SQPulse) == 3);
    CHECK(z.transport_count() == 1);
    for (const auto &op : z.ops)
        if (op.kind == NativeKind::SQPulse) CHECK(op.ion == Ion::Two);
    const Mat4 expected = oracle::kron(oracle::M2::Identity(), oracle::expm_taylor(oracle::sz(), theta / 2));
    CHECK(oracle::phase_distance(ideal_unitary(z, 0.0), expected) < 1e-10);

    const NativeProgram f = lower(Circuit{{GateOp::rx(kPi / 2, Ion::One), GateOp::ms()}}, 0.1);
    REQUIRE(f.ops.size() == 4);
    CHECK(f.ops[1].kind == NativeKind::SQPulse);
    CHECK(f.ops[1].phi_dds == doctest::Approx(-0.1));
    CHECK(f.ops[2] == NativeOp::transport(Configuration::Gate));
    CHECK(f.ops[3].kind == NativeKind::MSPulse);
    CHECK(transports_well_formed(f));
}

TEST_CASE("lowered programs reproduce the circuit unitary") {
    std::mt19937_64 rng(21);
    for (int k = 0; k < 100; ++k) {
        const Circuit c = random_circuit(rng);
        const double offset = std::uniform_real_distribution<double>(-1, 1)(rng);
        const NativeProgram p = lower(c, offset);
        CHECK(transports_well_formed(p));
        CHECK(oracle::phase_distance(ideal_unitary(p, offset), ideal_unitary(c)) < 1e-9);
    }
}

TEST_CASE("minimize_transports groups pulses by ion within a block") {
    const NativeOp a = NativeOp::sq(Ion::One, 0.3, 0.1), b = NativeOp::sq(Ion::Two, 0.5, 0.2),
                   c = NativeOp::sq(Ion::One, 0.7, 0.4);
    const NativeProgram in = with_transports({a, b, c});
    CHECK(in.transport_count() == 3);
    const NativeProgram out = minimize_transports(in);
    CHECK(out.transport_count() == 2);
    std::vector<NativeOp> pulses;
    for (const auto &op : out.ops)
        if (op.kind == NativeKind::SQPulse) pulses.push_back(op);
    REQUIRE(pulses.size() == 3);
    CHECK(pulses[0] == a);
    CHECK(pulses[1] == c);
    CHECK(pulses[2] == b);
    CHECK(oracle::phase_distance(ideal_unitary(out, 0.0), ideal_unitary(in, 0.0)) < 1e-12);

    const NativeProgram empty = minimize_transports(NativeProgram{});
    CHECK(empty.ops.empty());

    const NativeProgram fenced = with_transports({a, NativeOp::ms(), c});
    const NativeProgram kept = minimize_transports(fenced);
    CHECK(kept == fenced);
}

TEST_CASE("barriers stop reordering") {
    const NativeOp a = NativeOp::sq(Ion::One, 0.3, 0.1), b = NativeOp::sq(Ion::Two, 0.5, 0.2),
                   c = NativeOp::sq(Ion::One, 0.7, 0.4);
    const NativeProgram out = minimize_transports(with_transports({a, b, NativeOp::barrier(), c}));
    std::vector<NativeKind> kinds;
    std::size_t barrier_at = 0, c_at = 0;
    for (std::size_t i = 0; i < out.ops.size(); ++i) {
        if (out.ops[i].kind == NativeKind::Barrier) barrier_at = i;
        if (out.ops[i] == c) c_at = i;
    }
    CHECK(c_at > barrier_at);
    // b first then a lets the barrier-separated a and c share a configuration.
    CHECK(out.transport_count() == 2);
}

TEST_CASE("minimization is sound, optimal and idempotent on random circuits") {
    std::mt19937_64 rng(77);
    int brute_checked = 0;
    for (int k = 0; k < 200; ++k) {
        const Circuit c = random_circuit(rng);
        const NativeProgram lowered = lower(c, 0.2);
        const NativeProgram m = minimize_transports(lowered);
        CHECK(transports_well_formed(m));
        CHECK(m.transport_count() <= lowered.transport_count());
        CHECK(oracle::phase_distance(ideal_unitary(m, 0.2), ideal_unitary(lowered, 0.2)) < 1e-9);
        CHECK(minimize_transports(m) == m);
        const auto s = schedule_of(lowered);
        if (testing_helpers::largest_block(s) <= 6) {
            if (auto best = oracle::brute_force_min_transports(s)) {
                CHECK(static_cast<int>(m.transport_count()) == *best);
                ++brute_checked;
            }
        }
    }
    CHECK(brute_checked > 50);
}

TEST_CASE("program JSON and schedule length") {
    const NativeProgram p = lower(Circuit{{GateOp::rx(kPi, Ion::One), GateOp::ms()}}, 0.0);
    const auto j = to_json(p);
    CHECK(j["ops"].size() == 4);
    CHECK(j["transports"] == 2);
    const double d = schedule_duration(p, {kPi / 1e-4, kPi / 2e-4});
    CHECK(d == doctest::Approx(2 * kTransportDuration + 1e-4 + 1150e-6));
}
