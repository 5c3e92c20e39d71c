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

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ionreg/quantum.hpp"

namespace ionreg {

enum class GateKind { Rx, Ry, Rz, Rphi, MS, Barrier };

/// Abstract gate-level operation. `theta`/`phi` are ignored by MS and Barrier.
struct GateOp {
    GateKind kind = GateKind::Barrier;
    Ion qubit = Ion::One;
    double theta = 0.0;
    double phi = 0.0;

    static GateOp rx(double theta, Ion q) { return {GateKind::Rx, q, theta, 0.0}; }
    static GateOp ry(double theta, Ion q) { return {GateKind::Ry, q, theta, 0.0}; }
    static GateOp rz(double theta, Ion q) { return {GateKind::Rz, q, theta, 0.0}; }
    static GateOp rphi(double theta, double phi, Ion q) { return {GateKind::Rphi, q, theta, phi}; }
    static GateOp ms() { return {GateKind::MS, Ion::One, 0.0, 0.0}; }
    static GateOp barrier() { return {GateKind::Barrier, Ion::One, 0.0, 0.0}; }

    bool operator==(const GateOp &) const = default;
};

struct Circuit {
    std::vector<GateOp> ops;

    std::size_t ms_count() const;
    bool operator==(const Circuit &) const = default;
};

/// Throws a validation error for non-finite angles.
void validate(const Circuit &circuit);

/// Parses the line-oriented circuit format:
///
///     RX q1 3.14159
///     RY q2 1.5708
///     RZ q1 0.7
///     RPHI q1 1.5708 0.3
///     MS
///     BARRIER
///
/// Keywords are case-insensitive; blank lines and `#` comments are skipped.
/// Malformed lines raise a parse error naming the 1-based line number.
Circuit parse_circuit(std::string_view text);

/// Inverse of parse_circuit(); angles are printed with round-trip precision.
std::string format_circuit(const Circuit &circuit);

/// Ideal register unitary of the circuit (first op applied first).
Mat4 ideal_unitary(const Circuit &circuit);

}  // namespace ionreg
