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

#include <cstddef>
#include <vector>

#include "json.hpp"
#include "ionreg/circuit.hpp"
#include "ionreg/gates.hpp"

namespace ionreg {

/// Crystal configuration reached by a transport: one ion addressed, or the
/// entangling-gate position.
enum class Configuration { Ion1, Ion2, Gate };

inline Configuration configuration_for(Ion ion) { return ion == Ion::One ? Configuration::Ion1 : Configuration::Ion2; }

enum class NativeKind { SQPulse, MSPulse, Transport, Barrier };

struct NativeOp {
    NativeKind kind = NativeKind::Barrier;
    Ion ion = Ion::One;           // SQPulse
    double theta = 0.0;           // SQPulse, rad
    double phi_dds = 0.0;         // SQPulse, rad
    Configuration target = Configuration::Gate;  // Transport

    static NativeOp sq(Ion ion, double theta, double phi_dds) {
        return {NativeKind::SQPulse, ion, theta, phi_dds, Configuration::Gate};
    }
    static NativeOp ms() { return {NativeKind::MSPulse}; }
    static NativeOp transport(Configuration target) { return {NativeKind::Transport, Ion::One, 0.0, 0.0, target}; }
    static NativeOp barrier() { return {NativeKind::Barrier}; }

    bool operator==(const NativeOp &) const = default;
};

struct NativeProgram {
    std::vector<NativeOp> ops;

    std::size_t count(NativeKind kind) const;
    std::size_t transport_count() const { return count(NativeKind::Transport); }
    bool operator==(const NativeProgram &) const = default;
};

/// Approximate adiabatic transport time, carried for schedule reporting.
constexpr double kTransportDuration = 100e-6;

/// True when every SQPulse on ion k follows a Transport(k) and every MSPulse
/// follows a Transport(gate) with no other transport in between.
bool transports_well_formed(const NativeProgram &program);

/// Lowers a circuit to hardware pulses. Rz is expanded through rz_sequence(),
/// pulse phases are shifted into the DDS frame (phi_dds = phi - phi_offset)
/// and transports are inserted wherever the configuration changes.
NativeProgram lower(const Circuit &circuit, double phi_offset);

/// Drops all transports and inserts one wherever the required configuration
/// differs from the current one.
NativeProgram insert_transports(const NativeProgram &program);

/// Reorders single-qubit pulses between entangling gates and barriers so the
/// program needs the fewest transports. Pulses on different ions commute, so
/// only the interleaving of the two ions changes; the order on each ion is
/// kept. The choice of which ion goes first in each block is made jointly over
/// the whole program so barrier-separated blocks can share a configuration.
NativeProgram minimize_transports(const NativeProgram &program);

/// Ideal unitary of the program with pulse axes phi_dds + phi_offset.
Mat4 ideal_unitary(const NativeProgram &program, double phi_offset);

/// Total schedule length in seconds for the given per-ion Rabi rates.
double schedule_duration(const NativeProgram &program, const std::array<double, 2> &rabi_rate,
                         const MSGateParams &ms = {});

nlohmann::json to_json(const NativeProgram &program);

}  // namespace ionreg
