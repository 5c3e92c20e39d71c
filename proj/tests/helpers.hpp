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

#include <random>

#include "ionreg/circuit.hpp"
#include "ionreg/transpiler.hpp"
#include "oracles.hpp"

namespace testing_helpers {

/// Random circuit of up to `max_depth` gates mixing every gate kind.
template <class Rng>
ionreg::Circuit random_circuit(Rng &rng, int max_depth = 20) {
    using namespace ionreg;
    std::uniform_int_distribution<int> depth(0, max_depth), kind(0, 9), qubit(1, 2);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    Circuit c;
    const int n = depth(rng);
    for (int i = 0; i < n; ++i) {
        const Ion q = qubit(rng) == 1 ? Ion::One : Ion::Two;
        switch (kind(rng)) {
            case 0: case 1: c.ops.push_back(GateOp::rx(angle(rng), q)); break;
            case 2: case 3: c.ops.push_back(GateOp::ry(angle(rng), q)); break;
            case 4: c.ops.push_back(GateOp::rz(angle(rng), q)); break;
            case 5: case 6: c.ops.push_back(GateOp::rphi(angle(rng), angle(rng), q)); break;
            case 7: case 8: c.ops.push_back(GateOp::ms()); break;
            default: c.ops.push_back(GateOp::barrier()); break;
        }
    }
    return c;
}

/// Required configuration per op, dropping transports.
inline oracle::Schedule schedule_of(const ionreg::NativeProgram &p) {
    using namespace ionreg;
    oracle::Schedule s;
    for (const auto &op : p.ops) {
        switch (op.kind) {
            case NativeKind::SQPulse: s.push_back(op.ion == Ion::One ? 1 : 2); break;
            case NativeKind::MSPulse: s.push_back(3); break;
            case NativeKind::Barrier: s.push_back(0); break;
            case NativeKind::Transport: break;
        }
    }
    return s;
}

/// Largest number of single-qubit pulses between consecutive MS pulses or
/// barriers.
inline int largest_block(const oracle::Schedule &s) {
    int best = 0, run = 0;
    for (int need : s) {
        if (need == 1 || need == 2) best = std::max(best, ++run);
        else run = 0;
    }
    return best;
}

}  // namespace testing_helpers
