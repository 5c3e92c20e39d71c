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

#include "ionreg/transpiler.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <optional>

#include "ionreg/errors.hpp"

namespace ionreg {

namespace {

// Configuration tracking with an explicit "not yet positioned" state.
enum class State : int { Unset = 0, Ion1 = 1, Ion2 = 2, Gate = 3 };

State state_of(Configuration c) {
    switch (c) {
        case Configuration::Ion1: return State::Ion1;
        case Configuration::Ion2: return State::Ion2;
        case Configuration::Gate: return State::Gate;
    }
    return State::Unset;
}

State state_of(Ion ion) { return ion == Ion::One ? State::Ion1 : State::Ion2; }

// Program split into reorderable blocks of single-qubit pulses separated by
// fixed operations (MS or barrier).
struct Unit {
    bool fixed = false;
    NativeOp op;                 // when fixed
    std::vector<NativeOp> pulses;  // when not fixed
};

std::vector<Unit> split_units(const NativeProgram &program) {
    std::vector<Unit> units;
    units.push_back({});
    for (const auto &op : program.ops) {
        switch (op.kind) {
            case NativeKind::Transport: break;
            case NativeKind::SQPulse: units.back().pulses.push_back(op); break;
            case NativeKind::MSPulse:
            case NativeKind::Barrier:
                units.push_back({true, op, {}});
                units.push_back({});
                break;
        }
    }
    return units;
}

std::vector<NativeOp> pulses_on(const std::vector<NativeOp> &pulses, Ion ion) {
    std::vector<NativeOp> out;
    for (const auto &p : pulses)
        if (p.ion == ion) out.push_back(p);
    return out;
}

}  // namespace

std::size_t NativeProgram::count(NativeKind kind) const {
    return static_cast<std::size_t>(std::count_if(ops.begin(), ops.end(), [kind](const NativeOp &op) { return op.kind == kind; }));
}

bool transports_well_formed(const NativeProgram &program) {
    State current = State::Unset;
    for (const auto &op : program.ops) {
        switch (op.kind) {
            case NativeKind::Transport: current = state_of(op.target); break;
            case NativeKind::SQPulse:
                if (current != state_of(op.ion)) return false;
                break;
            case NativeKind::MSPulse:
                if (current != State::Gate) return false;
                break;
            case NativeKind::Barrier: break;
        }
    }
    return true;
}

NativeProgram insert_transports(const NativeProgram &program) {
    NativeProgram out;
    State current = State::Unset;
    auto ensure = [&](State needed, Configuration target) {
        if (current != needed) {
            out.ops.push_back(NativeOp::transport(target));
            current = needed;
        }
    };
    for (const auto &op : program.ops) {
        switch (op.kind) {
            case NativeKind::Transport: continue;
            case NativeKind::SQPulse: ensure(state_of(op.ion), configuration_for(op.ion)); break;
            case NativeKind::MSPulse: ensure(State::Gate, Configuration::Gate); break;
            case NativeKind::Barrier: break;
        }
        out.ops.push_back(op);
    }
    return out;
}

NativeProgram lower(const Circuit &circuit, double phi_offset) {
    validate(circuit);
    NativeProgram bare;
    auto pulse = [&](Ion q, double theta, double phi) { bare.ops.push_back(NativeOp::sq(q, theta, phi - phi_offset)); };
    for (const auto &op : circuit.ops) {
        switch (op.kind) {
            case GateKind::Rx: pulse(op.qubit, op.theta, 0.0); break;
            case GateKind::Ry: pulse(op.qubit, op.theta, kPi / 2.0); break;
            case GateKind::Rphi: pulse(op.qubit, op.theta, op.phi); break;
            case GateKind::Rz:
                for (const auto &r : rz_sequence(op.theta)) pulse(op.qubit, r.theta, r.phi);
                break;
            case GateKind::MS: bare.ops.push_back(NativeOp::ms()); break;
            case GateKind::Barrier: bare.ops.push_back(NativeOp::barrier()); break;
            default: fail(ErrorKind::Validation, "lower: unknown gate kind");
        }
    }
    return insert_transports(bare);
}

NativeProgram minimize_transports(const NativeProgram &program) {
    const std::vector<Unit> units = split_units(program);
    constexpr int kStates = 4;
    constexpr int kInf = std::numeric_limits<int>::max() / 4;

    // Cost is (transports, blocks reordered against their input order),
    // compared lexicographically so that ties keep the input order.
    struct Cost {
        int transports = kInf;
        int reorders = 0;
        bool operator<(const Cost &o) const {
            return transports != o.transports ? transports < o.transports : reorders < o.reorders;
        }
    };
    struct Back {
        int prev_state = 0;
        bool first_is_ion1 = true;
    };

    std::array<Cost, kStates> best{};
    best[static_cast<int>(State::Unset)] = {0, 0};
    std::vector<std::array<Back, kStates>> back(units.size());

    for (std::size_t u = 0; u < units.size(); ++u) {
        std::array<Cost, kStates> next{};
        auto relax = [&](int to, Cost c, Back b) {
            if (c < next[to]) {
                next[to] = c;
                back[u][to] = b;
            }
        };
        const Unit &unit = units[u];
        for (int s = 0; s < kStates; ++s) {
            if (best[s].transports >= kInf) continue;
            const Cost c0 = best[s];
            if (unit.fixed) {
                if (unit.op.kind == NativeKind::MSPulse) {
                    const int t = s == static_cast<int>(State::Gate) ? 0 : 1;
                    relax(static_cast<int>(State::Gate), {c0.transports + t, c0.reorders}, {s, true});
                } else {
                    relax(s, c0, {s, true});
                }
                continue;
            }
            const bool has1 = std::any_of(unit.pulses.begin(), unit.pulses.end(), [](const NativeOp &p) { return p.ion == Ion::One; });
            const bool has2 = std::any_of(unit.pulses.begin(), unit.pulses.end(), [](const NativeOp &p) { return p.ion == Ion::Two; });
            if (!has1 && !has2) {
                relax(s, c0, {s, true});
                continue;
            }
            if (has1 != has2) {
                const State only = has1 ? State::Ion1 : State::Ion2;
                const int t = s == static_cast<int>(only) ? 0 : 1;
                relax(static_cast<int>(only), {c0.transports + t, c0.reorders}, {s, has1});
                continue;
            }
            const bool input_ion1_first = unit.pulses.front().ion == Ion::One;
            for (bool ion1_first : {true, false}) {
                const State first = ion1_first ? State::Ion1 : State::Ion2;
                const State last = ion1_first ? State::Ion2 : State::Ion1;
                const int t = (s == static_cast<int>(first) ? 0 : 1) + 1;
                const int r = ion1_first == input_ion1_first ? 0 : 1;
                relax(static_cast<int>(last), {c0.transports + t, c0.reorders + r}, {s, ion1_first});
            }
        }
        best = next;
    }

    int state = static_cast<int>(std::min_element(best.begin(), best.end()) - best.begin());
    std::vector<bool> ion1_first(units.size(), true);
    for (std::size_t u = units.size(); u-- > 0;) {
        ion1_first[u] = back[u][state].first_is_ion1;
        state = back[u][state].prev_state;
    }

    NativeProgram reordered;
    for (std::size_t u = 0; u < units.size(); ++u) {
        const Unit &unit = units[u];
        if (unit.fixed) {
            reordered.ops.push_back(unit.op);
            continue;
        }
        const Ion first = ion1_first[u] ? Ion::One : Ion::Two;
        for (Ion ion : {first, other(first)})
            for (const auto &p : pulses_on(unit.pulses, ion)) reordered.ops.push_back(p);
    }
    return insert_transports(reordered);
}

Mat4 ideal_unitary(const NativeProgram &program, double phi_offset) {
    Mat4 u = Mat4::Identity();
    const Mat4 ms = ms_gate();
    for (const auto &op : program.ops) {
        if (op.kind == NativeKind::SQPulse)
            u = embed_single(r_phi(op.theta, op.phi_dds + phi_offset), op.ion) * u;
        else if (op.kind == NativeKind::MSPulse)
            u = ms * u;
    }
    return u;
}

double schedule_duration(const NativeProgram &program, const std::array<double, 2> &rabi_rate,
                         const MSGateParams &ms) {
    double total = 0.0;
    for (const auto &op : program.ops) {
        switch (op.kind) {
            case NativeKind::SQPulse: total += std::abs(op.theta) / rabi_rate[index_of(op.ion)]; break;
            case NativeKind::MSPulse: total += ms.duration; break;
            case NativeKind::Transport: total += kTransportDuration; break;
            case NativeKind::Barrier: break;
        }
    }
    return total;
}

nlohmann::json to_json(const NativeProgram &program) {
    nlohmann::json ops = nlohmann::json::array();
    for (const auto &op : program.ops) {
        nlohmann::json j;
        switch (op.kind) {
            case NativeKind::SQPulse:
                j["op"] = "sq";
                j["ion"] = static_cast<int>(op.ion);
                j["theta_rad"] = op.theta;
                j["phi_dds_rad"] = op.phi_dds;
                break;
            case NativeKind::MSPulse: j["op"] = "ms"; break;
            case NativeKind::Transport:
                j["op"] = "transport";
                j["target"] = op.target == Configuration::Ion1 ? "1" : op.target == Configuration::Ion2 ? "2" : "gate";
                break;
            case NativeKind::Barrier: j["op"] = "barrier"; break;
        }
        ops.push_back(std::move(j));
    }
    return {{"ops", ops}, {"transports", program.transport_count()}};
}

}  // namespace ionreg
