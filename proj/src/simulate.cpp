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

#include "ionreg/simulate.hpp"

#include "ionreg/errors.hpp"

namespace ionreg {

TwoQubitState evolve(const NativeProgram &program, const NoiseConfig &noise, const PulseTiming &timing) {
    noise.validate();
    const bool needs_density = (noise.p_dep > 0.0 && program.count(NativeKind::MSPulse) > 0) ||
                               (noise.p_transport_dephase > 0.0 && program.transport_count() > 0);
    TwoQubitState state = TwoQubitState::basis(Basis::UpUp);
    if (needs_density) state = state.to_mixed();
    for (const auto &op : program.ops) {
        switch (op.kind) {
            case NativeKind::SQPulse: {
                if (op.theta == 0.0) break;
                const auto params = SQGateParams::from_angle(op.theta, op.phi_dds, timing.rabi_rate[index_of(op.ion)]);
                state = apply_unchecked(state, noisy_sq_pulse(op.ion, params, noise));
                break;
            }
            case NativeKind::MSPulse:
                state = noisy_ms(state, noise);
                break;
            case NativeKind::Transport:
                state = dephase_both(state, noise.p_transport_dephase);
                break;
            case NativeKind::Barrier: break;
        }
    }
    return state;
}

BrightProbs simulate_exact(const NativeProgram &program, const NoiseConfig &noise, const PulseTiming &timing) {
    return exact_bright_probs(evolve(program, noise, timing), noise);
}

BrightHistogram simulate_sampled(const NativeProgram &program, const NoiseConfig &noise, std::uint64_t shots, Rng &rng,
                                 const PulseTiming &timing) {
    if (shots == 0) {
        noise.validate();
        return {};
    }
    return apply_spam_and_detect(evolve(program, noise, timing), noise, shots, rng);
}

SimOutcome simulate(const NativeProgram &program, const NoiseConfig &noise, SimMode mode, std::uint64_t shots,
                    Rng &rng, const PulseTiming &timing) {
    if (mode == SimMode::Exact) return simulate_exact(program, noise, timing);
    return simulate_sampled(program, noise, shots, rng, timing);
}

}  // namespace ionreg
