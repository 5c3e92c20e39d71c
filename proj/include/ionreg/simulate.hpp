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

#include <array>
#include <cstdint>
#include <variant>

#include "ionreg/noise.hpp"
#include "ionreg/transpiler.hpp"

namespace ionreg {

/// Single-qubit Rabi rates per addressing configuration, rad/s. Only the
/// ratio to the ac-Zeeman shifts and the residual drive matters for the
/// simulated dynamics; the absolute values set pulse durations.
struct PulseTiming {
    std::array<double, 2> rabi_rate{kTwoPi * 11.15e3, kTwoPi * 5.49e3};
};

enum class SimMode { Exact, Sampled };

/// Runs the program on |uu> with every noise mechanism of `noise` and returns
/// the final register state. A density matrix is used only when the noise
/// contains a non-unitary channel.
TwoQubitState evolve(const NativeProgram &program, const NoiseConfig &noise, const PulseTiming &timing = {});

BrightProbs simulate_exact(const NativeProgram &program, const NoiseConfig &noise, const PulseTiming &timing = {});

BrightHistogram simulate_sampled(const NativeProgram &program, const NoiseConfig &noise, std::uint64_t shots, Rng &rng,
                                 const PulseTiming &timing = {});

using SimOutcome = std::variant<BrightProbs, BrightHistogram>;

SimOutcome simulate(const NativeProgram &program, const NoiseConfig &noise, SimMode mode, std::uint64_t shots,
                    Rng &rng, const PulseTiming &timing = {});

}  // namespace ionreg
