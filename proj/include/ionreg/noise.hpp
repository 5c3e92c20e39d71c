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
#include <string>
#include <vector>

#include "json.hpp"

#include "ionreg/gates.hpp"
#include "ionreg/quantum.hpp"
#include "ionreg/rng.hpp"

namespace ionreg {

/// Imperfections of the register. Angular quantities in rad/s or rad.
struct NoiseConfig {
    /// ac-Zeeman shift [k-1][m-1] seen by ion m while configuration k
    /// addresses ion k.
    std::array<std::array<double, 2>, 2> zeeman_shift{};
    double omega_na = 0.0;             // residual Rabi rate on the hidden ion
    double eps1 = 0.0;                 // SPAM flip probability, ion 1
    double eps2 = 0.0;                 // SPAM flip probability, ion 2
    double p_dep = 0.0;                // depolarizing probability per MS gate
    double phi_offset = 0.0;           // single-qubit frame offset
    double p_transport_dephase = 0.0;  // per-ion z-flip probability per transport
    std::uint64_t seed = 0;

    double shift(Ion addressed, Ion ion) const { return zeeman_shift[index_of(addressed)][index_of(ion)]; }
    double spam(Ion ion) const { return ion == Ion::One ? eps1 : eps2; }
    /// Two-ion-bright probability of an untouched |uu>, (1 - eps1)(1 - eps2).
    double baseline_p0() const { return (1.0 - eps1) * (1.0 - eps2); }

    /// Every violated invariant, empty when valid.
    std::vector<std::string> violations() const;
    void validate() const;
};

nlohmann::json to_json(const NoiseConfig &noise);
/// Parses a NoiseConfig object. Missing fields keep their zero default;
/// type errors, unknown fields and range violations are appended to
/// `violations`, each prefixed with `path`.
NoiseConfig noise_from_json(const nlohmann::json &j, const std::string &path, std::vector<std::string> &violations);
/// Throwing variant of noise_from_json().
NoiseConfig noise_from_json(const nlohmann::json &j);

struct BrightProbs {
    double two = 0.0;
    double one = 0.0;
    double zero = 0.0;
};

struct BrightHistogram {
    std::uint64_t shots = 0;
    std::uint64_t n0 = 0;
    std::uint64_t n1 = 0;
    std::uint64_t n2 = 0;

    double frac_two() const { return shots ? static_cast<double>(n2) / static_cast<double>(shots) : 0.0; }
    double frac_one() const { return shots ? static_cast<double>(n1) / static_cast<double>(shots) : 0.0; }
    double frac_zero() const { return shots ? static_cast<double>(n0) / static_cast<double>(shots) : 0.0; }
};

/// Single-qubit pulse on `addressed` including the ac-Zeeman shifts of the
/// addressing configuration, the residual drive on the hidden ion and the
/// frame offset. Reduces to embed_single(r_phi(theta, phi)) without noise.
Mat4 noisy_sq_pulse(Ion addressed, const SQGateParams &params, const NoiseConfig &noise);

/// rho -> (1 - p) rho + p I/4.
TwoQubitState depolarize(const TwoQubitState &state, double p);
/// Independent z-flips with probability p on each ion.
TwoQubitState dephase_both(const TwoQubitState &state, double p);

/// Ideal MS gate followed by two-qubit depolarizing noise.
TwoQubitState noisy_ms(const TwoQubitState &state, const NoiseConfig &noise, const MSGateParams &params = {});

BrightProbs exact_bright_probs(const TwoQubitState &state, const NoiseConfig &noise);
/// Probability that `ion` alone is registered bright.
double exact_single_bright_prob(const TwoQubitState &state, const NoiseConfig &noise, Ion ion);

/// Per-shot projective measurement followed by independent per-ion
/// detection flips, binned by the number of bright ions.
BrightHistogram apply_spam_and_detect(const TwoQubitState &state, const NoiseConfig &noise, std::uint64_t shots,
                                      Rng &rng);

/// Expected survival after n random pi pulses with per-gate cross-talk c.
double crosstalk_fidelity_model(double n, double c, double p0);

}  // namespace ionreg
