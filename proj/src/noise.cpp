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

#include "ionreg/noise.hpp"

#include <cmath>
#include <sstream>

#include "ionreg/errors.hpp"
#include "ionreg/json_fields.hpp"

namespace ionreg {

namespace {

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

const char *kShiftFields[2][2] = {{"delta_1_1_rad_per_s", "delta_1_2_rad_per_s"},
                                  {"delta_2_1_rad_per_s", "delta_2_2_rad_per_s"}};

}  // namespace

std::vector<std::string> NoiseConfig::violations() const {
    std::vector<std::string> out;
    for (int k = 0; k < 2; ++k)
        for (int m = 0; m < 2; ++m)
            if (!std::isfinite(zeeman_shift[k][m])) out.push_back(std::string(kShiftFields[k][m]) + ": must be finite");
    if (!(omega_na >= 0.0) || !std::isfinite(omega_na)) out.push_back("omega_na_rad_per_s: must be >= 0");
    if (!is_probability(eps1)) out.push_back("eps1: must lie in [0, 1]");
    if (!is_probability(eps2)) out.push_back("eps2: must lie in [0, 1]");
    if (!is_probability(p_dep)) out.push_back("p_dep: must lie in [0, 1]");
    if (!is_probability(p_transport_dephase)) out.push_back("p_transport_dephase: must lie in [0, 1]");
    if (!std::isfinite(phi_offset)) out.push_back("phi_offset_rad: must be finite");
    return out;
}

void NoiseConfig::validate() const {
    const auto v = violations();
    if (v.empty()) return;
    std::ostringstream msg;
    msg << "invalid noise configuration:";
    for (const auto &s : v) msg << ' ' << s << ';';
    fail(ErrorKind::Validation, msg.str());
}

nlohmann::json to_json(const NoiseConfig &noise) {
    nlohmann::json j;
    for (int k = 0; k < 2; ++k)
        for (int m = 0; m < 2; ++m) j[kShiftFields[k][m]] = noise.zeeman_shift[k][m];
    j["omega_na_rad_per_s"] = noise.omega_na;
    j["eps1"] = noise.eps1;
    j["eps2"] = noise.eps2;
    j["p_dep"] = noise.p_dep;
    j["phi_offset_rad"] = noise.phi_offset;
    j["p_transport_dephase"] = noise.p_transport_dephase;
    j["seed"] = noise.seed;
    return j;
}

NoiseConfig noise_from_json(const nlohmann::json &j, const std::string &path, std::vector<std::string> &violations) {
    NoiseConfig noise;
    FieldReader r(j, path, violations);
    if (!r.ok()) return noise;
    for (int k = 0; k < 2; ++k)
        for (int m = 0; m < 2; ++m) noise.zeeman_shift[k][m] = r.number(kShiftFields[k][m], 0.0);
    noise.omega_na = r.number("omega_na_rad_per_s", 0.0);
    noise.eps1 = r.number("eps1", 0.0);
    noise.eps2 = r.number("eps2", 0.0);
    noise.p_dep = r.number("p_dep", 0.0);
    noise.phi_offset = r.number("phi_offset_rad", 0.0);
    noise.p_transport_dephase = r.number("p_transport_dephase", 0.0);
    noise.seed = r.unsigned_integer("seed", 0);
    r.reject_unknown();
    for (const auto &v : noise.violations()) violations.push_back(path + "/" + v);
    return noise;
}

NoiseConfig noise_from_json(const nlohmann::json &j) {
    std::vector<std::string> violations;
    NoiseConfig noise = noise_from_json(j, "", violations);
    if (!violations.empty()) {
        std::ostringstream msg;
        msg << "invalid noise configuration:";
        for (const auto &s : violations) msg << ' ' << s << ';';
        fail(ErrorKind::Config, msg.str());
    }
    return noise;
}

Mat4 noisy_sq_pulse(Ion addressed, const SQGateParams &params, const NoiseConfig &noise) {
    const Ion hidden = other(addressed);
    const double phase = params.drive_phase() + noise.phi_offset;
    const double t = params.duration;
    const Mat2 target = generalized_rabi(params.rabi_rate, noise.shift(addressed, addressed), phase, t);
    const Mat2 spectator = generalized_rabi(noise.omega_na, noise.shift(addressed, hidden), phase, t);
    return addressed == Ion::One ? kron(target, spectator) : kron(spectator, target);
}

TwoQubitState depolarize(const TwoQubitState &state, double p) {
    if (p == 0.0) return state;
    const Mat4 rho = (1.0 - p) * state.density() + (p / 4.0) * Mat4::Identity();
    return TwoQubitState::mixed_unchecked(rho);
}

TwoQubitState dephase_both(const TwoQubitState &state, double p) {
    if (p == 0.0) return state;
    Mat4 rho = state.density();
    for (Ion ion : {Ion::One, Ion::Two}) {
        const Mat4 z = embed_single(pauli::z(), ion);
        rho = (1.0 - p) * rho + p * (z * rho * z);
    }
    return TwoQubitState::mixed_unchecked(rho);
}

TwoQubitState noisy_ms(const TwoQubitState &state, const NoiseConfig &noise, const MSGateParams &params) {
    return depolarize(apply_unchecked(state, ms_gate(params)), noise.p_dep);
}

BrightProbs exact_bright_probs(const TwoQubitState &state, const NoiseConfig &noise) {
    const Populations pop = populations(state);
    // Probability that each ion reads bright given its true state.
    const double b1_up = 1.0 - noise.eps1, b1_down = noise.eps1;
    const double b2_up = 1.0 - noise.eps2, b2_down = noise.eps2;
    const double pb[4][2] = {{b1_up, b2_up}, {b1_up, b2_down}, {b1_down, b2_up}, {b1_down, b2_down}};
    const double p[4] = {pop.up_up, pop.up_down, pop.down_up, pop.down_down};
    BrightProbs out;
    for (int k = 0; k < 4; ++k) {
        const double a = pb[k][0], b = pb[k][1];
        out.two += p[k] * a * b;
        out.one += p[k] * (a * (1.0 - b) + (1.0 - a) * b);
        out.zero += p[k] * (1.0 - a) * (1.0 - b);
    }
    return out;
}

double exact_single_bright_prob(const TwoQubitState &state, const NoiseConfig &noise, Ion ion) {
    const Populations pop = populations(state);
    const double up = ion == Ion::One ? pop.up_up + pop.up_down : pop.up_up + pop.down_up;
    const double eps = noise.spam(ion);
    return up * (1.0 - eps) + (1.0 - up) * eps;
}

BrightHistogram apply_spam_and_detect(const TwoQubitState &state, const NoiseConfig &noise, std::uint64_t shots,
                                      Rng &rng) {
    BrightHistogram h;
    h.shots = shots;
    if (shots == 0) return h;
    const Populations pop = populations(state);
    std::discrete_distribution<int> outcome({pop.up_up, pop.up_down, pop.down_up, pop.down_down});
    std::bernoulli_distribution flip1(noise.eps1);
    std::bernoulli_distribution flip2(noise.eps2);
    for (std::uint64_t s = 0; s < shots; ++s) {
        const int k = outcome(rng);
        bool bright1 = (k & 2) == 0;
        bool bright2 = (k & 1) == 0;
        if (flip1(rng)) bright1 = !bright1;
        if (flip2(rng)) bright2 = !bright2;
        const int n = static_cast<int>(bright1) + static_cast<int>(bright2);
        (n == 2 ? h.n2 : n == 1 ? h.n1 : h.n0) += 1;
    }
    return h;
}

double crosstalk_fidelity_model(double n, double c, double p0) {
    return 0.5 * (1.0 + (2.0 * p0 - 1.0) * std::exp(-2.0 * c * n));
}

}  // namespace ionreg
