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

#include "ionreg/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "ionreg/errors.hpp"
#include "ionreg/gates.hpp"

namespace ionreg {

Circuit generate_crosstalk_sequence(int n, Rng &rng, Ion addressed) {
    if (n < 0 || n % 2 != 0) fail(ErrorKind::Validation, "cross-talk sequence length must be even and nonnegative");
    std::uniform_real_distribution<double> axis(0.0, kTwoPi);
    Circuit c;
    for (int k = 0; k < n; ++k) c.ops.push_back(GateOp::rphi(kPi, axis(rng), addressed));
    return c;
}

double spectator_rate_for_crosstalk(double c, double addressed_rabi_rate) {
    // A tilt by eps about a random equatorial axis scales <z> by cos(eps) on
    // average, and the model decays <z> by exp(-2c) per pulse.
    const double tilt = std::acos(std::exp(-2.0 * c));
    return tilt * addressed_rabi_rate / kPi;
}

std::vector<CrosstalkPoint> run_crosstalk_experiment(std::span<const int> n_values, std::uint64_t shots,
                                                     const NoiseConfig &noise, Rng &rng,
                                                     const CrosstalkOptions &options) {
    noise.validate();
    if (options.sequences_per_point < 1) fail(ErrorKind::Validation, "sequences_per_point must be at least 1");
    for (int n : n_values)
        if (n < 0 || n % 2 != 0) fail(ErrorKind::Validation, "cross-talk sequence lengths must be even");

    std::vector<CrosstalkPoint> out;
    for (int n : n_values) {
        double exact_sum = 0.0;
        std::uint64_t hits = 0, total = 0;
        std::vector<double> per_sequence;
        for (int s = 0; s < options.sequences_per_point; ++s) {
            const Circuit seq = generate_crosstalk_sequence(n, rng, options.addressed);
            const TwoQubitState final_state = evolve(lower(seq, noise.phi_offset), noise, options.timing);
            const double p = options.mode == CrosstalkMode::TwoIon
                                 ? exact_bright_probs(final_state, noise).two
                                 : exact_single_bright_prob(final_state, noise, options.addressed);
            if (options.sim == SimMode::Exact) {
                exact_sum += p;
                continue;
            }
            std::uint64_t k = 0;
            if (options.mode == CrosstalkMode::TwoIon) {
                k = apply_spam_and_detect(final_state, noise, shots, rng).n2;
            } else {
                std::binomial_distribution<std::uint64_t> draw(shots, std::clamp(p, 0.0, 1.0));
                k = draw(rng);
            }
            if (shots) per_sequence.push_back(static_cast<double>(k) / static_cast<double>(shots));
            hits += k;
            total += shots;
        }
        CrosstalkPoint pt;
        pt.n = n;
        if (options.sim == SimMode::Exact) {
            pt.f = exact_sum / options.sequences_per_point;
            total = shots * static_cast<std::uint64_t>(options.sequences_per_point);
            pt.sigma = total ? std::sqrt(pt.f * (1.0 - pt.f) / static_cast<double>(total)) : 0.0;
        } else {
            const double nt = static_cast<double>(total);
            pt.f = total ? static_cast<double>(hits) / nt : 0.0;
            const double smooth = (static_cast<double>(hits) + 1.0) / (nt + 2.0);
            pt.sigma = total ? std::sqrt(smooth * (1.0 - smooth) / nt) : 0.0;
            // Coherent spectator errors make sequences differ far more than
            // shot noise does, so use the scatter between sequences when larger.
            const auto s = per_sequence.size();
            if (s > 1) {
                double var = 0.0;
                for (double v : per_sequence) var += (v - pt.f) * (v - pt.f);
                pt.sigma = std::max(pt.sigma, std::sqrt(var / static_cast<double>(s - 1) / static_cast<double>(s)));
            }
        }
        out.push_back(pt);
    }
    return out;
}

double parity(const TwoQubitState &state) {
    const Populations p = populations(state);
    return p.up_up + p.down_down - (p.up_down + p.down_up);
}

double parity(const BrightProbs &probs) { return probs.two + probs.zero - probs.one; }

NativeProgram parity_scan_program(double phi_dds) {
    NativeProgram p;
    p.ops = {NativeOp::transport(Configuration::Gate), NativeOp::ms(),
             NativeOp::transport(Configuration::Ion2), NativeOp::sq(Ion::Two, kPi / 2.0, phi_dds),
             NativeOp::transport(Configuration::Ion1), NativeOp::sq(Ion::One, kPi / 2.0, phi_dds)};
    return p;
}

ParityScan parity_scan(std::span<const double> phi_grid, const NoiseConfig &noise, SimMode mode, std::uint64_t shots,
                       Rng &rng, const PulseTiming &timing) {
    ParityScan scan;
    for (double phi : phi_grid) {
        const NativeProgram program = parity_scan_program(phi);
        double value = 0.0, sigma = 0.0;
        if (mode == SimMode::Exact) {
            value = parity(simulate_exact(program, noise, timing));
        } else {
            if (shots == 0) fail(ErrorKind::Validation, "sampled parity scan needs shots > 0");
            const BrightHistogram h = simulate_sampled(program, noise, shots, rng, timing);
            const double s = static_cast<double>(h.shots);
            value = (static_cast<double>(h.n2) + static_cast<double>(h.n0) - static_cast<double>(h.n1)) / s;
            sigma = std::sqrt(std::max(1.0 - value * value, 1.0 / s) / s);
        }
        scan.phi_dds.push_back(phi);
        scan.parity.push_back(value);
        scan.sigma.push_back(sigma);
    }
    return scan;
}

PhaseCalibration calibrate_phase_offset(std::span<const double> phi_grid, const NoiseConfig &noise, SimMode mode,
                                        std::uint64_t shots, Rng &rng, const PulseTiming &timing) {
    if (phi_grid.size() < 4) fail(ErrorKind::Validation, "phase grid needs at least 4 points");
    const auto [lo, hi] = std::minmax_element(phi_grid.begin(), phi_grid.end());
    if (*hi - *lo < kPi - 1e-12) fail(ErrorKind::Validation, "phase grid must span at least one parity period (pi)");
    PhaseCalibration cal;
    cal.scan = parity_scan(phi_grid, noise, mode, shots, rng, timing);
    const std::span<const double> sigma =
        mode == SimMode::Sampled ? std::span<const double>(cal.scan.sigma) : std::span<const double>();
    const ZeroCrossing zc = find_zero_crossing(cal.scan.phi_dds, cal.scan.parity, SlopeSign::Negative, sigma, 0.0);
    cal.crossing = zc.x0;
    cal.phi_offset = -zc.x0;
    cal.sigma = zc.sigma;
    return cal;
}

RabiSeries rabi_flop_experiment(std::span<const double> t_grid, double rabi_rate, const NoiseConfig &noise,
                                SimMode mode, std::uint64_t shots, Rng &rng, Ion addressed) {
    if (!(rabi_rate > 0.0)) fail(ErrorKind::Validation, "Rabi rate must be positive");
    PulseTiming timing;
    timing.rabi_rate[index_of(addressed)] = rabi_rate;
    RabiSeries out;
    for (double t : t_grid) {
        if (t < 0.0) fail(ErrorKind::Validation, "pulse times must be nonnegative");
        NativeProgram p;
        p.ops = {NativeOp::transport(configuration_for(addressed)), NativeOp::sq(addressed, rabi_rate * t, 0.0)};
        out.t.push_back(t);
        if (mode == SimMode::Exact) {
            const BrightProbs b = simulate_exact(p, noise, timing);
            out.p2.push_back(b.two);
            out.p1.push_back(b.one);
            out.p0.push_back(b.zero);
        } else {
            const BrightHistogram h = simulate_sampled(p, noise, shots, rng, timing);
            out.p2.push_back(h.frac_two());
            out.p1.push_back(h.frac_one());
            out.p0.push_back(h.frac_zero());
        }
    }
    return out;
}

std::vector<std::size_t> local_maxima(std::span<const double> y) {
    std::vector<std::size_t> out;
    for (std::size_t i = 1; i + 1 < y.size(); ++i)
        if (y[i] > y[i - 1] && y[i] >= y[i + 1]) out.push_back(i);
    return out;
}

std::vector<double> linspace(double start, double stop, int points) {
    std::vector<double> out;
    if (points <= 0) return out;
    if (points == 1) return {start};
    for (int i = 0; i < points; ++i) out.push_back(start + (stop - start) * i / (points - 1));
    return out;
}

}  // namespace ionreg
