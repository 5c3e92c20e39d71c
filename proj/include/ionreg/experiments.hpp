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

#include <cstdint>
#include <span>
#include <vector>

#include "ionreg/circuit.hpp"
#include "ionreg/fitting.hpp"
#include "ionreg/noise.hpp"
#include "ionreg/simulate.hpp"

namespace ionreg {

// Cross-talk bounding with random-axis pi pulses.

enum class CrosstalkMode { TwoIon, SingleIon };

/// `n` pi pulses on `addressed`, each about a uniformly random equatorial
/// axis. `n` must be even so the ideal sequence returns to |uu>.
Circuit generate_crosstalk_sequence(int n, Rng &rng, Ion addressed);

struct CrosstalkOptions {
    Ion addressed = Ion::One;
    CrosstalkMode mode = CrosstalkMode::TwoIon;
    int sequences_per_point = 10;
    SimMode sim = SimMode::Sampled;
    PulseTiming timing{};
};

struct CrosstalkPoint {
    int n = 0;
    double f = 0.0;
    double sigma = 0.0;
};

/// Survival (two-ion-bright, or addressed-ion-bright in single-ion mode) per
/// sequence length, pooled over random sequences. `shots` are per sequence.
/// The binomial error uses the (k + 1) / (n + 2) estimate so it never
/// vanishes at F = 0 or 1.
std::vector<CrosstalkPoint> run_crosstalk_experiment(std::span<const int> n_values, std::uint64_t shots,
                                                     const NoiseConfig &noise, Rng &rng,
                                                     const CrosstalkOptions &options = {});

/// Residual drive on the hidden ion that produces cross-talk `c` per random
/// pi pulse: each pulse tilts the spectator by arccos(exp(-2c)).
double spectator_rate_for_crosstalk(double c, double addressed_rabi_rate);

// Parity-scan phase calibration.

/// p_uu + p_dd - p_ud - p_du.
double parity(const TwoQubitState &state);
/// Parity as seen by global fluorescence, P2 + P0 - P1.
double parity(const BrightProbs &probs);

/// MS, then R_phi(pi/2) on ion 2, then R_phi(pi/2) on ion 1, at DDS phase phi.
NativeProgram parity_scan_program(double phi_dds);

struct ParityScan {
    std::vector<double> phi_dds;
    std::vector<double> parity;
    std::vector<double> sigma;  // zero in exact mode
};

ParityScan parity_scan(std::span<const double> phi_grid, const NoiseConfig &noise, SimMode mode, std::uint64_t shots,
                       Rng &rng, const PulseTiming &timing = {});

struct PhaseCalibration {
    double phi_offset = 0.0;  // estimate of the injected offset
    double sigma = 0.0;
    double crossing = 0.0;    // phi_dds of the negative-slope zero crossing
    ParityScan scan;
};

/// Scans the parity, finds the negative-slope zero crossing closest to
/// phi_dds = 0 and returns -crossing. The parity has period pi in phi, so the
/// offset is determined modulo pi; the grid must span at least one period.
PhaseCalibration calibrate_phase_offset(std::span<const double> phi_grid, const NoiseConfig &noise, SimMode mode,
                                        std::uint64_t shots, Rng &rng, const PulseTiming &timing = {});

// Rabi flopping of one addressed ion.

struct RabiSeries {
    std::vector<double> t;
    std::vector<double> p2;
    std::vector<double> p1;
    std::vector<double> p0;
};

RabiSeries rabi_flop_experiment(std::span<const double> t_grid, double rabi_rate, const NoiseConfig &noise,
                                SimMode mode, std::uint64_t shots, Rng &rng, Ion addressed = Ion::One);

/// Indices of strict interior local maxima of a series.
std::vector<std::size_t> local_maxima(std::span<const double> y);

/// Evenly spaced grid of `points` values from `start` to `stop` inclusive.
std::vector<double> linspace(double start, double stop, int points);

}  // namespace ionreg
