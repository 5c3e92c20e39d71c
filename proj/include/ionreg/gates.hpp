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
#include <numbers>
#include <span>

#include "ionreg/quantum.hpp"

namespace ionreg {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kHbar = 1.054571817e-34;  // J s

/// An equatorial-axis rotation R_phi(theta): rotation angle and azimuth of the
/// axis, both in rad.
struct Rotation {
    double theta = 0.0;
    double phi = 0.0;
};

/// A single-qubit drive pulse. The pulse area follows from the Rabi rate and
/// duration, |theta| = rabi_rate * duration. A negative theta is realized as
/// the same area about the axis phi + pi.
struct SQGateParams {
    double theta = 0.0;
    double phi = 0.0;
    double rabi_rate = 1.0;  // rad/s
    double duration = 0.0;   // s

    static SQGateParams from_angle(double theta, double phi, double rabi_rate);

    /// Axis azimuth actually driven, with the sign of theta folded in.
    double drive_phase() const { return theta < 0.0 ? phi + kPi : phi; }
    void validate() const;
};

struct MSGateParams {
    double duration = 1150e-6;              // s, schedule metadata
    double detuning = kTwoPi * 1.82e3;      // rad/s, schedule metadata
    double phase_red = 0.0;                 // rad
    double phase_blue = 0.0;                // rad

    double mean_phase() const { return 0.5 * (phase_red + phase_blue); }
};

struct MicromotionParams {
    double gradient = 0.0;              // B', T/m
    double micromotion_amplitude = 0.0; // |r_MM|, m
    double matrix_element = 0.0;        // mu, J/T

    void validate() const;
};

/// exp(-i theta/2 (cos(phi) sigma_x + sin(phi) sigma_y)).
Mat2 r_phi(double theta, double phi);
inline Mat2 r_x(double theta) { return r_phi(theta, 0.0); }
inline Mat2 r_y(double theta) { return r_phi(theta, kPi / 2.0); }
/// exp(-i theta/2 sigma_z).
Mat2 r_z(double theta);

/// Propagator of a detuned drive, exp(-i t/2 (Omega cos(phi) sx + Omega sin(phi) sy + Delta sz)).
Mat2 generalized_rabi(double rabi_rate, double detuning, double phi, double t);

/// Probability of leaving |up> under generalized_rabi().
double detuned_flip_probability(double rabi_rate, double detuning, double t);

/// Stroboscopic Molmer-Sorensen propagator for the given sideband phases.
///
/// The generator sums Phi_jk s^(j) s^(k) over both ions, with
/// s = (sx cos(pbar) - sy sin(pbar)) / 2 and Phi_jj = +pi/2, Phi_{j!=k} = -pi/2.
/// The diagonal terms contribute 2 * (pi/2) * (1/4) I = (pi/4) I because
/// s^2 = I/4; the two cross terms contribute -(pi/4) S (x) S with
/// S = sx cos(pbar) - sy sin(pbar). The gate is therefore
/// exp(-i pi/4) exp(+i pi/4 S (x) S), which at pbar = 0 is exactly R_xx(-pi/2).
/// Since (S (x) S)^2 = I the exponential is evaluated in closed form.
Mat4 ms_gate(const MSGateParams &params = {});

/// Three rotations, in application order, whose product is R_z(theta) up to a
/// global phase: R_y(-pi/2), then R_x(-theta), then R_y(pi/2).
std::array<Rotation, 3> rz_sequence(double theta);

/// Ordered product of single-qubit rotations (first element applied first).
Mat2 compose(std::span<const Rotation> rotations);

/// Rabi rate of a micromotion-sideband transition, rad/s.
double micromotion_rabi_rate(const MicromotionParams &params);

}  // namespace ionreg
