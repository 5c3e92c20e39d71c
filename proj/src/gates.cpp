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

#include "ionreg/gates.hpp"

#include <cmath>
#include <string>

#include "ionreg/errors.hpp"

namespace ionreg {

namespace {
constexpr Complex kI{0.0, 1.0};
}

SQGateParams SQGateParams::from_angle(double theta, double phi, double rabi_rate) {
    if (!(rabi_rate > 0.0)) fail(ErrorKind::Validation, "single-qubit Rabi rate must be positive");
    return {theta, phi, rabi_rate, std::abs(theta) / rabi_rate};
}

void SQGateParams::validate() const {
    if (!(rabi_rate > 0.0)) fail(ErrorKind::Validation, "single-qubit Rabi rate must be positive");
    if (!(duration >= 0.0)) fail(ErrorKind::Validation, "pulse duration must be nonnegative");
    if (std::abs(std::abs(theta) - rabi_rate * duration) > 1e-9 * std::max(1.0, std::abs(theta)))
        fail(ErrorKind::Validation, "pulse area does not match rabi_rate * duration");
}

void MicromotionParams::validate() const {
    if (gradient < 0.0 || micromotion_amplitude < 0.0 || matrix_element < 0.0)
        fail(ErrorKind::Validation, "micromotion parameters must be nonnegative");
}

Mat2 r_phi(double theta, double phi) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    Mat2 m;
    m << c, -kI * s * std::exp(-kI * phi), -kI * s * std::exp(kI * phi), c;
    return m;
}

Mat2 r_z(double theta) {
    Mat2 m = Mat2::Zero();
    m(0, 0) = std::exp(-kI * (theta / 2.0));
    m(1, 1) = std::exp(kI * (theta / 2.0));
    return m;
}

Mat2 generalized_rabi(double rabi_rate, double detuning, double phi, double t) {
    const double w = std::hypot(rabi_rate, detuning);
    if (w == 0.0 || t == 0.0) return Mat2::Identity();
    const double c = std::cos(w * t / 2.0);
    const double s = std::sin(w * t / 2.0);
    const double nx = rabi_rate * std::cos(phi) / w;
    const double ny = rabi_rate * std::sin(phi) / w;
    const double nz = detuning / w;
    Mat2 m;
    m << Complex(c, -s * nz), -kI * s * Complex(nx, -ny),
         -kI * s * Complex(nx, ny), Complex(c, s * nz);
    return m;
}

double detuned_flip_probability(double rabi_rate, double detuning, double t) {
    const double w2 = rabi_rate * rabi_rate + detuning * detuning;
    if (w2 == 0.0) return 0.0;
    const double s = std::sin(std::sqrt(w2) * t / 2.0);
    return rabi_rate * rabi_rate / w2 * s * s;
}

Mat4 ms_gate(const MSGateParams &params) {
    const double pbar = params.mean_phase();
    const Mat2 axis = pauli::x() * std::cos(pbar) - pauli::y() * std::sin(pbar);
    const Mat4 xx = kron(axis, axis);
    const double h = std::sqrt(0.5);
    const Mat4 inner = h * Mat4::Identity() + kI * h * xx;
    return std::exp(-kI * (kPi / 4.0)) * inner;
}

std::array<Rotation, 3> rz_sequence(double theta) {
    return {Rotation{-kPi / 2.0, kPi / 2.0}, Rotation{-theta, 0.0}, Rotation{kPi / 2.0, kPi / 2.0}};
}

Mat2 compose(std::span<const Rotation> rotations) {
    Mat2 u = Mat2::Identity();
    for (const auto &r : rotations) u = r_phi(r.theta, r.phi) * u;
    return u;
}

double micromotion_rabi_rate(const MicromotionParams &params) {
    params.validate();
    return 0.5 * (params.gradient / std::sqrt(2.0)) * params.micromotion_amplitude * params.matrix_element /
           (2.0 * kHbar);
}

}  // namespace ionreg
