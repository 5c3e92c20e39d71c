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

#include "ionreg/quantum.hpp"

#include <cmath>
#include <string>

#include "ionreg/errors.hpp"

namespace ionreg {

namespace {
constexpr Complex kI{0.0, 1.0};
}

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Validation: return "validation";
        case ErrorKind::Parse: return "parse";
        case ErrorKind::DegenerateFit: return "degenerate_fit";
        case ErrorKind::NotSeparable: return "not_separable";
        case ErrorKind::NoCrossing: return "no_crossing";
        case ErrorKind::Config: return "config";
    }
    return "unknown";
}

Ion ion_from_int(int q) {
    if (q == 1) return Ion::One;
    if (q == 2) return Ion::Two;
    fail(ErrorKind::Validation, "qubit index must be 1 or 2, got " + std::to_string(q));
}

namespace pauli {
Mat2 identity() { return Mat2::Identity(); }
Mat2 x() {
    Mat2 m;
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}
Mat2 y() {
    Mat2 m;
    m << 0.0, -kI, kI, 0.0;
    return m;
}
Mat2 z() {
    Mat2 m;
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}
}  // namespace pauli

bool is_unitary(const Eigen::MatrixXcd &u, double tol) {
    if (u.rows() != u.cols()) return false;
    const Eigen::MatrixXcd d = u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols());
    return d.cwiseAbs().maxCoeff() <= tol;
}

bool is_hermitian(const Eigen::MatrixXcd &h, double tol) {
    if (h.rows() != h.cols()) return false;
    return (h - h.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

Mat4 kron(const Mat2 &a, const Mat2 &b) {
    Mat4 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

Mat4 embed_single(const Mat2 &u, Ion ion) {
    if (!is_unitary(u)) fail(ErrorKind::Validation, "embed_single: operator is not unitary");
    return ion == Ion::One ? kron(u, Mat2::Identity()) : kron(Mat2::Identity(), u);
}

Eigen::MatrixXcd exp_hermitian(const Eigen::MatrixXcd &h, double scale) {
    if (!is_hermitian(h)) fail(ErrorKind::Validation, "exp_hermitian: operator is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    const Eigen::VectorXd &w = es.eigenvalues();
    Eigen::VectorXcd phases(w.size());
    for (Eigen::Index k = 0; k < w.size(); ++k) phases(k) = std::exp(-kI * (scale * w(k)));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

bool equal_up_to_phase(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b, double tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    // Fix the phase from the largest entry of b.
    Eigen::Index r = 0, c = 0;
    b.cwiseAbs().maxCoeff(&r, &c);
    if (std::abs(b(r, c)) == 0.0) return a.cwiseAbs().maxCoeff() <= tol;
    const Complex ratio = a(r, c) / b(r, c);
    if (std::abs(std::abs(ratio) - 1.0) > tol) return false;
    const Complex phase = ratio / std::abs(ratio);
    return (a - phase * b).cwiseAbs().maxCoeff() <= tol;
}

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

TwoQubitState TwoQubitState::basis(Basis b) {
    Vec4 v = Vec4::Zero();
    v(static_cast<int>(b)) = 1.0;
    return TwoQubitState(v);
}

TwoQubitState TwoQubitState::pure(const Vec4 &amplitudes) {
    if (std::abs(amplitudes.norm() - 1.0) > kStateTol)
        fail(ErrorKind::Validation, "pure state amplitudes are not normalized");
    return TwoQubitState(amplitudes);
}

TwoQubitState TwoQubitState::mixed(const Mat4 &rho) {
    if (std::abs(rho.trace() - Complex(1.0)) > kStateTol)
        fail(ErrorKind::Validation, "density matrix trace differs from 1");
    if (!is_hermitian(rho, kStateTol)) fail(ErrorKind::Validation, "density matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Mat4> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kStateTol)
        fail(ErrorKind::Validation, "density matrix has a negative eigenvalue");
    return TwoQubitState(rho);
}

const Vec4 &TwoQubitState::amplitudes() const {
    if (!is_pure()) fail(ErrorKind::Validation, "state is mixed; no amplitudes available");
    return std::get<Vec4>(data_);
}

Mat4 TwoQubitState::density() const {
    if (const auto *v = std::get_if<Vec4>(&data_)) return (*v) * v->adjoint();
    return std::get<Mat4>(data_);
}

TwoQubitState TwoQubitState::to_mixed() const { return TwoQubitState(density()); }

double TwoQubitState::purity() const {
    if (is_pure()) return 1.0;
    const Mat4 &rho = std::get<Mat4>(data_);
    return (rho * rho).trace().real();
}

TwoQubitState apply_unchecked(const TwoQubitState &state, const Mat4 &u) {
    if (state.is_pure()) return TwoQubitState::pure(u * state.amplitudes());
    const Mat4 rho = state.density();
    return TwoQubitState::mixed_unchecked(u * rho * u.adjoint());
}

TwoQubitState apply(const TwoQubitState &state, const Mat4 &u) {
    if (!is_unitary(u, 1e-10)) fail(ErrorKind::Validation, "apply: operator is not unitary");
    return apply_unchecked(state, u);
}

Populations populations(const TwoQubitState &state) {
    std::array<double, 4> p{};
    if (state.is_pure()) {
        const Vec4 &v = state.amplitudes();
        for (int k = 0; k < 4; ++k) p[k] = std::norm(v(k));
    } else {
        const Mat4 rho = state.density();
        for (int k = 0; k < 4; ++k) p[k] = std::max(0.0, rho(k, k).real());
    }
    return {p[0], p[1], p[2], p[3]};
}

Mat2 reduced_density(const TwoQubitState &state, Ion ion) {
    const Mat4 rho = state.density();
    Mat2 out = Mat2::Zero();
    // Index = 2 * a + b with a the ion-1 bit.
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            for (int k = 0; k < 2; ++k) {
                out(i, j) += ion == Ion::One ? rho(2 * i + k, 2 * j + k) : rho(2 * k + i, 2 * k + j);
            }
        }
    }
    return out;
}

BlochVector reduced_bloch(const TwoQubitState &state, Ion ion) {
    const Mat2 r = reduced_density(state, ion);
    return {2.0 * r(0, 1).real(), -2.0 * r(0, 1).imag(), (r(0, 0) - r(1, 1)).real()};
}

double fidelity(const TwoQubitState &state, const Vec4 &target) {
    if (state.is_pure()) return std::norm(target.dot(state.amplitudes()));
    return (target.adjoint() * state.density() * target)(0, 0).real();
}

double overlap(const TwoQubitState &a, const TwoQubitState &b) {
    if (a.is_pure()) return fidelity(b, a.amplitudes());
    if (b.is_pure()) return fidelity(a, b.amplitudes());
    return (a.density() * b.density()).trace().real();
}

}  // namespace ionreg
