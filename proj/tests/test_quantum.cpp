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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ionreg/errors.hpp"
#include "ionreg/gates.hpp"
#include "ionreg/quantum.hpp"
#include "oracles.hpp"

using namespace ionreg;

namespace {
Vec4 ket(Basis b) { return TwoQubitState::basis(b).amplitudes(); }
Vec4 bell() { return (ket(Basis::UpUp) + Complex(0, 1) * ket(Basis::DownDown)) / std::sqrt(2.0); }
}  // namespace

TEST_CASE("embed_single places the factor on the requested ion") {
    CHECK(embed_single(pauli::identity(), Ion::One).isApprox(Mat4::Identity(), 1e-15));
    const auto out = ionreg::apply(TwoQubitState::basis(Basis::UpUp), embed_single(pauli::x(), Ion::Two));
    CHECK((out.amplitudes() - ket(Basis::UpDown)).norm() < 1e-15);
    const Mat4 xx = embed_single(pauli::x(), Ion::One) * embed_single(pauli::x(), Ion::Two);
    CHECK((xx - oracle::kron(oracle::sx(), oracle::sx())).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(is_unitary(embed_single(r_phi(0.3, 1.1), Ion::One)));
}

TEST_CASE("embed_single rejects a non-unitary factor") {
    Mat2 bad = Mat2::Identity();
    bad(0, 0) = 2.0;
    CHECK_THROWS_AS(embed_single(bad, Ion::One), Error);
    try {
        embed_single(bad, Ion::Two);
    } catch (const Error &e) {
        CHECK(e.kind() == ErrorKind::Validation);
    }
    CHECK_THROWS_AS(ion_from_int(3), Error);
}

TEST_CASE("exp_hermitian matches closed forms and a Taylor-series oracle") {
    const auto ez = exp_hermitian(pauli::z(), kPi / 2);
    CHECK(std::abs(ez(0, 0) - std::exp(Complex(0, -kPi / 2))) < 1e-15);
    CHECK(std::abs(ez(1, 1) - std::exp(Complex(0, kPi / 2))) < 1e-15);
    CHECK(std::abs(ez(0, 1)) < 1e-15);
    const Mat2 ex = exp_hermitian(pauli::x(), kPi / 2);
    CHECK((ex - Complex(0, -1) * pauli::x()).cwiseAbs().maxCoeff() < 1e-12);

    std::mt19937_64 rng(11);
    for (int k = 0; k < 50; ++k) {
        const Eigen::MatrixXcd u = oracle::haar_unitary(4, rng);
        Eigen::VectorXd d(4);
        for (int i = 0; i < 4; ++i) d(i) = std::uniform_real_distribution<double>(-2, 2)(rng);
        const Eigen::MatrixXcd h = u * d.asDiagonal() * u.adjoint();
        const Eigen::MatrixXcd a = exp_hermitian(h, 0.7);
        CHECK(is_unitary(a));
        CHECK((a - oracle::expm_taylor(h, 0.7)).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("exp_hermitian rejects non-Hermitian input") {
    Mat2 m = pauli::x();
    m(0, 1) = 2.0;
    CHECK_THROWS_AS(exp_hermitian(m, 1.0), Error);
}

TEST_CASE("apply acts on vectors and density matrices") {
    const auto up = TwoQubitState::basis(Basis::UpUp);
    CHECK((ionreg::apply(up, Mat4::Identity()).amplitudes() - ket(Basis::UpUp)).norm() < 1e-15);
    const Mat4 xx = kron(pauli::x(), pauli::x());
    CHECK((ionreg::apply(up, xx).amplitudes() - ket(Basis::DownDown)).norm() < 1e-15);

    std::mt19937_64 rng(5);
    const Mat4 u = oracle::haar_unitary(4, rng);
    const auto psi = TwoQubitState::pure(oracle::haar_state(rng));
    const auto back = ionreg::apply(apply(psi, u), u.adjoint());
    CHECK((back.amplitudes() - psi.amplitudes()).cwiseAbs().maxCoeff() < 1e-12);
    const auto rho = psi.to_mixed();
    const auto rback = ionreg::apply(apply(rho, u), u.adjoint());
    CHECK((rback.density() - rho.density()).cwiseAbs().maxCoeff() < 1e-12);

    Mat4 bad = Mat4::Identity();
    bad(3, 3) = 0.5;
    CHECK_THROWS_AS(ionreg::apply(up, bad), Error);
}

TEST_CASE("state constructors validate their invariants") {
    CHECK_THROWS_AS(TwoQubitState::pure(Vec4(1, 1, 0, 0)), Error);
    Mat4 rho = Mat4::Zero();
    rho(0, 0) = 0.5;
    CHECK_THROWS_AS(TwoQubitState::mixed(rho), Error);
    rho(1, 1) = 0.5;
    rho(0, 1) = 0.1;
    CHECK_THROWS_AS(TwoQubitState::mixed(rho), Error);  // not Hermitian
    rho(1, 0) = 0.1;
    CHECK_NOTHROW(TwoQubitState::mixed(rho));
    Mat4 neg = Mat4::Zero();
    neg(0, 0) = 1.2;
    neg(1, 1) = -0.2;
    CHECK_THROWS_AS(TwoQubitState::mixed(neg), Error);
}

TEST_CASE("populations") {
    const Populations p = populations(TwoQubitState::basis(Basis::UpUp));
    CHECK(p.up_up == doctest::Approx(1.0));
    CHECK(p.down_down == doctest::Approx(0.0));
    const Populations b = populations(TwoQubitState::pure(bell()));
    CHECK(b.up_up == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(b.down_down == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(b.up_down + b.down_up == doctest::Approx(0.0));

    // R_x(pi/2) on ion 1, evaluated by hand: (|u> - i|d>)/sqrt(2) on ion 1.
    const Mat2 rx = std::cos(kPi / 4) * oracle::M2::Identity() - Complex(0, 1) * std::sin(kPi / 4) * oracle::sx();
    const auto s = ionreg::apply(TwoQubitState::basis(Basis::UpUp), oracle::kron(rx, oracle::M2::Identity()));
    const Populations q = populations(s);
    CHECK(q.up_up == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(q.down_up == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(q.up_down == doctest::Approx(0.0));
    CHECK(q.down_down == doctest::Approx(0.0));
}

TEST_CASE("populations ignore a global phase") {
    std::mt19937_64 rng(8);
    for (int k = 0; k < 20; ++k) {
        const Vec4 v = oracle::haar_state(rng);
        const Populations a = populations(TwoQubitState::pure(v));
        const Populations b = populations(TwoQubitState::pure(std::exp(Complex(0, 0.37 * k)) * v));
        CHECK(std::abs(a.up_up - b.up_up) < 1e-15);
        CHECK(std::abs(a.down_up - b.down_up) < 1e-15);
        CHECK(a.sum() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("reduced Bloch vectors") {
    const BlochVector b = reduced_bloch(TwoQubitState::basis(Basis::UpUp), Ion::One);
    CHECK(b.z == doctest::Approx(1.0));
    CHECK(b.x == doctest::Approx(0.0));
    const BlochVector e = reduced_bloch(TwoQubitState::pure(bell()), Ion::Two);
    CHECK(e.norm() < 1e-15);

    // R_x(pi/2)|u> = (|u> - i|d>)/sqrt(2): <sx> = 0, <sy> = -1, <sz> = 0.
    const auto s = ionreg::apply(TwoQubitState::basis(Basis::UpUp), embed_single(r_x(kPi / 2), Ion::One));
    const BlochVector r = reduced_bloch(s, Ion::One);
    CHECK(r.norm() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(r.x) < 1e-12);
    CHECK(r.y == doctest::Approx(-1.0));
    const BlochVector r2 = reduced_bloch(s, Ion::Two);
    CHECK(r2.z == doctest::Approx(1.0));
}

TEST_CASE("apply preserves state invariants for random unitaries") {
    std::mt19937_64 rng(2024);
    for (int k = 0; k < 1000; ++k) {
        const Mat4 u = oracle::haar_unitary(4, rng);
        REQUIRE(is_unitary(u, 1e-12));
        const auto psi = ionreg::apply(TwoQubitState::pure(oracle::haar_state(rng)), u);
        CHECK(std::abs(psi.amplitudes().norm() - 1.0) < 1e-12);

        const Vec4 a = oracle::haar_state(rng), b = oracle::haar_state(rng);
        const Mat4 rho = 0.3 * a * a.adjoint() + 0.7 * b * b.adjoint();
        const auto out = ionreg::apply(TwoQubitState::mixed(rho), u);
        const Mat4 r = out.density();
        CHECK(std::abs(r.trace().real() - 1.0) < 1e-12);
        CHECK((r - r.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
        Eigen::SelfAdjointEigenSolver<Mat4> es(r);
        CHECK(es.eigenvalues().minCoeff() > -1e-10);
        const BlochVector bv = reduced_bloch(out, Ion::One);
        CHECK(bv.norm() <= 1.0 + 1e-10);
    }
}

TEST_CASE("fidelity and overlap") {
    const auto s = TwoQubitState::pure(bell());
    CHECK(fidelity(s, bell()) == doctest::Approx(1.0));
    CHECK(fidelity(s.to_mixed(), ket(Basis::UpUp)) == doctest::Approx(0.5));
    CHECK(overlap(s, s.to_mixed()) == doctest::Approx(1.0));
    CHECK(s.to_mixed().purity() == doctest::Approx(1.0));
}
