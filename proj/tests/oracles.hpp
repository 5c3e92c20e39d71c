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

// Independent reference computations used by the tests. Nothing here calls
// into the library's gate constructors or simulators.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

namespace oracle {

using C = std::complex<double>;
using M2 = Eigen::Matrix2cd;
using M4 = Eigen::Matrix4cd;
using MX = Eigen::MatrixXcd;

inline const double pi = std::acos(-1.0);

inline M2 sx() { M2 m; m << 0, 1, 1, 0; return m; }
inline M2 sy() { M2 m; m << 0, C(0, -1), C(0, 1), 0; return m; }
inline M2 sz() { M2 m; m << 1, 0, 0, -1; return m; }

inline M4 kron(const M2 &a, const M2 &b) {
    M4 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

/// exp(-i scale H) by scaling and squaring of a Taylor series.
inline MX expm_taylor(const MX &h, double scale) {
    const MX a = C(0, -scale) * h;
    const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    while (norm / std::pow(2.0, squarings) > 0.25) ++squarings;
    const MX b = a / std::pow(2.0, squarings);
    MX term = MX::Identity(h.rows(), h.cols());
    MX sum = term;
    for (int k = 1; k < 30; ++k) {
        term = term * b / static_cast<double>(k);
        sum += term;
    }
    for (int s = 0; s < squarings; ++s) sum = sum * sum;
    return sum;
}

/// Largest entrywise deviation of a from b after removing the best global
/// phase.
inline double phase_distance(const MX &a, const MX &b) {
    const C overlap = (b.adjoint() * a).trace();
    const C phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : C(1, 0);
    return (a - phase * b).cwiseAbs().maxCoeff();
}

/// Haar-random unitary from the QR decomposition of a complex Gaussian
/// matrix, with the phases of R's diagonal folded back in.
template <class Rng>
MX haar_unitary(int n, Rng &rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    MX z(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) z(i, j) = C(g(rng), g(rng)) / std::sqrt(2.0);
    Eigen::HouseholderQR<MX> qr(z);
    MX q = qr.householderQ();
    const MX r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i) q.col(i) *= r(i, i) / std::abs(r(i, i));
    return q;
}

template <class Rng>
Eigen::Vector4cd haar_state(Rng &rng) {
    return haar_unitary(4, rng).col(0);
}

/// Ideal entangling gate, written out from its action on the Bell basis:
/// e^{-i pi/4} (I + i XX) / sqrt(2).
inline M4 ms_reference() {
    const M4 xx = kron(sx(), sx());
    return std::exp(C(0, -pi / 4)) * (M4::Identity() + C(0, 1) * xx) / std::sqrt(2.0);
}

/// Spin-flip probability of a two-level system driven at Rabi rate w with
/// detuning d for time t, from direct integration of the Schroedinger
/// equation with a fixed-step RK4.
inline double flip_probability_rk4(double w, double d, double t, int steps = 20000) {
    using V = Eigen::Vector2cd;
    M2 h = 0.5 * (w * sx() + d * sz());
    auto f = [&](const V &psi) -> V { return C(0, -1) * (h * psi); };
    V psi(1, 0);
    const double dt = t / steps;
    for (int i = 0; i < steps; ++i) {
        const V k1 = f(psi), k2 = f(psi + 0.5 * dt * k1), k3 = f(psi + 0.5 * dt * k2), k4 = f(psi + dt * k3);
        psi += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return std::norm(psi(1));
}

// Transport counting on a flat schedule. Each entry is a required
// configuration: 1 or 2 for a single-qubit pulse on that ion, 3 for the
// entangling gate and 0 for a barrier, which needs none.
using Schedule = std::vector<int>;

inline int count_transports(const Schedule &s) {
    int current = -1, count = 0;
    for (int need : s) {
        if (need == 0) continue;
        if (need != current) {
            ++count;
            current = need;
        }
    }
    return count;
}

/// Fewest transports over every reordering that keeps MS pulses and
/// barriers fixed and preserves each ion's pulse order between them, found
/// by enumerating all interleavings. Returns nullopt when the number of
/// orderings exceeds `limit`.
inline std::optional<int> brute_force_min_transports(const Schedule &s, std::uint64_t limit = 2'000'000) {
    struct Block {
        int ones = 0, twos = 0;
        int fence = 0;  // op after the block: 0 barrier, 3 MS, -1 end
    };
    std::vector<Block> blocks(1);
    for (int need : s) {
        if (need == 1) ++blocks.back().ones;
        else if (need == 2) ++blocks.back().twos;
        else {
            blocks.back().fence = need;
            blocks.emplace_back();
        }
    }
    blocks.back().fence = -1;

    std::uint64_t total = 1;
    for (const auto &b : blocks) {
        std::uint64_t ways = 1;  // binomial(ones + twos, ones)
        for (int k = 1; k <= b.ones; ++k) ways = ways * static_cast<std::uint64_t>(b.twos + k) / k;
        total *= ways;
        if (total > limit) return std::nullopt;
    }

    int best = 1 << 30;
    Schedule current;
    std::function<void(std::size_t)> recurse = [&](std::size_t bi) {
        if (bi == blocks.size()) {
            best = std::min(best, count_transports(current));
            return;
        }
        const Block &b = blocks[bi];
        const int n = b.ones + b.twos;
        // Enumerate subsets of positions taken by ion 1.
        std::vector<int> mask(n, 0);
        std::fill(mask.begin(), mask.begin() + b.ones, 1);
        std::sort(mask.begin(), mask.end());
        do {
            const std::size_t mark = current.size();
            for (int m : mask) current.push_back(m ? 1 : 2);
            if (b.fence >= 0) current.push_back(b.fence);
            recurse(bi + 1);
            current.resize(mark);
        } while (std::next_permutation(mask.begin(), mask.end()));
    };
    recurse(0);
    return best;
}

/// Average state fidelity of a noisy dressed cycle against its ideal
/// version, estimated by Monte Carlo over random Pauli dressings and Haar
/// input states. The cycle is dressing (a Pauli pi pulse or nothing on each
/// qubit) followed by the entangling gate and depolarizing noise of
/// strength p.
template <class Rng>
double dressed_cycle_fidelity(double p, int samples, Rng &rng) {
    const M2 paulis[4] = {M2::Identity(), C(0, -1) * sx(), C(0, -1) * sy(), C(0, -1) * sz()};
    const M4 ms = ms_reference();
    std::uniform_int_distribution<int> pick(0, 3);
    double sum = 0.0;
    for (int s = 0; s < samples; ++s) {
        const M4 u = ms * kron(paulis[pick(rng)], paulis[pick(rng)]);
        const Eigen::Vector4cd psi = haar_state(rng);
        const Eigen::Vector4cd ideal = u * psi;
        const M4 rho = (1.0 - p) * (ideal * ideal.adjoint()) + (p / 4.0) * M4::Identity();
        sum += (ideal.adjoint() * rho * ideal)(0, 0).real();
    }
    return sum / samples;
}

/// F(N) = (1 + (2 p0 - 1) exp(-2 C N)) / 2.
inline double survival(double n, double c, double p0) { return 0.5 * (1.0 + (2.0 * p0 - 1.0) * std::exp(-2.0 * c * n)); }

}  // namespace oracle
