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
#include <complex>
#include <variant>

#include <Eigen/Dense>

namespace ionreg {

using Complex = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using Vec4 = Eigen::Vector4cd;

/// Qubit index within the register. Ion 1 is the left tensor factor.
enum class Ion : int { One = 1, Two = 2 };

inline int index_of(Ion ion) { return static_cast<int>(ion) - 1; }
inline Ion other(Ion ion) { return ion == Ion::One ? Ion::Two : Ion::One; }
Ion ion_from_int(int q);

// Pauli matrices with sigma_z |up> = +|up>; |up> (bright) is basis index 0.
namespace pauli {
Mat2 identity();
Mat2 x();
Mat2 y();
Mat2 z();
}  // namespace pauli

/// Basis order |uu>, |ud>, |du>, |dd>.
enum class Basis : int { UpUp = 0, UpDown = 1, DownUp = 2, DownDown = 3 };

constexpr double kUnitaryTol = 1e-12;
constexpr double kStateTol = 1e-10;

bool is_unitary(const Eigen::MatrixXcd &u, double tol = kUnitaryTol);
bool is_hermitian(const Eigen::MatrixXcd &h, double tol = kUnitaryTol);

Mat4 kron(const Mat2 &a, const Mat2 &b);

/// U (x) I for ion 1, I (x) U for ion 2. Throws on non-unitary input.
Mat4 embed_single(const Mat2 &u, Ion ion);

/// exp(-i * scale * H) through the eigendecomposition of a Hermitian H.
Eigen::MatrixXcd exp_hermitian(const Eigen::MatrixXcd &h, double scale);

/// True when a and b agree entrywise up to a global phase.
bool equal_up_to_phase(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b, double tol);

struct BlochVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double norm() const;
};

struct Populations {
    double up_up = 0.0;
    double up_down = 0.0;
    double down_up = 0.0;
    double down_down = 0.0;

    double sum() const { return up_up + up_down + down_up + down_down; }
};

/// Two-qubit register state, either a state vector or a density matrix.
/// The stored representation is never silently renormalized or rephased.
class TwoQubitState {
  public:
    static TwoQubitState basis(Basis b);
    static TwoQubitState pure(const Vec4 &amplitudes);
    static TwoQubitState mixed(const Mat4 &rho);
    /// Skips the trace/Hermiticity/positivity checks. For channel outputs
    /// that are valid by construction.
    static TwoQubitState mixed_unchecked(const Mat4 &rho) { return TwoQubitState(rho); }

    bool is_pure() const { return std::holds_alternative<Vec4>(data_); }
    const Vec4 &amplitudes() const;
    Mat4 density() const;
    TwoQubitState to_mixed() const;

    double purity() const;

  private:
    explicit TwoQubitState(Vec4 v) : data_(std::move(v)) {}
    explicit TwoQubitState(Mat4 m) : data_(std::move(m)) {}

    std::variant<Vec4, Mat4> data_;
};

/// U|psi> or U rho U^dagger. Throws on non-unitary U.
TwoQubitState apply(const TwoQubitState &state, const Mat4 &u);
/// Same as apply() without the unitarity check, for hot loops over trusted gates.
TwoQubitState apply_unchecked(const TwoQubitState &state, const Mat4 &u);

Populations populations(const TwoQubitState &state);

/// Reduced single-ion density matrix (partial trace over the other ion).
Mat2 reduced_density(const TwoQubitState &state, Ion ion);
BlochVector reduced_bloch(const TwoQubitState &state, Ion ion);

/// <target| rho |target> for a pure target.
double fidelity(const TwoQubitState &state, const Vec4 &target);
/// Tr(rho sigma) for two states (equals state fidelity when either is pure).
double overlap(const TwoQubitState &a, const TwoQubitState &b);

}  // namespace ionreg
