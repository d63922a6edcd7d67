// Copyright 2026 The owqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Small dense linear-algebra helpers on top of Eigen.
 */
#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

#include "errors.hpp"

namespace owqc {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr cplx kI{0.0, 1.0};
inline constexpr double kInvSqrt2 = 0.70710678118654752440;

/// Normalisation tolerance for state vectors and density matrices.
inline constexpr double kNormTol = 1e-10;
/// Default singular-value threshold for rank decisions.
inline constexpr double kRankTol = 1e-8;
/// Max-abs deviation threshold for "equal up to global phase".
inline constexpr double kPhaseTol = 1e-9;

/// max_ij |(U^dagger U - I)_ij|
inline double unitarity_deviation(const CMatrix &u) {
    if (u.rows() != u.cols()) {
        return INFINITY;
    }
    const CMatrix d = u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols());
    return d.cwiseAbs().maxCoeff();
}

inline bool is_unitary(const CMatrix &u, double tol = kNormTol) {
    return unitarity_deviation(u) <= tol;
}

/// max_ij |A_ij - B_ij| with A rescaled by the difference of the global
/// phase arg Tr(A^dagger B).
inline double phase_aligned_deviation(const CMatrix &a, const CMatrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ArgumentError("phase_aligned_deviation: shape mismatch");
    }
    const cplx overlap = (a.adjoint() * b).trace();
    const cplx phase = std::abs(overlap) > 1e-300 ? overlap / std::abs(overlap) : cplx{1.0};
    return (a * phase - b).cwiseAbs().maxCoeff();
}

/// |Tr(U^dagger V)|^2 / d^2, the standard gate fidelity between unitaries.
inline double gate_fidelity(const CMatrix &u, const CMatrix &v) {
    const double d = static_cast<double>(u.rows());
    return std::norm((u.adjoint() * v).trace()) / (d * d);
}

/// exp(-i t H) for Hermitian H, through its spectral decomposition.
inline CMatrix expm_hermitian(const CMatrix &h, double t) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    if (es.info() != Eigen::Success) {
        throw ConvergenceError("expm_hermitian: eigensolver failed");
    }
    CVector phases(h.rows());
    for (Eigen::Index i = 0; i < h.rows(); ++i) {
        phases(i) = std::exp(-kI * t * es.eigenvalues()(i));
    }
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

inline CMatrix kron(const CMatrix &a, const CMatrix &b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

namespace pauli_matrix {
inline CMatrix identity() { return CMatrix::Identity(2, 2); }
inline CMatrix x() {
    CMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}
inline CMatrix y() {
    CMatrix m(2, 2);
    m << 0, -kI, kI, 0;
    return m;
}
inline CMatrix z() {
    CMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}
inline CMatrix hadamard() {
    CMatrix m(2, 2);
    m << kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2;
    return m;
}
} // namespace pauli_matrix

} // namespace owqc
