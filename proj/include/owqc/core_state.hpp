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
 * Dense state vectors: preparation, gate application, projective
 * measurement and bipartite entanglement diagnostics.
 *
 * Bit convention: qubit 0 is the most significant bit of the amplitude
 * index, so a ket |a_0 a_1 ... a_{n-1}> is read left to right.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"

namespace owqc {

using QubitIndex = int;

inline constexpr int kMaxQubits = 26;

/// Single-qubit product-state labels. `minus` follows the Xmon-paper
/// convention (-|0> + |1>)/sqrt(2).
enum class ProductLabel { zero, one, plus, minus };

inline std::string to_string(ProductLabel l) {
    switch (l) {
    case ProductLabel::zero:
        return "zero";
    case ProductLabel::one:
        return "one";
    case ProductLabel::plus:
        return "plus";
    case ProductLabel::minus:
        return "minus";
    }
    return "?";
}

inline ProductLabel product_label_from_string(const std::string &s) {
    if (s == "zero" || s == "0") return ProductLabel::zero;
    if (s == "one" || s == "1") return ProductLabel::one;
    if (s == "plus" || s == "+") return ProductLabel::plus;
    if (s == "minus" || s == "-") return ProductLabel::minus;
    throw ArgumentError("unknown product label '" + s + "'");
}

inline std::array<cplx, 2> label_ket(ProductLabel l) {
    switch (l) {
    case ProductLabel::zero:
        return {cplx{1.0}, cplx{0.0}};
    case ProductLabel::one:
        return {cplx{0.0}, cplx{1.0}};
    case ProductLabel::plus:
        return {cplx{kInvSqrt2}, cplx{kInvSqrt2}};
    case ProductLabel::minus:
        return {cplx{-kInvSqrt2}, cplx{kInvSqrt2}};
    }
    return {};
}

/**
 * @brief A named unitary acting on an ordered list of one or two qubits.
 *
 * The first target is the most significant bit of the matrix index, so for
 * a two-qubit gate the basis order is |t0 t1> = |00>, |01>, |10>, |11>.
 */
class GateSpec {
  public:
    GateSpec() = default;
    GateSpec(std::string name, std::vector<QubitIndex> targets, CMatrix matrix)
        : name_(std::move(name)), targets_(std::move(targets)), matrix_(std::move(matrix)) {
        if (targets_.empty() || targets_.size() > 2) {
            throw ArgumentError("GateSpec '" + name_ + "': expected 1 or 2 targets");
        }
        if (targets_.size() == 2 && targets_[0] == targets_[1]) {
            throw ArgumentError("GateSpec '" + name_ + "': duplicate targets");
        }
        for (QubitIndex t : targets_) {
            if (t < 0) throw ArgumentError("GateSpec '" + name_ + "': negative target");
        }
        const Eigen::Index dim = Eigen::Index{1} << targets_.size();
        if (matrix_.rows() != dim || matrix_.cols() != dim) {
            throw ArgumentError("GateSpec '" + name_ + "': matrix dimension does not match targets");
        }
        if (!is_unitary(matrix_, kNormTol)) {
            throw ValidationError("GateSpec '" + name_ + "': matrix is not unitary");
        }
    }

    const std::string &name() const { return name_; }
    const std::vector<QubitIndex> &targets() const { return targets_; }
    const CMatrix &matrix() const { return matrix_; }
    std::size_t arity() const { return targets_.size(); }

    /// Same unitary, different wires.
    GateSpec on(std::vector<QubitIndex> targets) const { return {name_, std::move(targets), matrix_}; }

    bool is_diagonal() const {
        const CMatrix off = matrix_ - CMatrix(matrix_.diagonal().asDiagonal());
        return off.cwiseAbs().maxCoeff() == 0.0;
    }

  private:
    std::string name_;
    std::vector<QubitIndex> targets_;
    CMatrix matrix_;
};

/// Dense amplitude vector over n qubits (1 <= n <= 26).
class StateVector {
  public:
    explicit StateVector(int n_qubits) : n_(check_size(n_qubits)), amps_(std::size_t{1} << n_, cplx{0.0}) {
        amps_[0] = 1.0;
    }

    /// Wraps raw amplitudes; the length must be a power of two.
    static StateVector from_amplitudes(std::vector<cplx> amps, bool normalize = true) {
        const std::size_t len = amps.size();
        if (len < 2 || (len & (len - 1)) != 0) {
            throw ArgumentError("StateVector: amplitude count must be a power of two >= 2");
        }
        int n = 0;
        while ((std::size_t{1} << n) < len) ++n;
        StateVector s(n);
        s.amps_ = std::move(amps);
        if (normalize) {
            s.normalize();
        }
        return s;
    }

    int n_qubits() const { return n_; }
    std::size_t dim() const { return amps_.size(); }
    std::span<const cplx> amplitudes() const { return amps_; }
    std::span<cplx> amplitudes_mut() { return amps_; }
    cplx operator[](std::size_t i) const { return amps_[i]; }
    cplx &operator[](std::size_t i) { return amps_[i]; }

    /// Mask of the bit that carries qubit q.
    std::size_t mask(QubitIndex q) const {
        check_qubit(q);
        return std::size_t{1} << (n_ - 1 - q);
    }

    int bit(std::size_t index, QubitIndex q) const { return (index & mask(q)) ? 1 : 0; }

    void check_qubit(QubitIndex q) const {
        if (q < 0 || q >= n_) {
            throw ArgumentError("qubit index " + std::to_string(q) + " out of range for " + std::to_string(n_) +
                                "-qubit state");
        }
    }

    double norm_squared() const {
        double acc = 0.0;
        for (const cplx &a : amps_) acc += std::norm(a);
        return acc;
    }

    void normalize() {
        const double nrm = std::sqrt(norm_squared());
        if (nrm < 1e-300) {
            throw ValidationError("StateVector: cannot normalise a zero vector");
        }
        for (cplx &a : amps_) a /= nrm;
    }

    /// Multiply by a global phase factor.
    void scale(cplx factor) {
        for (cplx &a : amps_) a *= factor;
    }

    void apply(const GateSpec &gate);

    CVector to_eigen() const { return Eigen::Map<const CVector>(amps_.data(), static_cast<Eigen::Index>(amps_.size())); }

    bool operator==(const StateVector &) const = default;

  private:
    static int check_size(int n) {
        if (n < 1) throw ArgumentError("StateVector: need at least one qubit");
        if (n > kMaxQubits) {
            throw CapacityError("StateVector: " + std::to_string(n) + " qubits exceeds the cap of " +
                                std::to_string(kMaxQubits));
        }
        return n;
    }

    int n_;
    std::vector<cplx> amps_;
};

inline void StateVector::apply(const GateSpec &gate) {
    const auto &t = gate.targets();
    for (QubitIndex q : t) check_qubit(q);
    const CMatrix &m = gate.matrix();
    const std::size_t dim = amps_.size();
    if (t.size() == 1) {
        const std::size_t mk = mask(t[0]);
        const cplx m00 = m(0, 0), m01 = m(0, 1), m10 = m(1, 0), m11 = m(1, 1);
        for (std::size_t i = 0; i < dim; ++i) {
            if (i & mk) continue;
            const cplx a0 = amps_[i];
            const cplx a1 = amps_[i | mk];
            amps_[i] = m00 * a0 + m01 * a1;
            amps_[i | mk] = m10 * a0 + m11 * a1;
        }
        return;
    }
    const std::size_t ma = mask(t[0]);
    const std::size_t mb = mask(t[1]);
    if (gate.is_diagonal()) {
        const std::array<cplx, 4> d{m(0, 0), m(1, 1), m(2, 2), m(3, 3)};
        for (std::size_t i = 0; i < dim; ++i) {
            const int k = ((i & ma) ? 2 : 0) | ((i & mb) ? 1 : 0);
            amps_[i] *= d[k];
        }
        return;
    }
    for (std::size_t i = 0; i < dim; ++i) {
        if ((i & ma) || (i & mb)) continue;
        const std::array<std::size_t, 4> idx{i, i | mb, i | ma, i | ma | mb};
        std::array<cplx, 4> in{};
        for (int r = 0; r < 4; ++r) in[r] = amps_[idx[r]];
        for (int r = 0; r < 4; ++r) {
            cplx acc{0.0};
            for (int c = 0; c < 4; ++c) acc += m(r, c) * in[c];
            amps_[idx[r]] = acc;
        }
    }
}

/// Tensor product of single-qubit states in the given order.
inline StateVector init_product_state(int n, std::span<const ProductLabel> labels) {
    if (static_cast<std::size_t>(n) != labels.size()) {
        throw ArgumentError("init_product_state: expected " + std::to_string(n) + " labels, got " +
                            std::to_string(labels.size()));
    }
    StateVector s(n);
    for (std::size_t i = 0; i < s.dim(); ++i) {
        cplx a{1.0};
        for (int q = 0; q < n; ++q) {
            a *= label_ket(labels[q])[s.bit(i, q)];
        }
        s[i] = a;
    }
    return s;
}

inline StateVector init_product_state(int n, std::initializer_list<ProductLabel> labels) {
    return init_product_state(n, std::span<const ProductLabel>(labels.begin(), labels.size()));
}

/// |a> (x) |b>, with a's qubits first.
inline StateVector tensor(const StateVector &a, const StateVector &b) {
    std::vector<cplx> amps(a.dim() * b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = 0; j < b.dim(); ++j) amps[i * b.dim() + j] = a[i] * b[j];
    }
    return StateVector::from_amplitudes(std::move(amps), false);
}

inline StateVector apply_gate(StateVector state, const GateSpec &gate) {
    state.apply(gate);
    return state;
}

// --------------------------------------------------------------------------
// Measurement
// --------------------------------------------------------------------------

enum class Basis { X, Y, Z, Custom };

inline std::string to_string(Basis b) {
    switch (b) {
    case Basis::X:
        return "X";
    case Basis::Y:
        return "Y";
    case Basis::Z:
        return "Z";
    case Basis::Custom:
        return "custom";
    }
    return "?";
}

inline Basis basis_from_string(const std::string &s) {
    if (s == "X" || s == "x") return Basis::X;
    if (s == "Y" || s == "y") return Basis::Y;
    if (s == "Z" || s == "z") return Basis::Z;
    throw ArgumentError("unknown measurement basis '" + s + "'");
}

/**
 * Orthonormal single-qubit measurement basis. Outcome 0 is the +1
 * eigenvector of the corresponding Pauli (|0>_x = |+>), outcome 1 the -1
 * eigenvector.
 */
struct MeasurementBasis {
    Basis kind = Basis::Z;
    std::array<std::array<cplx, 2>, 2> kets{};

    static MeasurementBasis of(Basis b) {
        MeasurementBasis mb;
        mb.kind = b;
        switch (b) {
        case Basis::X:
            mb.kets = {{{kInvSqrt2, kInvSqrt2}, {kInvSqrt2, -kInvSqrt2}}};
            break;
        case Basis::Y:
            mb.kets = {{{kInvSqrt2, kI * kInvSqrt2}, {kInvSqrt2, -kI * kInvSqrt2}}};
            break;
        case Basis::Z:
            mb.kets = {{{1.0, 0.0}, {0.0, 1.0}}};
            break;
        case Basis::Custom:
            throw ArgumentError("MeasurementBasis::of: use bloch() for custom bases");
        }
        return mb;
    }

    /// Basis whose outcome-0 ket sits at polar angle theta, azimuth phi.
    static MeasurementBasis bloch(double theta, double phi) {
        MeasurementBasis mb;
        mb.kind = Basis::Custom;
        const double c = std::cos(theta / 2), s = std::sin(theta / 2);
        const cplx e = std::exp(kI * phi);
        mb.kets[0] = {cplx{c}, e * s};
        mb.kets[1] = {cplx{-s}, e * c};
        return mb;
    }
};

struct MeasurementRecord {
    QubitIndex qubit = 0;
    Basis basis = Basis::Z;
    int outcome = 0;          ///< 0 -> eigenvalue +1, 1 -> eigenvalue -1
    double probability = 0.0; ///< Born probability before collapse
};

/**
 * Seedable generator. Uniform doubles are built from the top 53 bits of
 * mt19937_64 so that sequences are identical across standard libraries.
 */
class Rng {
  public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    std::uint64_t next() { return engine_(); }

  private:
    std::mt19937_64 engine_;
};

struct Forced {
    int bit = 0;
};

using OutcomeSource = std::variant<std::reference_wrapper<Rng>, Forced>;

/// Probability of each outcome of a single-qubit measurement.
inline std::array<double, 2> outcome_probabilities(const StateVector &state, QubitIndex q,
                                                   const MeasurementBasis &basis) {
    const std::size_t mk = state.mask(q);
    std::array<double, 2> p{0.0, 0.0};
    for (std::size_t i = 0; i < state.dim(); ++i) {
        if (i & mk) continue;
        const cplx a0 = state[i], a1 = state[i | mk];
        for (int o = 0; o < 2; ++o) {
            const cplx proj = std::conj(basis.kets[o][0]) * a0 + std::conj(basis.kets[o][1]) * a1;
            p[o] += std::norm(proj);
        }
    }
    return p;
}

/// Applies |v_o><v_o| on qubit q without renormalising; returns the
/// squared norm of the result.
inline double project(StateVector &state, QubitIndex q, const MeasurementBasis &basis, int outcome) {
    if (outcome != 0 && outcome != 1) throw ArgumentError("project: outcome must be 0 or 1");
    const std::size_t mk = state.mask(q);
    const auto &v = basis.kets[outcome];
    double acc = 0.0;
    for (std::size_t i = 0; i < state.dim(); ++i) {
        if (i & mk) continue;
        const cplx proj = std::conj(v[0]) * state[i] + std::conj(v[1]) * state[i | mk];
        state[i] = v[0] * proj;
        state[i | mk] = v[1] * proj;
        acc += std::norm(proj);
    }
    return acc;
}

/// In-place measurement; collapses and renormalises `state`.
inline MeasurementRecord measure_inplace(StateVector &state, QubitIndex q, const MeasurementBasis &basis,
                                         OutcomeSource source) {
    const auto p = outcome_probabilities(state, q, basis);
    int outcome = 0;
    if (std::holds_alternative<Forced>(source)) {
        outcome = std::get<Forced>(source).bit;
        if (outcome != 0 && outcome != 1) throw ArgumentError("measure: forced outcome must be 0 or 1");
        if (p[outcome] <= 1e-12) {
            throw ImpossibleBranchError("measure: forced outcome " + std::to_string(outcome) + " on qubit " +
                                        std::to_string(q) + " has probability " + std::to_string(p[outcome]));
        }
    } else {
        Rng &rng = std::get<std::reference_wrapper<Rng>>(source).get();
        outcome = rng.uniform() < p[0] / (p[0] + p[1]) ? 0 : 1;
    }
    const double kept = project(state, q, basis, outcome);
    for (std::size_t i = 0; i < state.dim(); ++i) state[i] /= std::sqrt(kept);
    return {q, basis.kind, outcome, p[outcome]};
}

inline std::pair<StateVector, MeasurementRecord> measure(StateVector state, QubitIndex q, Basis basis,
                                                         OutcomeSource source) {
    auto rec = measure_inplace(state, q, MeasurementBasis::of(basis), source);
    return {std::move(state), rec};
}

// --------------------------------------------------------------------------
// Entanglement diagnostics
// --------------------------------------------------------------------------

inline void check_subsystem(const StateVector &state, std::span<const QubitIndex> qubits, bool allow_full) {
    if (qubits.empty()) throw ArgumentError("subsystem must be non-empty");
    std::vector<bool> seen(state.n_qubits(), false);
    for (QubitIndex q : qubits) {
        state.check_qubit(q);
        if (seen[q]) throw ArgumentError("subsystem has duplicate qubit " + std::to_string(q));
        seen[q] = true;
    }
    if (!allow_full && qubits.size() == static_cast<std::size_t>(state.n_qubits())) {
        throw ArgumentError("bipartition must leave a non-empty complement");
    }
}

/**
 * Reshapes the amplitudes into the matrix M(r, c) with r running over the
 * `rows` qubits (first listed = most significant) and c over the remaining
 * qubits in ascending order.
 */
inline CMatrix bipartition_matrix(const StateVector &state, std::span<const QubitIndex> rows) {
    check_subsystem(state, rows, true);
    std::vector<QubitIndex> cols;
    for (QubitIndex q = 0; q < state.n_qubits(); ++q) {
        if (std::find(rows.begin(), rows.end(), q) == rows.end()) cols.push_back(q);
    }
    const Eigen::Index nr = Eigen::Index{1} << rows.size();
    const Eigen::Index nc = Eigen::Index{1} << cols.size();
    CMatrix m(nr, nc);
    for (std::size_t i = 0; i < state.dim(); ++i) {
        Eigen::Index r = 0, c = 0;
        for (QubitIndex q : rows) r = (r << 1) | state.bit(i, q);
        for (QubitIndex q : cols) c = (c << 1) | state.bit(i, q);
        m(r, c) = state[i];
    }
    return m;
}

struct DensityMatrix {
    std::vector<QubitIndex> subsystem;
    CMatrix entries;

    double hermiticity_error() const { return (entries - entries.adjoint()).cwiseAbs().maxCoeff(); }
    double trace_error() const { return std::abs(entries.trace() - cplx{1.0}); }
    double min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(entries);
        return es.eigenvalues().minCoeff();
    }
    Eigen::VectorXd eigenvalues() const {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(entries);
        return es.eigenvalues();
    }
    bool valid() const { return hermiticity_error() < kNormTol && trace_error() < kNormTol && min_eigenvalue() >= -1e-9; }
};

/// Partial trace onto `keep` (in the listed order).
inline DensityMatrix reduced_density(const StateVector &state, std::span<const QubitIndex> keep) {
    if (keep.empty()) throw ArgumentError("reduced_density: keep list is empty");
    const CMatrix m = bipartition_matrix(state, keep);
    return {std::vector<QubitIndex>(keep.begin(), keep.end()), m * m.adjoint()};
}

inline DensityMatrix reduced_density(const StateVector &state, std::initializer_list<QubitIndex> keep) {
    return reduced_density(state, std::span<const QubitIndex>(keep.begin(), keep.size()));
}

/// Singular values of the bipartition matrix, descending.
inline Eigen::VectorXd schmidt_coefficients(const StateVector &state, std::span<const QubitIndex> partition) {
    check_subsystem(state, partition, false);
    const CMatrix m = bipartition_matrix(state, partition);
    Eigen::BDCSVD<CMatrix> svd(m);
    return svd.singularValues();
}

inline int schmidt_rank(const StateVector &state, std::span<const QubitIndex> partition, double tol = kRankTol) {
    if (!(tol > 0.0)) throw ArgumentError("schmidt_rank: tolerance must be positive");
    const Eigen::VectorXd s = schmidt_coefficients(state, partition);
    return static_cast<int>((s.array() > tol).count());
}

inline int schmidt_rank(const StateVector &state, std::initializer_list<QubitIndex> partition,
                        double tol = kRankTol) {
    return schmidt_rank(state, std::span<const QubitIndex>(partition.begin(), partition.size()), tol);
}

/// Largest second Schmidt coefficient over all single-qubit cuts. A pure
/// state is a full product state iff this vanishes.
inline double max_second_schmidt(const StateVector &state) {
    double worst = 0.0;
    if (state.n_qubits() < 2) return 0.0;
    for (QubitIndex q = 0; q < state.n_qubits(); ++q) {
        const std::array<QubitIndex, 1> cut{q};
        const CMatrix m = bipartition_matrix(state, cut);
        Eigen::JacobiSVD<CMatrix> svd(m.transpose());
        const auto &s = svd.singularValues();
        const double norm = s(0) > 0 ? s(0) * s(0) + s(1) * s(1) : 1.0;
        worst = std::max(worst, s(1) / std::sqrt(norm));
    }
    return worst;
}

/// |<a|b>|^2; invariant under global phases of either argument.
inline double state_fidelity(const StateVector &a, const StateVector &b) {
    if (a.n_qubits() != b.n_qubits()) {
        throw ArgumentError("state_fidelity: qubit counts differ");
    }
    cplx acc{0.0};
    for (std::size_t i = 0; i < a.dim(); ++i) acc += std::conj(a[i]) * b[i];
    return std::norm(acc);
}

/// max_i |a_i - b_i|
inline double max_amplitude_difference(const StateVector &a, const StateVector &b) {
    if (a.dim() != b.dim()) throw ArgumentError("max_amplitude_difference: size mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

} // namespace owqc
