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
 * Measurement-based programs: entangling steps, single-qubit Pauli
 * measurements and outcome-conditioned Pauli feedforward.
 *
 * X-measurement outcome 0 is the |+> eigenstate. Feedforward Paulis are
 * applied to the state; the optional frame mode defers them until the next
 * entangling step or the end of the program and must agree exactly.
 */
#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "core_state.hpp"
#include "gates.hpp"

namespace owqc {

// --------------------------------------------------------------------------
// Pauli strings
// --------------------------------------------------------------------------

/// i^phase * prod_q P_q with P in {I, X, Y, Z}.
class PauliString {
  public:
    PauliString() = default;
    PauliString(int phase, std::map<QubitIndex, char> ops) : phase_(((phase % 4) + 4) % 4) {
        for (auto [q, p] : ops) set(q, p);
    }

    static PauliString identity() { return {}; }
    static PauliString single(char p, QubitIndex q, int phase = 0) { return {phase, {{q, p}}}; }

    int phase() const { return phase_; }
    const std::map<QubitIndex, char> &ops() const { return ops_; }
    char at(QubitIndex q) const {
        auto it = ops_.find(q);
        return it == ops_.end() ? 'I' : it->second;
    }
    bool is_identity() const { return ops_.empty(); }

    PauliString operator*(const PauliString &rhs) const {
        PauliString out = *this;
        out.phase_ = (phase_ + rhs.phase_) % 4;
        for (auto [q, p] : rhs.ops_) {
            auto [ph, r] = multiply_single(out.at(q), p);
            out.phase_ = (out.phase_ + ph) % 4;
            out.ops_.erase(q);
            if (r != 'I') out.ops_[q] = r;
        }
        return out;
    }

    PauliString pow(int e) const {
        if (e < 0) throw ArgumentError("PauliString::pow: negative exponent");
        PauliString out;
        for (int i = 0; i < e; ++i) out = out * *this;
        return out;
    }

    bool operator==(const PauliString &) const = default;

    /// Applies the operator (the identity phase included) to `state`.
    void apply(StateVector &state) const {
        for (auto [q, p] : ops_) {
            switch (p) {
            case 'X': state.apply(pauli_x(q)); break;
            case 'Y': state.apply(pauli_y(q)); break;
            case 'Z': state.apply(pauli_z(q)); break;
            default: break;
            }
        }
        static const std::array<cplx, 4> powers{cplx{1, 0}, cplx{0, 1}, cplx{-1, 0}, cplx{0, -1}};
        if (phase_ != 0) state.scale(powers[phase_]);
    }

    bool commutes_with(char p, QubitIndex q) const {
        const char mine = at(q);
        return mine == 'I' || p == 'I' || mine == p;
    }

    /// "+X0 Z2", "-iY1", "+I".
    std::string to_string() const {
        static const std::array<const char *, 4> prefix{"+", "+i", "-", "-i"};
        std::string s = prefix[phase_];
        if (ops_.empty()) return s + "I";
        bool first = true;
        for (auto [q, p] : ops_) {
            if (!first) s += ' ';
            s += p + std::to_string(q);
            first = false;
        }
        return s;
    }

    static PauliString parse(const std::string &text) {
        std::size_t i = 0;
        auto skip = [&] {
            while (i < text.size() && (text[i] == ' ' || text[i] == '*')) ++i;
        };
        skip();
        int phase = 0;
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
            phase = text[i] == '-' ? 2 : 0;
            ++i;
        }
        if (i < text.size() && text[i] == 'i') {
            phase += 1;
            ++i;
        }
        PauliString out(phase, {});
        skip();
        if (i < text.size() && text[i] == 'I' && (i + 1 == text.size() || !std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
            ++i;
            skip();
        }
        while (i < text.size()) {
            const char p = text[i];
            if (p != 'X' && p != 'Y' && p != 'Z' && p != 'I') throw ArgumentError("PauliString: bad token in '" + text + "'");
            ++i;
            std::size_t start = i;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
            if (start == i) throw ArgumentError("PauliString: missing qubit index in '" + text + "'");
            out = out * single(p, std::stoi(text.substr(start, i - start)));
            skip();
        }
        return out;
    }

  private:
    void set(QubitIndex q, char p) {
        if (q < 0) throw ArgumentError("PauliString: negative qubit");
        if (p != 'I' && p != 'X' && p != 'Y' && p != 'Z') throw ArgumentError("PauliString: unknown Pauli");
        if (p == 'I') {
            ops_.erase(q);
        } else {
            ops_[q] = p;
        }
    }

    /// a*b = i^phase * r
    static std::pair<int, char> multiply_single(char a, char b) {
        if (a == 'I') return {0, b};
        if (b == 'I') return {0, a};
        if (a == b) return {0, 'I'};
        const std::string cyc = "XYZ";
        const auto ia = cyc.find(a), ib = cyc.find(b);
        const char r = cyc[3 - ia - ib];
        return {(ib == (ia + 1) % 3) ? 1 : 3, r};
    }

    int phase_ = 0;
    std::map<QubitIndex, char> ops_;
};

// --------------------------------------------------------------------------
// Programs
// --------------------------------------------------------------------------

/// Outcome-conditioned correction. `inputs` are measurement ordinals (0 =
/// first measurement of the program); `table[b]` is the Pauli for outcome
/// bits b with inputs[0] as the most significant bit.
struct FeedforwardRule {
    std::vector<int> inputs;
    std::vector<PauliString> table;

    template <class F> static FeedforwardRule from_function(std::vector<int> inputs, F &&f) {
        FeedforwardRule r;
        r.inputs = std::move(inputs);
        const std::size_t k = r.inputs.size();
        for (std::size_t b = 0; b < (std::size_t{1} << k); ++b) {
            std::vector<int> bits(k);
            for (std::size_t i = 0; i < k; ++i) bits[i] = (b >> (k - 1 - i)) & 1;
            r.table.push_back(f(bits));
        }
        return r;
    }

    const PauliString &select(const std::vector<int> &outcomes) const {
        std::size_t b = 0;
        for (int in : inputs) b = (b << 1) | static_cast<std::size_t>(outcomes.at(in));
        return table.at(b);
    }
};

struct EntangleStep {
    GateSpec gate;
};
struct MeasureStep {
    QubitIndex qubit = 0;
    Basis basis = Basis::X;
};
struct FeedforwardStep {
    FeedforwardRule rule;
};
using ProgramStep = std::variant<EntangleStep, MeasureStep, FeedforwardStep>;

enum class RoleKind { control_in, target_in, target_out, ancilla };

inline std::string to_string(RoleKind k) {
    switch (k) {
    case RoleKind::control_in: return "control_in";
    case RoleKind::target_in: return "target_in";
    case RoleKind::target_out: return "target_out";
    case RoleKind::ancilla: return "ancilla";
    }
    return "?";
}

inline RoleKind role_kind_from_string(const std::string &s) {
    if (s == "control_in") return RoleKind::control_in;
    if (s == "target_in") return RoleKind::target_in;
    if (s == "target_out") return RoleKind::target_out;
    if (s == "ancilla") return RoleKind::ancilla;
    throw ArgumentError("unknown qubit role '" + s + "'");
}

/// Input roles carry data; target_out and ancilla qubits start in `init`.
struct QubitRole {
    RoleKind kind = RoleKind::ancilla;
    ProductLabel init = ProductLabel::zero;
    bool is_input() const { return kind == RoleKind::control_in || kind == RoleKind::target_in; }
};

/// Logical wires: inputs and outputs are listed in the ideal gate's qubit
/// order (first = most significant).
struct LogicalInterface {
    std::vector<QubitIndex> inputs;
    std::vector<QubitIndex> outputs;
    CMatrix ideal;
};

struct MbqcProgram {
    std::string name;
    int n_qubits = 0;
    std::vector<QubitRole> roles;
    std::vector<ProgramStep> steps;
    std::optional<LogicalInterface> logical;

    std::size_t count_entangling() const { return count<EntangleStep>(); }
    std::size_t count_measurements() const { return count<MeasureStep>(); }
    std::size_t count_feedforward() const { return count<FeedforwardStep>(); }

  private:
    template <class T> std::size_t count() const {
        std::size_t n = 0;
        for (const auto &s : steps) n += std::holds_alternative<T>(s) ? 1 : 0;
        return n;
    }
};

inline void validate(const MbqcProgram &p) {
    if (p.n_qubits < 1 || p.n_qubits > kMaxQubits) throw ValidationError("program: qubit count out of range");
    if (p.roles.size() != static_cast<std::size_t>(p.n_qubits)) throw ValidationError("program: one role per qubit required");
    auto check_q = [&](QubitIndex q, const char *what) {
        if (q < 0 || q >= p.n_qubits) throw ValidationError(std::string("program: ") + what + " qubit out of range");
    };
    std::vector<bool> measured(p.n_qubits, false);
    int n_meas = 0;
    for (const auto &step : p.steps) {
        if (const auto *e = std::get_if<EntangleStep>(&step)) {
            for (QubitIndex q : e->gate.targets()) check_q(q, "gate");
        } else if (const auto *m = std::get_if<MeasureStep>(&step)) {
            check_q(m->qubit, "measured");
            if (m->basis == Basis::Custom) throw ValidationError("program: only Pauli measurements are supported");
            if (measured[m->qubit]) throw ValidationError("program: qubit " + std::to_string(m->qubit) + " measured twice");
            measured[m->qubit] = true;
            ++n_meas;
        } else {
            const auto &rule = std::get<FeedforwardStep>(step).rule;
            for (int in : rule.inputs) {
                if (in < 0 || in >= n_meas) throw ValidationError("program: feedforward references an unrecorded outcome");
            }
            if (rule.table.size() != (std::size_t{1} << rule.inputs.size())) {
                throw ValidationError("program: feedforward table is not total over its inputs");
            }
            for (const auto &ps : rule.table) {
                for (auto [q, c] : ps.ops()) check_q(q, "feedforward");
            }
        }
    }
    if (p.logical) {
        const auto &li = *p.logical;
        if (li.inputs.size() != li.outputs.size() || li.inputs.empty() || li.inputs.size() > 3) {
            throw ValidationError("program: logical interface needs 1..3 matching input/output wires");
        }
        for (QubitIndex q : li.inputs) check_q(q, "logical input");
        for (QubitIndex q : li.outputs) check_q(q, "logical output");
        const Eigen::Index d = Eigen::Index{1} << li.inputs.size();
        if (li.ideal.rows() != d || li.ideal.cols() != d || !is_unitary(li.ideal, 1e-9)) {
            throw ValidationError("program: ideal logical gate has the wrong shape or is not unitary");
        }
    }
}

/// Logical input wires; with no interface, the qubits with input roles.
inline std::vector<QubitIndex> input_wires(const MbqcProgram &p) {
    if (p.logical) return p.logical->inputs;
    std::vector<QubitIndex> out;
    for (QubitIndex q = 0; q < p.n_qubits; ++q) {
        if (p.roles[q].is_input()) out.push_back(q);
    }
    return out;
}

/**
 * Builds the full register state: `logical` spans the input wires (in
 * interface order) followed by `logical.n_qubits() - inputs` spectator
 * qubits, which are appended after the program qubits. Non-input qubits are
 * prepared in their role's initial label.
 */
inline StateVector embed_logical(const MbqcProgram &p, const StateVector &logical) {
    const std::vector<QubitIndex> ins = input_wires(p);
    const int k = static_cast<int>(ins.size());
    const int extra = logical.n_qubits() - k;
    if (extra < 0) throw ArgumentError("embed_logical: logical state has fewer qubits than input wires");
    StateVector full(p.n_qubits + extra);
    std::vector<bool> is_in(p.n_qubits, false);
    for (QubitIndex q : ins) is_in[q] = true;
    for (std::size_t i = 0; i < full.dim(); ++i) {
        std::size_t li = 0;
        for (QubitIndex q : ins) li = (li << 1) | static_cast<std::size_t>(full.bit(i, q));
        for (int e = 0; e < extra; ++e) li = (li << 1) | static_cast<std::size_t>(full.bit(i, p.n_qubits + e));
        cplx amp = logical[li];
        for (QubitIndex q = 0; q < p.n_qubits && amp != cplx{0.0}; ++q) {
            if (!is_in[q]) amp *= label_ket(p.roles[q].init)[full.bit(i, q)];
        }
        full[i] = amp;
    }
    return full;
}

// --------------------------------------------------------------------------
// Execution
// --------------------------------------------------------------------------

enum class FeedforwardMode { physical, frame };

struct BranchResult {
    std::vector<int> outcomes;
    double probability = 1.0;
    StateVector post_state{1};
    std::optional<double> logical_fidelity;
    bool zero_probability = false;
};

namespace detail {

/// Outcome policy: sampled, forced (throws on impossible branches), or
/// forced without renormalisation (for branch enumeration and tomography).
struct OutcomePolicy {
    Rng *rng = nullptr;
    const std::vector<int> *forced = nullptr;
    bool unnormalized = false;
};

inline BranchResult execute(const MbqcProgram &p, StateVector state, const OutcomePolicy &policy, FeedforwardMode mode) {
    validate(p);
    if (state.n_qubits() < p.n_qubits) throw ArgumentError("run_program: input state is smaller than the program");
    if (policy.forced && policy.forced->size() != p.count_measurements()) {
        throw ArgumentError("run_program: forced outcome list length must equal the measurement count");
    }
    BranchResult res;
    PauliString frame;
    auto flush = [&] {
        frame.apply(state);
        frame = PauliString{};
    };
    for (const auto &step : p.steps) {
        if (const auto *e = std::get_if<EntangleStep>(&step)) {
            flush();
            state.apply(e->gate);
        } else if (const auto *m = std::get_if<MeasureStep>(&step)) {
            const char pauli = m->basis == Basis::X ? 'X' : m->basis == Basis::Y ? 'Y' : 'Z';
            // A pending frame Pauli that anticommutes with the observable
            // flips the physical outcome relative to the corrected one.
            const int flip = frame.commutes_with(pauli, m->qubit) ? 0 : 1;
            const MeasurementBasis basis = MeasurementBasis::of(m->basis);
            int outcome = 0;
            if (policy.unnormalized) {
                outcome = (*policy.forced)[res.outcomes.size()];
                project(state, m->qubit, basis, outcome ^ flip);
            } else if (policy.forced) {
                outcome = (*policy.forced)[res.outcomes.size()];
                const auto rec = measure_inplace(state, m->qubit, basis, Forced{outcome ^ flip});
                res.probability *= rec.probability;
            } else {
                const auto rec = measure_inplace(state, m->qubit, basis, std::ref(*policy.rng));
                outcome = rec.outcome ^ flip;
                res.probability *= rec.probability;
            }
            res.outcomes.push_back(outcome);
        } else {
            const PauliString &corr = std::get<FeedforwardStep>(step).rule.select(res.outcomes);
            if (mode == FeedforwardMode::physical) {
                corr.apply(state);
            } else {
                frame = corr * frame;
            }
        }
    }
    flush();
    if (policy.unnormalized) {
        res.probability = state.norm_squared();
        res.zero_probability = res.probability <= 1e-12;
        if (!res.zero_probability) state.normalize();
    }
    res.post_state = std::move(state);
    return res;
}

} // namespace detail

/// Runs `program` on a register of at least n_qubits qubits; extra qubits
/// are spectators untouched by the program.
inline BranchResult run_program(const MbqcProgram &p, const StateVector &input, Rng &rng,
                                FeedforwardMode mode = FeedforwardMode::physical) {
    return detail::execute(p, input, {&rng, nullptr, false}, mode);
}

inline BranchResult run_program(const MbqcProgram &p, const StateVector &input, const std::vector<int> &forced,
                                FeedforwardMode mode = FeedforwardMode::physical) {
    return detail::execute(p, input, {nullptr, &forced, false}, mode);
}

/// Ideal output: the interface gate on the logical qubits, spectators idle.
inline StateVector ideal_logical_output(const MbqcProgram &p, const StateVector &logical) {
    if (!p.logical) throw ArgumentError("program has no logical interface");
    const int k = static_cast<int>(p.logical->inputs.size());
    const int extra = logical.n_qubits() - k;
    CMatrix u = p.logical->ideal;
    if (extra > 0) u = kron(u, CMatrix::Identity(Eigen::Index{1} << extra, Eigen::Index{1} << extra));
    const CVector out = u * logical.to_eigen();
    return StateVector::from_amplitudes(std::vector<cplx>(out.data(), out.data() + out.size()), false);
}

/// <ideal| rho_out |ideal> with rho_out the reduced state on the interface
/// outputs plus spectators.
inline double logical_fidelity(const MbqcProgram &p, const StateVector &post, const StateVector &ideal) {
    std::vector<QubitIndex> keep = p.logical->outputs;
    for (int q = p.n_qubits; q < post.n_qubits(); ++q) keep.push_back(q);
    if (static_cast<int>(keep.size()) != ideal.n_qubits()) throw ArgumentError("logical_fidelity: size mismatch");
    const CVector v = ideal.to_eigen();
    const DensityMatrix rho = reduced_density(post, keep);
    return std::real(v.dot(rho.entries * v));
}

/// Embeds `logical`, runs with forced outcomes and scores the result.
inline BranchResult run_logical(const MbqcProgram &p, const StateVector &logical, const std::vector<int> &forced,
                                FeedforwardMode mode = FeedforwardMode::physical) {
    BranchResult r = run_program(p, embed_logical(p, logical), forced, mode);
    r.logical_fidelity = logical_fidelity(p, r.post_state, ideal_logical_output(p, logical));
    return r;
}

inline constexpr std::size_t kMaxEnumeratedMeasurements = 12;

/// One result per outcome string, in ascending binary order; the fidelity is
/// filled when `ideal` is given and the branch is possible.
inline std::vector<BranchResult> enumerate_branches(const MbqcProgram &p, const StateVector &input,
                                                    const std::optional<StateVector> &ideal = std::nullopt,
                                                    FeedforwardMode mode = FeedforwardMode::physical) {
    const std::size_t m = p.count_measurements();
    if (m > kMaxEnumeratedMeasurements) {
        throw CapacityError("enumerate_branches: " + std::to_string(m) + " measurements exceed the limit of " +
                            std::to_string(kMaxEnumeratedMeasurements));
    }
    std::vector<BranchResult> out;
    for (std::size_t b = 0; b < (std::size_t{1} << m); ++b) {
        std::vector<int> bits(m);
        for (std::size_t i = 0; i < m; ++i) bits[i] = (b >> (m - 1 - i)) & 1;
        BranchResult r = detail::execute(p, input, {nullptr, &bits, true}, mode);
        if (ideal && !r.zero_probability) r.logical_fidelity = logical_fidelity(p, r.post_state, *ideal);
        out.push_back(std::move(r));
    }
    return out;
}

inline std::vector<BranchResult> enumerate_logical(const MbqcProgram &p, const StateVector &logical,
                                                   FeedforwardMode mode = FeedforwardMode::physical) {
    return enumerate_branches(p, embed_logical(p, logical), ideal_logical_output(p, logical), mode);
}

// --------------------------------------------------------------------------
// The two C-NOT protocols
// --------------------------------------------------------------------------

inline CMatrix cnot_matrix() {
    CMatrix m = CMatrix::Zero(4, 4);
    m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
    return m;
}

/**
 * Four-qubit protocol. Qubit 0 carries the target input, qubit 3 the
 * control; ancilla 1 starts in |->, ancilla 2 in |+> and becomes the target
 * output. Qubits 0 and 1 are measured in X with outcomes l and m, then
 * (Z2 Z3)^l (X2)^m is applied.
 */
inline MbqcProgram cnot_standard_program() {
    MbqcProgram p;
    p.name = "cnot_standard";
    p.n_qubits = 4;
    p.roles = {{RoleKind::target_in, ProductLabel::zero},
               {RoleKind::ancilla, ProductLabel::minus},
               {RoleKind::target_out, ProductLabel::plus},
               {RoleKind::control_in, ProductLabel::zero}};
    p.steps.push_back(EntangleStep{cz_xmon(0, 1)});
    p.steps.push_back(EntangleStep{cz_xmon(3, 1)});
    p.steps.push_back(EntangleStep{cz_xmon(1, 2)});
    p.steps.push_back(MeasureStep{0, Basis::X});
    p.steps.push_back(MeasureStep{1, Basis::X});
    p.steps.push_back(FeedforwardStep{FeedforwardRule::from_function({0, 1}, [](const std::vector<int> &b) {
        const PauliString zz = PauliString::single('Z', 2) * PauliString::single('Z', 3);
        return zz.pow(b[0]) * PauliString::single('X', 2).pow(b[1]);
    })});
    p.logical = LogicalInterface{{3, 0}, {3, 2}, cnot_matrix()};
    return p;
}

/**
 * Three-qubit protocol: U^Bell on (target, ancilla |0>), then the Xmon CZ
 * from the control onto the ancilla (the order matters), H on the ancilla,
 * X-measurement of the target input (outcome s) and
 * (-X1 Z2)^(s+1) (-Z1)^s.
 */
inline MbqcProgram cnot_efficient_program(bool swap_entangling_order = false) {
    MbqcProgram p;
    p.name = swap_entangling_order ? "cnot_efficient_swapped" : "cnot_efficient";
    p.n_qubits = 3;
    p.roles = {{RoleKind::target_in, ProductLabel::zero},
               {RoleKind::target_out, ProductLabel::zero},
               {RoleKind::control_in, ProductLabel::zero}};
    EntangleStep bell{u_bell_matrix(0, 1)}, cz{cz_xmon(2, 1)};
    p.steps.push_back(swap_entangling_order ? cz : bell);
    p.steps.push_back(swap_entangling_order ? bell : cz);
    p.steps.push_back(EntangleStep{hadamard(1)});
    p.steps.push_back(MeasureStep{0, Basis::X});
    p.steps.push_back(FeedforwardStep{FeedforwardRule::from_function({0}, [](const std::vector<int> &b) {
        const PauliString a = PauliString(2, {{1, 'X'}, {2, 'Z'}});
        const PauliString c = PauliString(2, {{1, 'Z'}});
        return a.pow(b[0] + 1) * c.pow(b[0]);
    })});
    p.logical = LogicalInterface{{2, 0}, {2, 1}, cnot_matrix()};
    return p;
}

/// Program with `extra` idle spectator qubits appended; the logical
/// interface is unchanged.
inline MbqcProgram extended(MbqcProgram p, int extra) {
    if (extra < 0) throw ArgumentError("extended: negative spectator count");
    p.n_qubits += extra;
    for (int i = 0; i < extra; ++i) p.roles.push_back({RoleKind::ancilla, ProductLabel::zero});
    return p;
}

// --------------------------------------------------------------------------
// Process tomography
// --------------------------------------------------------------------------

struct ProcessMatrix {
    int k = 0;         ///< logical qubits
    CMatrix choi;      ///< 4^k x 4^k, trace 1, input factor first
    double hermiticity_error() const { return (choi - choi.adjoint()).cwiseAbs().maxCoeff(); }
    double trace_error() const { return std::abs(choi.trace() - cplx{1.0}); }
    double min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(choi);
        return es.eigenvalues().minCoeff();
    }
    /// max |Tr_out J - I/d|, the trace-preservation residual.
    double trace_preservation_error() const {
        const Eigen::Index d = Eigen::Index{1} << k;
        CMatrix t = CMatrix::Zero(d, d);
        for (Eigen::Index a = 0; a < d; ++a) {
            for (Eigen::Index b = 0; b < d; ++b) t(a, b) = choi.block(a * d, b * d, d, d).trace();
        }
        return (t - CMatrix::Identity(d, d) / static_cast<double>(d)).cwiseAbs().maxCoeff();
    }
};

/// Choi matrix (1/d) sum_ab |a><b| (x) E(|a><b|) for a unitary.
inline ProcessMatrix choi_of_unitary(const CMatrix &u) {
    const Eigen::Index d = u.rows();
    CVector omega = CVector::Zero(d * d);
    for (Eigen::Index a = 0; a < d; ++a) omega.segment(a * d, d) = u.col(a);
    omega /= std::sqrt(static_cast<double>(d));
    int k = 0;
    while ((Eigen::Index{1} << k) < d) ++k;
    return {k, omega * omega.adjoint()};
}

/// <Phi_U| J |Phi_U>
inline double process_fidelity(const ProcessMatrix &j, const CMatrix &u) {
    const ProcessMatrix ideal = choi_of_unitary(u);
    if (ideal.choi.rows() != j.choi.rows()) throw ArgumentError("process_fidelity: dimension mismatch");
    return std::real((ideal.choi * j.choi).trace());
}

/**
 * Choi matrix of the logical channel from `logical_in` to `logical_out`,
 * summed over all measurement branches. Non-input qubits start in their
 * role's label; everything outside `logical_out` is traced out.
 */
inline ProcessMatrix process_tomography(const MbqcProgram &p, const std::vector<QubitIndex> &logical_in,
                                        const std::vector<QubitIndex> &logical_out) {
    if (logical_in.size() != logical_out.size() || logical_in.size() > 3) {
        throw ArgumentError("process_tomography: need |in| = |out| <= 3");
    }
    MbqcProgram q = p;
    q.logical = LogicalInterface{logical_in, logical_out,
                                 CMatrix::Identity(Eigen::Index{1} << logical_in.size(), Eigen::Index{1} << logical_in.size())};
    if (logical_in.empty()) return {0, CMatrix::Identity(1, 1)};
    validate(q);
    const int k = static_cast<int>(logical_in.size());
    const Eigen::Index d = Eigen::Index{1} << k;
    const std::size_t m = q.count_measurements();
    if (m > kMaxEnumeratedMeasurements) throw CapacityError("process_tomography: too many measurements");
    CMatrix choi = CMatrix::Zero(d * d, d * d);
    for (std::size_t b = 0; b < (std::size_t{1} << m); ++b) {
        std::vector<int> bits(m);
        for (std::size_t i = 0; i < m; ++i) bits[i] = (b >> (m - 1 - i)) & 1;
        // Kraus action of this branch on each logical basis vector, as an
        // (out x rest) matrix.
        std::vector<CMatrix> blocks;
        for (Eigen::Index a = 0; a < d; ++a) {
            StateVector basis_in(k);
            basis_in[0] = 0.0;
            basis_in[static_cast<std::size_t>(a)] = 1.0;
            BranchResult r = detail::execute(q, embed_logical(q, basis_in), {nullptr, &bits, true}, FeedforwardMode::physical);
            StateVector raw = std::move(r.post_state);
            if (!r.zero_probability) raw.scale(std::sqrt(r.probability));
            else raw.scale(0.0);
            blocks.push_back(bipartition_matrix(raw, logical_out));
        }
        for (Eigen::Index a = 0; a < d; ++a) {
            for (Eigen::Index c = 0; c < d; ++c) choi.block(a * d, c * d, d, d) += blocks[a] * blocks[c].adjoint();
        }
    }
    choi /= static_cast<double>(d);
    return {k, choi};
}

// --------------------------------------------------------------------------
// Serialisation
// --------------------------------------------------------------------------

inline nlohmann::json to_json(const MbqcProgram &p) {
    nlohmann::json roles = nlohmann::json::array();
    for (const auto &r : p.roles) {
        nlohmann::json jr{{"role", to_string(r.kind)}};
        if (!r.is_input()) jr["init"] = to_string(r.init);
        roles.push_back(jr);
    }
    nlohmann::json steps = nlohmann::json::array();
    for (const auto &s : p.steps) {
        if (const auto *e = std::get_if<EntangleStep>(&s)) {
            steps.push_back({{"type", "entangle"}, {"gate", gate_to_json(e->gate)}});
        } else if (const auto *m = std::get_if<MeasureStep>(&s)) {
            steps.push_back({{"type", "measure"}, {"qubit", m->qubit}, {"basis", to_string(m->basis)}});
        } else {
            const auto &rule = std::get<FeedforwardStep>(s).rule;
            nlohmann::json table = nlohmann::json::array();
            for (const auto &ps : rule.table) table.push_back(ps.to_string());
            steps.push_back({{"type", "feedforward"}, {"inputs", rule.inputs}, {"table", table}});
        }
    }
    nlohmann::json j{{"name", p.name}, {"n", p.n_qubits}, {"roles", roles}, {"steps", steps}};
    if (p.logical) {
        j["logical"] = {{"inputs", p.logical->inputs},
                        {"outputs", p.logical->outputs},
                        {"ideal", matrix_to_json(p.logical->ideal)}};
    }
    return j;
}

inline MbqcProgram program_from_json(const nlohmann::json &j) {
    try {
        MbqcProgram p;
        p.name = j.value("name", "");
        p.n_qubits = j.at("n").get<int>();
        for (const auto &jr : j.at("roles")) {
            QubitRole r;
            r.kind = role_kind_from_string(jr.at("role").get<std::string>());
            if (jr.contains("init")) r.init = product_label_from_string(jr.at("init").get<std::string>());
            p.roles.push_back(r);
        }
        for (const auto &js : j.at("steps")) {
            const std::string type = js.at("type").get<std::string>();
            if (type == "entangle") {
                p.steps.push_back(EntangleStep{gate_from_json(js.at("gate"))});
            } else if (type == "measure") {
                p.steps.push_back(MeasureStep{js.at("qubit").get<int>(), basis_from_string(js.at("basis").get<std::string>())});
            } else if (type == "feedforward") {
                FeedforwardRule rule;
                rule.inputs = js.at("inputs").get<std::vector<int>>();
                for (const auto &t : js.at("table")) rule.table.push_back(PauliString::parse(t.get<std::string>()));
                p.steps.push_back(FeedforwardStep{rule});
            } else {
                throw ValidationError("program: unknown step type '" + type + "'");
            }
        }
        if (j.contains("logical")) {
            const auto &jl = j.at("logical");
            p.logical = LogicalInterface{jl.at("inputs").get<std::vector<int>>(), jl.at("outputs").get<std::vector<int>>(),
                                         matrix_from_json(jl.at("ideal"))};
        }
        validate(p);
        return p;
    } catch (const nlohmann::json::exception &e) {
        throw ValidationError(std::string("program JSON: ") + e.what());
    }
}

/// CSV rows: label, outcome bits, probability, fidelity, zero-probability flag.
inline std::string branches_to_csv(const std::vector<std::pair<std::string, BranchResult>> &rows) {
    std::ostringstream os;
    os << "input,outcomes,probability,fidelity,zero_probability\n";
    os.precision(12);
    for (const auto &[label, r] : rows) {
        std::string bits;
        for (int b : r.outcomes) bits += static_cast<char>('0' + b);
        os << label << ',' << (bits.empty() ? "-" : bits) << ',' << r.probability << ',';
        if (r.logical_fidelity) os << *r.logical_fidelity;
        os << ',' << (r.zero_probability ? 1 : 0) << '\n';
    }
    return os.str();
}

} // namespace owqc
