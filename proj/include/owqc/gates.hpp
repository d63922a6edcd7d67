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
 * Gate library in the Xmon sign convention.
 *
 * The Bell-type entangler U^Bell is defined by its action on the four
 * computational basis states (u_bell_matrix). Two further constructions,
 * the exponential of the XY exchange Hamiltonian and a {H, CZ, Z}
 * circuit, are checked against that matrix and never the other way round.
 */
#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "core_state.hpp"

namespace owqc {

// --------------------------------------------------------------------------
// Elementary gates
// --------------------------------------------------------------------------

/// Xmon controlled phase: diag(-1, 1, 1, 1), i.e. |00> -> -|00>.
inline GateSpec cz_xmon(QubitIndex a = 0, QubitIndex b = 1) {
    CMatrix m = CMatrix::Identity(4, 4);
    m(0, 0) = -1.0;
    return {"cz_xmon", {a, b}, m};
}

inline GateSpec hadamard(QubitIndex q = 0) { return {"h", {q}, pauli_matrix::hadamard()}; }
inline GateSpec pauli_x(QubitIndex q = 0) { return {"x", {q}, pauli_matrix::x()}; }
inline GateSpec pauli_y(QubitIndex q = 0) { return {"y", {q}, pauli_matrix::y()}; }
inline GateSpec pauli_z(QubitIndex q = 0) { return {"z", {q}, pauli_matrix::z()}; }

/// The normative U^Bell: columns are the images of |00>, |01>, |10>, |11>.
inline CMatrix u_bell_unitary() {
    CMatrix m(4, 4);
    // clang-format off
    m << 1, 0,  0, -1,
         0, 1, -1,  0,
         0, 1,  1,  0,
         1, 0,  0,  1;
    // clang-format on
    return m * kInvSqrt2;
}

inline GateSpec u_bell_matrix(QubitIndex j = 0, QubitIndex k = 1) { return {"u_bell", {j, k}, u_bell_unitary()}; }

/// Looks up a named gate; used by program deserialisation.
inline GateSpec named_gate(const std::string &name, const std::vector<QubitIndex> &targets) {
    auto need = [&](std::size_t n) {
        if (targets.size() != n) throw ArgumentError("gate '" + name + "' expects " + std::to_string(n) + " targets");
    };
    if (name == "cz_xmon") {
        need(2);
        return cz_xmon(targets[0], targets[1]);
    }
    if (name == "u_bell") {
        need(2);
        return u_bell_matrix(targets[0], targets[1]);
    }
    need(1);
    if (name == "h") return hadamard(targets[0]);
    if (name == "x") return pauli_x(targets[0]);
    if (name == "y") return pauli_y(targets[0]);
    if (name == "z") return pauli_z(targets[0]);
    throw ArgumentError("unknown gate '" + name + "'");
}

// --------------------------------------------------------------------------
// U^Bell from the XY exchange Hamiltonian
// --------------------------------------------------------------------------

struct XYHamiltonianParams {
    double J1 = 1.25;
    double J2 = 1.0;
    double xi_tau = std::numbers::pi;
};

enum class QubitOrder { jk, kj };
enum class J2Sign { standard, flipped };
enum class SigmaYSign { standard, flipped };

/**
 * @brief Resolves the implicit conventions of J1 s^x_j s^y_k - J2 s^y_j s^x_k.
 *
 * `order == kj` places the first Pauli of each product on qubit k,
 * `j2 == flipped` turns the minus between the terms into a plus and
 * `sigma_y == flipped` uses -s^y for every s^y.
 */
struct ConventionChoice {
    QubitOrder order = QubitOrder::jk;
    J2Sign j2 = J2Sign::standard;
    SigmaYSign sigma_y = SigmaYSign::standard;

    std::string label() const {
        return std::string(order == QubitOrder::jk ? "order=jk" : "order=kj") +
               (j2 == J2Sign::standard ? ",J2=-" : ",J2=+") +
               (sigma_y == SigmaYSign::standard ? ",sy=+" : ",sy=-");
    }

    bool operator==(const ConventionChoice &) const = default;

    /// All eight conventions, direct convention first.
    static std::vector<ConventionChoice> all() {
        std::vector<ConventionChoice> out;
        for (QubitOrder o : {QubitOrder::jk, QubitOrder::kj})
            for (J2Sign s : {J2Sign::standard, J2Sign::flipped})
                for (SigmaYSign y : {SigmaYSign::standard, SigmaYSign::flipped}) out.push_back({o, s, y});
        return out;
    }
};

inline nlohmann::json to_json(const ConventionChoice &c) {
    return {{"qubit_order", c.order == QubitOrder::jk ? "jk" : "kj"},
            {"j2_sign", c.j2 == J2Sign::standard ? "standard" : "flipped"},
            {"sigma_y_sign", c.sigma_y == SigmaYSign::standard ? "standard" : "flipped"},
            {"label", c.label()}};
}

inline ConventionChoice convention_from_json(const nlohmann::json &j) {
    ConventionChoice c;
    c.order = j.at("qubit_order").get<std::string>() == "kj" ? QubitOrder::kj : QubitOrder::jk;
    c.j2 = j.at("j2_sign").get<std::string>() == "flipped" ? J2Sign::flipped : J2Sign::standard;
    c.sigma_y = j.at("sigma_y_sign").get<std::string>() == "flipped" ? SigmaYSign::flipped : SigmaYSign::standard;
    return c;
}

/// The dimensionless generator G such that U = exp(-i xi_tau G).
inline CMatrix xy_generator(double J1, double J2, const ConventionChoice &c) {
    const CMatrix sy = (c.sigma_y == SigmaYSign::standard ? 1.0 : -1.0) * pauli_matrix::y();
    const CMatrix sx = pauli_matrix::x();
    const CMatrix xy = c.order == QubitOrder::jk ? kron(sx, sy) : kron(sy, sx);
    const CMatrix yx = c.order == QubitOrder::jk ? kron(sy, sx) : kron(sx, sy);
    const double s2 = c.j2 == J2Sign::standard ? -1.0 : 1.0;
    return J1 * xy + s2 * J2 * yx;
}

inline GateSpec u_bell_from_xy(const XYHamiltonianParams &p, const ConventionChoice &c, QubitIndex j = 0,
                               QubitIndex k = 1) {
    if (!std::isfinite(p.J1) || !std::isfinite(p.J2) || !std::isfinite(p.xi_tau)) {
        throw ArgumentError("u_bell_from_xy: parameters must be finite");
    }
    return {"u_bell_xy", {j, k}, expm_hermitian(xy_generator(p.J1, p.J2, c), p.xi_tau)};
}

/// Max deviation on the {|00>,|11>} block and the {|01>,|10>} block, each
/// after its own optimal phase alignment.
inline std::pair<double, double> parity_block_deviations(const CMatrix &a, const CMatrix &b) {
    auto block = [](const CMatrix &m, std::array<int, 2> idx) {
        CMatrix out(2, 2);
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) out(r, c) = m(idx[r], idx[c]);
        return out;
    };
    return {phase_aligned_deviation(block(a, {0, 3}), block(b, {0, 3})),
            phase_aligned_deviation(block(a, {1, 2}), block(b, {1, 2}))};
}

struct ConventionDeviation {
    ConventionChoice choice;
    double deviation = 0.0;        ///< whole matrix, global phase removed
    double even_block_deviation = 0.0; ///< {|00>,|11>} block
    double odd_block_deviation = 0.0;  ///< {|01>,|10>} block
    bool matches = false;
};

struct ConventionSearchReport {
    XYHamiltonianParams params;
    std::vector<ConventionDeviation> table;
    std::optional<ConventionChoice> selected; ///< first matching convention
    ConventionChoice minimal;                 ///< smallest deviation overall

    std::size_t match_count() const {
        return static_cast<std::size_t>(std::count_if(table.begin(), table.end(), [](auto &e) { return e.matches; }));
    }
};

inline ConventionSearchReport u_bell_convention_search(const XYHamiltonianParams &params = {},
                                                       double tol = kPhaseTol) {
    ConventionSearchReport rep;
    rep.params = params;
    const CMatrix target = u_bell_unitary();
    double best = INFINITY;
    for (const ConventionChoice &c : ConventionChoice::all()) {
        const CMatrix u = u_bell_from_xy(params, c).matrix();
        ConventionDeviation row;
        row.choice = c;
        row.deviation = phase_aligned_deviation(u, target);
        std::tie(row.even_block_deviation, row.odd_block_deviation) = parity_block_deviations(u, target);
        row.matches = row.deviation < tol;
        if (row.matches && !rep.selected) rep.selected = c;
        if (row.deviation < best) {
            best = row.deviation;
            rep.minimal = c;
        }
        rep.table.push_back(row);
    }
    return rep;
}

/// Convention used wherever the artifact needs one: the first match of the
/// search at the reference parameters, or the closest one if none match.
inline ConventionChoice selected_convention() {
    static const ConventionChoice choice = [] {
        const auto rep = u_bell_convention_search();
        return rep.selected.value_or(rep.minimal);
    }();
    return choice;
}

inline nlohmann::json to_json(const ConventionSearchReport &r) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto &e : r.table) {
        rows.push_back({{"convention", to_json(e.choice)},
                        {"deviation", e.deviation},
                        {"even_block_deviation", e.even_block_deviation},
                        {"odd_block_deviation", e.odd_block_deviation},
                        {"matches", e.matches}});
    }
    nlohmann::json j{{"J1", r.params.J1}, {"J2", r.params.J2}, {"xi_tau", r.params.xi_tau}, {"table", rows}};
    j["selected"] = r.selected ? to_json(*r.selected) : nlohmann::json(nullptr);
    j["minimal_deviation"] = to_json(r.minimal);
    return j;
}

// --------------------------------------------------------------------------
// Circuit decomposition search
// --------------------------------------------------------------------------

enum class CircuitGate { H, CZ, Z };

struct GateCensus {
    int h = 3;
    int cz = 2;
    int z = 1;
    int total() const { return h + cz + z; }
    bool operator==(const GateCensus &) const = default;
};

struct CircuitDecomposition {
    std::vector<GateSpec> steps;
    CMatrix equivalent_matrix;
};

struct DecompositionResult {
    GateCensus census;
    CircuitDecomposition best;
    double deviation = INFINITY;
    bool matches = false;
    long candidates_tested = 0;
    long matching_candidates = 0;
    /// Set only when the requested census has no match.
    std::optional<GateCensus> augmented_census;
    std::optional<CircuitDecomposition> augmented;
};

namespace detail {

inline CMatrix compose(const std::vector<GateSpec> &steps) {
    CMatrix swap = CMatrix::Zero(4, 4);
    swap(0, 0) = swap(3, 3) = swap(1, 2) = swap(2, 1) = 1.0;
    CMatrix total = CMatrix::Identity(4, 4);
    for (const GateSpec &g : steps) {
        CMatrix full;
        if (g.arity() == 2) {
            full = g.targets()[0] == 0 ? g.matrix() : CMatrix(swap * g.matrix() * swap);
        } else {
            full = g.targets()[0] == 0 ? kron(g.matrix(), pauli_matrix::identity())
                                       : kron(pauli_matrix::identity(), g.matrix());
        }
        total = full * total;
    }
    return total;
}

/// Exhaustive search over gate orderings and wire placements for one census.
inline DecompositionResult search_census(const CMatrix &target, const GateCensus &census, double tol) {
    DecompositionResult res;
    res.census = census;
    std::vector<CircuitGate> seq;
    seq.insert(seq.end(), census.h, CircuitGate::H);
    seq.insert(seq.end(), census.cz, CircuitGate::CZ);
    seq.insert(seq.end(), census.z, CircuitGate::Z);
    std::sort(seq.begin(), seq.end());
    const int singles = census.h + census.z;
    do {
        for (unsigned wires = 0; wires < (1u << singles); ++wires) {
            std::vector<GateSpec> steps;
            int s = 0;
            for (CircuitGate g : seq) {
                if (g == CircuitGate::CZ) {
                    steps.push_back(cz_xmon(0, 1));
                    continue;
                }
                const QubitIndex w = static_cast<QubitIndex>((wires >> (singles - 1 - s)) & 1u);
                ++s;
                steps.push_back(g == CircuitGate::H ? hadamard(w) : pauli_z(w));
            }
            const CMatrix u = compose(steps);
            const double dev = phase_aligned_deviation(u, target);
            ++res.candidates_tested;
            if (dev < tol) ++res.matching_candidates;
            // first match wins; before any match track the closest candidate
            if (!res.matches && dev < res.deviation) {
                res.deviation = dev;
                res.best = {steps, u};
                res.matches = dev < tol;
            }
        }
    } while (std::next_permutation(seq.begin(), seq.end()));
    return res;
}

} // namespace detail

/**
 * Finds an arrangement of exactly `census` gates on two wires whose product
 * equals `target` up to a global phase. When none exists, the best
 * census-preserving candidate is returned together with the smallest
 * census (adding up to `max_extra` single-qubit or CZ gates) that does match.
 */
inline DecompositionResult search_decomposition(const CMatrix &target, const GateCensus &census = {},
                                                int max_extra = 2, double tol = kPhaseTol) {
    if (target.rows() != 4 || target.cols() != 4) throw ArgumentError("search_decomposition: target must be 4x4");
    DecompositionResult res = detail::search_census(target, census, tol);
    if (res.matches) return res;
    for (int extra = 1; extra <= max_extra; ++extra) {
        for (int dh = 0; dh <= extra; ++dh) {
            for (int dz = 0; dz + dh <= extra; ++dz) {
                const GateCensus bigger{census.h + dh, census.cz + (extra - dh - dz), census.z + dz};
                auto alt = detail::search_census(target, bigger, tol);
                if (alt.matches) {
                    res.augmented_census = bigger;
                    res.augmented = alt.best;
                    return res;
                }
            }
        }
    }
    return res;
}

/// Three Hadamards, two Xmon CZs and one sigma^z.
inline DecompositionResult u_bell_decomposition() { return search_decomposition(u_bell_unitary()); }

// --------------------------------------------------------------------------
// Export
// --------------------------------------------------------------------------

inline nlohmann::json matrix_to_json(const CMatrix &m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(row);
    }
    return rows;
}

inline CMatrix matrix_from_json(const nlohmann::json &j) {
    const auto nr = static_cast<Eigen::Index>(j.size());
    if (nr == 0) throw ArgumentError("matrix_from_json: empty matrix");
    const auto nc = static_cast<Eigen::Index>(j.at(0).size());
    CMatrix m(nr, nc);
    for (Eigen::Index r = 0; r < nr; ++r) {
        if (static_cast<Eigen::Index>(j.at(r).size()) != nc) throw ArgumentError("matrix_from_json: ragged rows");
        for (Eigen::Index c = 0; c < nc; ++c) m(r, c) = cplx{j[r][c].at(0).get<double>(), j[r][c].at(1).get<double>()};
    }
    return m;
}

/// {name, targets, matrix: rows of [re, im] pairs}
inline nlohmann::json gate_to_json(const GateSpec &g) {
    return {{"name", g.name()}, {"targets", g.targets()}, {"matrix", matrix_to_json(g.matrix())}};
}

inline GateSpec gate_from_json(const nlohmann::json &j) {
    return {j.at("name").get<std::string>(), j.at("targets").get<std::vector<QubitIndex>>(),
            matrix_from_json(j.at("matrix"))};
}

inline nlohmann::json to_json(const DecompositionResult &r) {
    auto census = [](const GateCensus &c) { return nlohmann::json{{"H", c.h}, {"CZ", c.cz}, {"Z", c.z}}; };
    nlohmann::json steps = nlohmann::json::array();
    for (const auto &g : r.best.steps) steps.push_back({{"gate", g.name()}, {"targets", g.targets()}});
    nlohmann::json j{{"census", census(r.census)},
                     {"steps", steps},
                     {"deviation", r.deviation},
                     {"matches", r.matches},
                     {"candidates_tested", r.candidates_tested},
                     {"matching_candidates", r.matching_candidates}};
    if (r.augmented_census) {
        j["finding"] = "requested census has no exact arrangement";
        j["augmented_census"] = census(*r.augmented_census);
    }
    return j;
}

} // namespace owqc
