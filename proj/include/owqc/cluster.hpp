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
 * Two-dimensional cluster states on an h x l lattice built from Xmon CZ
 * gates in four parallel layers.
 *
 * The Xmon CZ phases |00> instead of |0_c 1_t>; the two differ by -sigma^z
 * on the control. Sites that control an odd number of edges therefore start
 * in |-> and all others in |+>, which makes the layered construction equal
 * to the direct phase-evolution definition without any global phase.
 */
#pragma once

#include <array>
#include <string>
#include <vector>

#include <json.hpp>

#include "core_state.hpp"
#include "gates.hpp"

namespace owqc {

/// Lattice site, 1-based: j is the column, k the row; (1,1) is lower-left.
struct Site {
    int j = 1;
    int k = 1;
    bool operator==(const Site &) const = default;
    auto operator<=>(const Site &) const = default;
};

/// Directed nearest-neighbour edge; the control is the lower-coordinate end.
struct DirectedEdge {
    Site control;
    Site target;
    bool operator==(const DirectedEdge &) const = default;
};

struct LatticeSchedule {
    int h = 1; ///< columns
    int l = 1; ///< rows
    /// x-edges from odd columns, x-edges from even columns, y-edges from
    /// odd rows, y-edges from even rows.
    std::array<std::vector<DirectedEdge>, 4> layers;
    /// Initial label per qubit (flattened index), plus or minus.
    std::vector<ProductLabel> init_labels;

    int n_qubits() const { return h * l; }
    QubitIndex qubit(const Site &s) const { return (s.k - 1) * h + (s.j - 1); }
    Site site(QubitIndex q) const { return {q % h + 1, q / h + 1}; }

    std::size_t edge_count() const {
        std::size_t n = 0;
        for (const auto &layer : layers) n += layer.size();
        return n;
    }
    std::vector<DirectedEdge> edges() const {
        std::vector<DirectedEdge> out;
        for (const auto &layer : layers) out.insert(out.end(), layer.begin(), layer.end());
        return out;
    }
    std::array<std::size_t, 4> layer_sizes() const {
        return {layers[0].size(), layers[1].size(), layers[2].size(), layers[3].size()};
    }
    int non_empty_layers() const {
        int n = 0;
        for (const auto &layer : layers) n += layer.empty() ? 0 : 1;
        return n;
    }
};

inline void check_lattice(int h, int l, int cap) {
    if (h < 1 || l < 1) throw ArgumentError("lattice dimensions must be >= 1");
    if (h * l > cap) {
        throw CapacityError("lattice " + std::to_string(h) + "x" + std::to_string(l) + " has " +
                            std::to_string(h * l) + " sites; the limit here is " + std::to_string(cap));
    }
}

inline LatticeSchedule build_schedule(int h, int l) {
    check_lattice(h, l, kMaxQubits);
    LatticeSchedule s;
    s.h = h;
    s.l = l;
    for (int k = 1; k <= l; ++k) {
        for (int j = 1; j < h; ++j) s.layers[j % 2 == 1 ? 0 : 1].push_back({{j, k}, {j + 1, k}});
    }
    for (int k = 1; k < l; ++k) {
        for (int j = 1; j <= h; ++j) s.layers[k % 2 == 1 ? 2 : 3].push_back({{j, k}, {j, k + 1}});
    }
    std::vector<int> control_count(h * l, 0);
    for (const auto &e : s.edges()) ++control_count[s.qubit(e.control)];
    s.init_labels.resize(h * l);
    for (int q = 0; q < h * l; ++q) s.init_labels[q] = control_count[q] % 2 ? ProductLabel::minus : ProductLabel::plus;
    return s;
}

/// Runs the schedule from explicit initial labels; records the norm after
/// each layer when `layer_norms` is given.
inline StateVector build_cluster_from_labels(const LatticeSchedule &schedule, std::span<const ProductLabel> labels,
                                             std::vector<double> *layer_norms = nullptr) {
    StateVector state = init_product_state(schedule.n_qubits(), labels);
    for (const auto &layer : schedule.layers) {
        for (const auto &e : layer) state.apply(cz_xmon(schedule.qubit(e.control), schedule.qubit(e.target)));
        if (layer_norms) layer_norms->push_back(std::sqrt(state.norm_squared()));
    }
    return state;
}

inline StateVector build_cluster(const LatticeSchedule &schedule) {
    return build_cluster_from_labels(schedule, schedule.init_labels);
}

/**
 * Direct evaluation of exp(-i pi H) on |+>^n: every directed edge flips the
 * sign of the components with control bit 0 and target bit 1.
 */
inline StateVector reference_cluster(int h, int l) {
    check_lattice(h, l, 20);
    const LatticeSchedule s = build_schedule(h, l);
    const int n = h * l;
    const std::vector<DirectedEdge> edges = s.edges();
    StateVector state(n);
    const double amp = std::pow(2.0, -0.5 * n);
    for (std::size_t i = 0; i < state.dim(); ++i) {
        int sign = 1;
        for (const auto &e : edges) {
            if (state.bit(i, s.qubit(e.control)) == 0 && state.bit(i, s.qubit(e.target)) == 1) sign = -sign;
        }
        state[i] = sign * amp;
    }
    return state;
}

struct VerificationReport {
    int h = 0;
    int l = 0;
    std::size_t edge_count = 0;
    std::array<std::size_t, 4> layer_sizes{};
    double fidelity = 0.0;
    std::vector<double> layer_norms;
    bool passed = false;
};

inline VerificationReport verify_cluster(int h, int l) {
    check_lattice(h, l, 20);
    VerificationReport rep;
    rep.h = h;
    rep.l = l;
    const LatticeSchedule s = build_schedule(h, l);
    rep.edge_count = s.edge_count();
    rep.layer_sizes = s.layer_sizes();
    const StateVector built = build_cluster_from_labels(s, s.init_labels, &rep.layer_norms);
    rep.fidelity = state_fidelity(built, reference_cluster(h, l));
    rep.passed = rep.fidelity > 1.0 - 1e-9;
    for (double nrm : rep.layer_norms) rep.passed = rep.passed && std::abs(nrm - 1.0) < kNormTol;
    return rep;
}

/// {h, l, layers: [[{control:[j,k], target:[j,k]}...]], init: {"j,k": "+"|"-"}}
inline nlohmann::json schedule_to_json(const LatticeSchedule &s) {
    nlohmann::json layers = nlohmann::json::array();
    for (const auto &layer : s.layers) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto &e : layer) {
            arr.push_back({{"control", {e.control.j, e.control.k}}, {"target", {e.target.j, e.target.k}}});
        }
        layers.push_back(arr);
    }
    nlohmann::json init = nlohmann::json::object();
    for (int q = 0; q < s.n_qubits(); ++q) {
        const Site st = s.site(q);
        init[std::to_string(st.j) + "," + std::to_string(st.k)] = s.init_labels[q] == ProductLabel::minus ? "-" : "+";
    }
    return {{"h", s.h}, {"l", s.l}, {"layers", layers}, {"init", init}};
}

inline nlohmann::json to_json(const VerificationReport &r) {
    return {{"h", r.h},
            {"l", r.l},
            {"edge_count", r.edge_count},
            {"layer_sizes", r.layer_sizes},
            {"fidelity", r.fidelity},
            {"layer_norms", r.layer_norms},
            {"passed", r.passed}};
}

} // namespace owqc
