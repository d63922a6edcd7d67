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
 * Multiplicative fidelity / critical-path timing model for protocol
 * schedules. Nothing here simulates states.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cluster.hpp"
#include "gates.hpp"

namespace owqc {

enum class MeasParallelism { sequential, parallel };

/**
 * Per-element fidelities and durations (microseconds). f_1q and t_1q are
 * not hardware figures: the default f_1q is calibrated so that the U^Bell
 * estimate lands on 98.8%.
 */
struct DeviceModel {
    double f_cz = 0.995;
    double t_cz = 0.05;
    double f_meas = 0.99;
    double f_ff = 0.99;
    double t_meas_ff = 2.0;
    double f_1q = 0.9995;
    double t_1q = 0.02;
    MeasParallelism meas_parallelism = MeasParallelism::sequential;

    void validate() const {
        auto fid = [](double f, const char *name) {
            if (!(f > 0.0 && f <= 1.0)) throw ValidationError(std::string("device: ") + name + " must lie in (0, 1]");
        };
        auto dur = [](double t, const char *name) {
            if (!(t >= 0.0) || !std::isfinite(t)) throw ValidationError(std::string("device: ") + name + " must be >= 0");
        };
        fid(f_cz, "f_cz");
        fid(f_meas, "f_meas");
        fid(f_ff, "f_ff");
        fid(f_1q, "f_1q");
        dur(t_cz, "t_cz");
        dur(t_meas_ff, "t_meas_ff");
        dur(t_1q, "t_1q");
    }

    static DeviceModel perfect() {
        DeviceModel d;
        d.f_cz = d.f_meas = d.f_ff = d.f_1q = 1.0;
        return d;
    }
};

inline nlohmann::json to_json(const DeviceModel &d) {
    return {{"f_cz", d.f_cz},
            {"t_cz", d.t_cz},
            {"f_meas", d.f_meas},
            {"f_ff", d.f_ff},
            {"t_meas_ff", d.t_meas_ff},
            {"f_1q", d.f_1q},
            {"t_1q", d.t_1q},
            {"meas_parallelism", d.meas_parallelism == MeasParallelism::sequential ? "sequential" : "parallel"}};
}

/// Missing keys keep their defaults; unknown keys and bad values are
/// validation errors.
inline DeviceModel device_from_json(const nlohmann::json &j) {
    if (!j.is_object()) throw ValidationError("device: config must be a JSON object");
    DeviceModel d;
    static const std::vector<std::string> known{"f_cz", "t_cz", "f_meas", "f_ff", "t_meas_ff", "f_1q", "t_1q", "meas_parallelism"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find(known.begin(), known.end(), it.key()) == known.end()) {
            throw ValidationError("device: unknown field '" + it.key() + "'");
        }
    }
    auto num = [&](const char *key, double &dst) {
        if (!j.contains(key)) return;
        if (!j.at(key).is_number()) throw ValidationError(std::string("device: ") + key + " must be a number");
        dst = j.at(key).get<double>();
    };
    num("f_cz", d.f_cz);
    num("t_cz", d.t_cz);
    num("f_meas", d.f_meas);
    num("f_ff", d.f_ff);
    num("t_meas_ff", d.t_meas_ff);
    num("f_1q", d.f_1q);
    num("t_1q", d.t_1q);
    if (j.contains("meas_parallelism")) {
        const auto &v = j.at("meas_parallelism");
        if (v == "sequential") {
            d.meas_parallelism = MeasParallelism::sequential;
        } else if (v == "parallel") {
            d.meas_parallelism = MeasParallelism::parallel;
        } else {
            throw ValidationError("device: meas_parallelism must be 'sequential' or 'parallel'");
        }
    }
    d.validate();
    return d;
}

// --------------------------------------------------------------------------
// Workloads
// --------------------------------------------------------------------------

/// meas_ff is one measurement together with its feedforward.
enum class GateKind { cz, h, x, y, z, one_qubit, meas_ff };

inline std::string to_string(GateKind k) {
    switch (k) {
    case GateKind::cz: return "CZ";
    case GateKind::h: return "H";
    case GateKind::x: return "X";
    case GateKind::y: return "Y";
    case GateKind::z: return "Z";
    case GateKind::one_qubit: return "1Q";
    case GateKind::meas_ff: return "MEAS_FF";
    }
    return "?";
}

inline GateKind gate_kind_from_string(const std::string &s) {
    static const std::map<std::string, GateKind> names{{"CZ", GateKind::cz}, {"H", GateKind::h}, {"X", GateKind::x},
                                                       {"Y", GateKind::y},   {"Z", GateKind::z}, {"1Q", GateKind::one_qubit},
                                                       {"MEAS_FF", GateKind::meas_ff}};
    std::string up = s;
    std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (auto it = names.find(up); it != names.end()) return it->second;
    throw ArgumentError("unknown gate kind '" + s + "'");
}

inline GateKind gate_kind_of(const GateSpec &g) {
    if (g.name() == "cz_xmon" || g.name() == "cz") return GateKind::cz;
    if (g.name() == "h") return GateKind::h;
    if (g.name() == "x") return GateKind::x;
    if (g.name() == "y") return GateKind::y;
    if (g.name() == "z") return GateKind::z;
    if (g.arity() == 1) return GateKind::one_qubit;
    throw ArgumentError("gate '" + g.name() + "' has no cost model; decompose it first");
}

inline double element_fidelity(GateKind k, const DeviceModel &d) {
    switch (k) {
    case GateKind::cz: return d.f_cz;
    case GateKind::meas_ff: return d.f_meas * d.f_ff;
    default: return d.f_1q;
    }
}

inline double element_duration(GateKind k, const DeviceModel &d) {
    switch (k) {
    case GateKind::cz: return d.t_cz;
    case GateKind::meas_ff: return d.t_meas_ff;
    default: return d.t_1q;
    }
}

struct ScheduledOp {
    GateKind kind = GateKind::cz;
    std::vector<QubitIndex> qubits;
};

using Census = std::map<GateKind, int>;

/// Layers of parallel elements; the census is derived from the layers.
struct Workload {
    std::string name;
    int n_qubits = 0;
    std::vector<std::vector<ScheduledOp>> layers;

    Census census() const {
        Census c;
        for (const auto &layer : layers) {
            for (const auto &op : layer) ++c[op.kind];
        }
        return c;
    }
    int n_measurements() const {
        const Census c = census();
        auto it = c.find(GateKind::meas_ff);
        return it == c.end() ? 0 : it->second;
    }
};

/// Earliest-layer placement: each op goes one layer after the last op
/// touching any of its qubits.
inline std::vector<std::vector<ScheduledOp>> asap_layers(const std::vector<ScheduledOp> &ops) {
    std::vector<std::vector<ScheduledOp>> layers;
    std::map<QubitIndex, std::size_t> next_free;
    for (const auto &op : ops) {
        std::size_t at = 0;
        for (QubitIndex q : op.qubits) at = std::max(at, next_free[q]);
        if (layers.size() <= at) layers.resize(at + 1);
        layers[at].push_back(op);
        for (QubitIndex q : op.qubits) next_free[q] = at + 1;
    }
    return layers;
}

/// Concatenation (c1 followed by c2); censuses add.
inline Workload combine(const Workload &a, const Workload &b) {
    Workload w;
    w.name = a.name + "+" + b.name;
    w.n_qubits = std::max(a.n_qubits, b.n_qubits);
    w.layers = a.layers;
    w.layers.insert(w.layers.end(), b.layers.begin(), b.layers.end());
    return w;
}

struct ProtocolCost {
    std::string name;
    Census census;
    int n_qubits = 0;
    int n_measurements = 0;
    double estimated_fidelity = 1.0;
    double estimated_time = 0.0;
    std::size_t depth = 0;
};

/// Product of element fidelities; sum over layers of the slowest element,
/// with measurements in one layer serialised unless the device reads out
/// in parallel.
inline ProtocolCost estimate(const Workload &w, const DeviceModel &d) {
    d.validate();
    ProtocolCost c;
    c.name = w.name;
    c.census = w.census();
    c.n_qubits = w.n_qubits;
    c.n_measurements = w.n_measurements();
    for (auto [kind, count] : c.census) {
        if (count < 0) throw ArgumentError("estimate: negative census entry");
        c.estimated_fidelity *= std::pow(element_fidelity(kind, d), count);
    }
    for (const auto &layer : w.layers) {
        if (layer.empty()) continue;
        double slowest = 0.0;
        int meas = 0;
        for (const auto &op : layer) {
            if (op.kind == GateKind::meas_ff) {
                ++meas;
            } else {
                slowest = std::max(slowest, element_duration(op.kind, d));
            }
        }
        const double meas_time = d.meas_parallelism == MeasParallelism::sequential ? meas * d.t_meas_ff
                                                                                   : (meas > 0 ? d.t_meas_ff : 0.0);
        c.estimated_time += std::max(slowest, meas_time);
        ++c.depth;
    }
    return c;
}

/// Census-only estimate: every element in its own layer.
inline ProtocolCost estimate(const Census &census, const DeviceModel &d, const std::string &name = "census") {
    Workload w;
    w.name = name;
    for (auto [kind, count] : census) {
        if (count < 0) throw ArgumentError("estimate: negative census entry");
        for (int i = 0; i < count; ++i) w.layers.push_back({ScheduledOp{kind, {}}});
    }
    return estimate(w, d);
}

// --------------------------------------------------------------------------
// Protocol workloads
// --------------------------------------------------------------------------

inline Workload cluster_workload(int h, int l) {
    const LatticeSchedule s = build_schedule(h, l);
    Workload w;
    w.name = "cluster_" + std::to_string(h) + "x" + std::to_string(l);
    w.n_qubits = h * l;
    for (const auto &layer : s.layers) {
        if (layer.empty()) continue;
        std::vector<ScheduledOp> ops;
        for (const auto &e : layer) ops.push_back({GateKind::cz, {s.qubit(e.control), s.qubit(e.target)}});
        w.layers.push_back(std::move(ops));
    }
    return w;
}

/// U^Bell as found by the decomposition search, layered ASAP on wires
/// (a, b).
inline std::vector<std::vector<ScheduledOp>> ubell_layers(QubitIndex a = 0, QubitIndex b = 1) {
    static const DecompositionResult dec = u_bell_decomposition();
    const CircuitDecomposition &circ = dec.matches ? dec.best : *dec.augmented;
    std::vector<ScheduledOp> ops;
    for (const GateSpec &g : circ.steps) {
        std::vector<QubitIndex> qs;
        for (QubitIndex t : g.targets()) qs.push_back(t == 0 ? a : b);
        ops.push_back({gate_kind_of(g), qs});
    }
    return asap_layers(ops);
}

inline Workload ubell_workload() {
    Workload w;
    w.name = "u_bell";
    w.n_qubits = 2;
    w.layers = ubell_layers();
    return w;
}

/// Entangling phase ASAP, then one readout phase holding every
/// measurement with its feedforward.
inline Workload cnot_standard_workload() {
    Workload w;
    w.name = "cnot_standard";
    w.n_qubits = 4;
    w.layers = asap_layers({{GateKind::cz, {0, 1}}, {GateKind::cz, {3, 1}}, {GateKind::cz, {1, 2}}});
    w.layers.push_back({{GateKind::meas_ff, {0}}, {GateKind::meas_ff, {1}}});
    return w;
}

/// U^Bell, one CZ and one measurement with feedforward. The ancilla
/// Hadamard is not costed, matching the quoted efficient-protocol formula.
inline Workload cnot_efficient_workload() {
    Workload w;
    w.name = "cnot_efficient";
    w.n_qubits = 3;
    w.layers = ubell_layers(0, 1);
    w.layers.push_back({{GateKind::cz, {2, 1}}});
    w.layers.push_back({{GateKind::meas_ff, {0}}});
    return w;
}

inline ProtocolCost ubell_cost(const DeviceModel &d) { return estimate(ubell_workload(), d); }

struct ComparisonReport {
    ProtocolCost standard;
    ProtocolCost efficient;
    ProtocolCost ubell;
    double ancilla_reduction = 0.0; ///< (4 - 3) / 4
};

inline ComparisonReport compare_protocols(const DeviceModel &d) {
    ComparisonReport r;
    r.standard = estimate(cnot_standard_workload(), d);
    r.efficient = estimate(cnot_efficient_workload(), d);
    r.ubell = ubell_cost(d);
    r.ancilla_reduction = static_cast<double>(r.standard.n_qubits - r.efficient.n_qubits) / r.standard.n_qubits;
    return r;
}

struct CapacityPlan {
    int total_qubits = 0;
    int standard_cnots = 0;
    int efficient_cnots = 0;
};

inline CapacityPlan capacity_planner(int total_qubits) {
    if (total_qubits < 3) throw ArgumentError("capacity_planner: need at least 3 qubits");
    return {total_qubits, total_qubits / 4, total_qubits / 3};
}

/// Chained-C-NOT fidelity with and without the entangling-gate error.
struct CapacityReport {
    CapacityPlan plan;
    double standard_fidelity_with_generation = 1.0;
    double standard_fidelity_without_generation = 1.0;
    double efficient_fidelity_with_generation = 1.0;
    double efficient_fidelity_without_generation = 1.0;
};

inline CapacityReport capacity_report(int total_qubits, const DeviceModel &d) {
    CapacityReport r;
    r.plan = capacity_planner(total_qubits);
    const ComparisonReport cmp = compare_protocols(d);
    const double readout = d.f_meas * d.f_ff;
    r.standard_fidelity_with_generation = std::pow(cmp.standard.estimated_fidelity, r.plan.standard_cnots);
    r.standard_fidelity_without_generation = std::pow(readout, cmp.standard.n_measurements * r.plan.standard_cnots);
    r.efficient_fidelity_with_generation = std::pow(cmp.efficient.estimated_fidelity, r.plan.efficient_cnots);
    r.efficient_fidelity_without_generation = std::pow(readout, cmp.efficient.n_measurements * r.plan.efficient_cnots);
    return r;
}

// --------------------------------------------------------------------------
// Reports
// --------------------------------------------------------------------------

inline nlohmann::json to_json(const ProtocolCost &c) {
    nlohmann::json census = nlohmann::json::object();
    for (auto [k, n] : c.census) census[to_string(k)] = n;
    return {{"name", c.name},
            {"census", census},
            {"n_qubits", c.n_qubits},
            {"n_measurements", c.n_measurements},
            {"estimated_fidelity", c.estimated_fidelity},
            {"estimated_time_us", c.estimated_time},
            {"depth", c.depth}};
}

inline nlohmann::json to_json(const ComparisonReport &r) {
    return {{"standard", to_json(r.standard)},
            {"efficient", to_json(r.efficient)},
            {"u_bell", to_json(r.ubell)},
            {"ancilla_reduction", r.ancilla_reduction},
            {"note", "f_1q default is calibrated to the quoted U^Bell fidelity"}};
}

inline nlohmann::json to_json(const CapacityReport &r) {
    return {{"total_qubits", r.plan.total_qubits},
            {"standard_cnots", r.plan.standard_cnots},
            {"efficient_cnots", r.plan.efficient_cnots},
            {"standard_fidelity_with_generation", r.standard_fidelity_with_generation},
            {"standard_fidelity_without_generation", r.standard_fidelity_without_generation},
            {"efficient_fidelity_with_generation", r.efficient_fidelity_with_generation},
            {"efficient_fidelity_without_generation", r.efficient_fidelity_without_generation}};
}

/// Aligned columns: name, qubits, measurements, fidelity (rounded and to
/// six places), time.
inline std::string cost_table(const std::vector<ProtocolCost> &rows) {
    std::ostringstream os;
    os << std::left << std::setw(18) << "protocol" << std::right << std::setw(8) << "qubits" << std::setw(8) << "meas"
       << std::setw(12) << "fidelity" << std::setw(12) << "(6 d.p.)" << std::setw(12) << "time_us" << '\n';
    for (const auto &c : rows) {
        os << std::left << std::setw(18) << c.name << std::right << std::setw(8) << c.n_qubits << std::setw(8)
           << c.n_measurements << std::setw(12) << std::fixed << std::setprecision(3) << c.estimated_fidelity
           << std::setw(12) << std::setprecision(6) << c.estimated_fidelity << std::setw(12) << std::setprecision(3)
           << c.estimated_time << '\n';
        os.unsetf(std::ios::fixed);
    }
    return os.str();
}

} // namespace owqc
