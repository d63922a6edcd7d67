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
 * MPMC states: the U^Bell-layered family and its recursive definition,
 * pairwise connectedness under sigma^z measurements, and brute-force
 * entanglement persistence.
 *
 * Persistence here is operational: the smallest number of single-qubit
 * measurements after which every possible outcome branch is a full product
 * state.
 */
#pragma once

#include <algorithm>
#include <iomanip>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cluster.hpp"
#include "core_state.hpp"
#include "gates.hpp"

namespace owqc {

enum class MpmcConstruction { layered, recursive };

inline std::string to_string(MpmcConstruction c) { return c == MpmcConstruction::layered ? "layered" : "recursive"; }

struct MpmcState {
    int n = 2;
    StateVector state{2};
    MpmcConstruction construction = MpmcConstruction::layered;
};

inline constexpr int kMaxMpmcQubits = 20;

inline void check_mpmc_size(int n, int cap = kMaxMpmcQubits) {
    if (n < 2) throw ArgumentError("MPMC states need n >= 2");
    if (n > cap) throw CapacityError("MPMC: n = " + std::to_string(n) + " exceeds the limit of " + std::to_string(cap));
}

/// Gate pairs of the two layers: (0,1),(2,3),... then (1,2),(3,4),...
/// For odd n the last qubit is reached only by the second layer.
inline std::pair<std::vector<std::pair<int, int>>, std::vector<std::pair<int, int>>> mpmc_layers(int n) {
    std::vector<std::pair<int, int>> first, second;
    for (int a = 0; a + 1 < n; a += 2) first.emplace_back(a, a + 1);
    for (int a = 1; a + 1 < n; a += 2) second.emplace_back(a, a + 1);
    return {first, second};
}

inline MpmcState build_mpmc_layered(int n) {
    check_mpmc_size(n);
    StateVector s(n);
    const auto [first, second] = mpmc_layers(n);
    for (auto [a, b] : first) s.apply(u_bell_matrix(a, b));
    for (auto [a, b] : second) s.apply(u_bell_matrix(a, b));
    return {n, std::move(s), MpmcConstruction::layered};
}

/// (C_n, C_n^perp) from C_n = (C_{n-1}|0> + C_{n-1}^perp|1>)/sqrt2 and
/// C_n^perp = (C_{n-1}|1> + C_{n-1}^perp|0>)/sqrt2.
inline std::pair<MpmcState, MpmcState> build_mpmc_recursive(int n) {
    check_mpmc_size(n);
    std::vector<cplx> c{kInvSqrt2, 0.0, 0.0, kInvSqrt2};
    std::vector<cplx> cp{0.0, kInvSqrt2, -kInvSqrt2, 0.0};
    for (int m = 3; m <= n; ++m) {
        std::vector<cplx> nc(c.size() * 2), ncp(c.size() * 2);
        for (std::size_t i = 0; i < c.size(); ++i) {
            nc[2 * i] = kInvSqrt2 * c[i];
            nc[2 * i + 1] = kInvSqrt2 * cp[i];
            ncp[2 * i] = kInvSqrt2 * cp[i];
            ncp[2 * i + 1] = kInvSqrt2 * c[i];
        }
        c = std::move(nc);
        cp = std::move(ncp);
    }
    return {{n, StateVector::from_amplitudes(std::move(c), false), MpmcConstruction::recursive},
            {n, StateVector::from_amplitudes(std::move(cp), false), MpmcConstruction::recursive}};
}

/// |<a|b>|
inline double overlap_magnitude(const StateVector &a, const StateVector &b) { return std::sqrt(state_fidelity(a, b)); }

/// max over qubits of max |rho_q - I/2|.
inline double max_marginal_deviation(const StateVector &s) {
    double worst = 0.0;
    for (QubitIndex q = 0; q < s.n_qubits(); ++q) {
        const DensityMatrix rho = reduced_density(s, {q});
        worst = std::max(worst, (rho.entries - CMatrix::Identity(2, 2) * 0.5).cwiseAbs().maxCoeff());
    }
    return worst;
}

/// Number of nonzero computational amplitudes of the recursive C_n, i.e.
/// the term count of its product expansion (not a minimality statement).
inline std::size_t mpsd_expansion_count(int n) {
    check_mpmc_size(n, 12);
    const StateVector s = build_mpmc_recursive(n).first.state;
    std::size_t count = 0;
    for (std::size_t i = 0; i < s.dim(); ++i) count += std::abs(s[i]) > 1e-12 ? 1 : 0;
    return count;
}

/// Open-boundary 1-D cluster chain of n qubits.
inline StateVector cluster_chain(int n) { return reference_cluster(n, 1); }

// --------------------------------------------------------------------------
// Connectedness
// --------------------------------------------------------------------------

struct ConnectednessBranch {
    std::vector<int> outcomes;
    double probability = 0.0;
    std::array<double, 2> schmidt{};
    double max_entangled_fidelity = 0.0;
    bool maximal = false;
};

struct ConnectednessReport {
    std::pair<QubitIndex, QubitIndex> pair;
    std::vector<QubitIndex> measured;
    std::vector<ConnectednessBranch> branches; ///< possible branches only
    bool passed = false;
};

inline constexpr int kMaxConnectednessQubits = 14;
inline constexpr double kMaxEntangledTol = 1e-8;

/**
 * Measures every qubit outside `pair` in sigma^z and checks that each
 * possible branch leaves the pair maximally entangled (both Schmidt
 * coefficients 1/sqrt2). The best fidelity to a maximally entangled state
 * is (s0 + s1)^2 / 2.
 */
inline ConnectednessReport connectedness_check(const StateVector &state, std::pair<QubitIndex, QubitIndex> pair) {
    const int n = state.n_qubits();
    if (n > kMaxConnectednessQubits) throw CapacityError("connectedness_check: n exceeds " + std::to_string(kMaxConnectednessQubits));
    state.check_qubit(pair.first);
    state.check_qubit(pair.second);
    if (pair.first == pair.second) throw ArgumentError("connectedness_check: pair qubits must differ");
    ConnectednessReport rep;
    rep.pair = pair;
    for (QubitIndex q = 0; q < n; ++q) {
        if (q != pair.first && q != pair.second) rep.measured.push_back(q);
    }
    const std::size_t m = rep.measured.size();
    const std::array<QubitIndex, 2> kept{pair.first, pair.second};
    rep.passed = true;
    for (std::size_t b = 0; b < (std::size_t{1} << m); ++b) {
        ConnectednessBranch br;
        // Residual amplitudes: the pair's 4 amplitudes at fixed outcomes.
        CMatrix res(2, 2);
        std::size_t base = 0;
        for (std::size_t i = 0; i < m; ++i) {
            const int bit = (b >> (m - 1 - i)) & 1;
            br.outcomes.push_back(bit);
            if (bit) base |= state.mask(rep.measured[i]);
        }
        for (int a = 0; a < 2; ++a) {
            for (int c = 0; c < 2; ++c) {
                res(a, c) = state[base | (a ? state.mask(kept[0]) : 0) | (c ? state.mask(kept[1]) : 0)];
            }
        }
        br.probability = res.squaredNorm();
        if (br.probability <= 1e-12) continue;
        res /= std::sqrt(br.probability);
        Eigen::JacobiSVD<CMatrix> svd(res);
        br.schmidt = {svd.singularValues()(0), svd.singularValues()(1)};
        br.max_entangled_fidelity = std::pow(br.schmidt[0] + br.schmidt[1], 2) / 2.0;
        br.maximal = std::abs(br.schmidt[0] - kInvSqrt2) < kMaxEntangledTol && std::abs(br.schmidt[1] - kInvSqrt2) < kMaxEntangledTol;
        rep.passed = rep.passed && br.maximal;
        rep.branches.push_back(std::move(br));
    }
    return rep;
}

struct ConnectednessMatrix {
    int n = 0;
    std::vector<ConnectednessReport> pairs; ///< (a,b), a < b, lexicographic
    bool all_passed() const {
        return std::all_of(pairs.begin(), pairs.end(), [](const auto &p) { return p.passed; });
    }
    std::size_t failures() const {
        return static_cast<std::size_t>(std::count_if(pairs.begin(), pairs.end(), [](const auto &p) { return !p.passed; }));
    }
};

inline ConnectednessMatrix connectedness_matrix(const StateVector &state) {
    ConnectednessMatrix mat;
    mat.n = state.n_qubits();
    for (QubitIndex a = 0; a < mat.n; ++a) {
        for (QubitIndex b = a + 1; b < mat.n; ++b) mat.pairs.push_back(connectedness_check(state, {a, b}));
    }
    return mat;
}

// --------------------------------------------------------------------------
// Persistence
// --------------------------------------------------------------------------

/// Pauli bases are always searched exhaustively; when `sampled` is set,
/// random single-qubit bases are also tried below the Pauli minimum.
struct BasisSet {
    struct Sampled {
        int count = 2000; ///< random basis assignments per qubit subset
        std::uint64_t seed = 0;
    };
    std::optional<Sampled> sampled;

    std::string label() const {
        if (!sampled) return "pauli";
        return "sampled_general(" + std::to_string(sampled->count) + "," + std::to_string(sampled->seed) + ")";
    }
};

struct WitnessMeasurement {
    QubitIndex qubit = 0;
    MeasurementBasis basis = MeasurementBasis::of(Basis::Z);
    double theta = 0.0; ///< Bloch angles, meaningful for custom bases
    double phi = 0.0;
};

struct BranchCertificate {
    std::vector<int> outcomes;
    double probability = 0.0;
    double max_second_schmidt = 0.0;
    bool product = false;
};

struct PersistenceReport {
    int n = 0;
    std::string basis_set;
    bool found = false;
    int min_measurements_found = 0; ///< max_k + 1 when nothing was found
    std::vector<WitnessMeasurement> witness;
    std::vector<BranchCertificate> certificates;
    bool exhaustive = true;
    std::size_t candidates_tested = 0;
    bool sampled_improved = false;
};

inline constexpr int kMaxPersistenceQubits = 10;
inline constexpr double kProductTol = 1e-8;

/**
 * Projects `state` on every outcome combination of `witness` and certifies
 * each possible branch. Stops at the first non-product branch when
 * `stop_early` is set.
 */
inline std::vector<BranchCertificate> replay_witness(const StateVector &state, const std::vector<WitnessMeasurement> &witness,
                                                     bool stop_early = false) {
    const std::size_t k = witness.size();
    std::vector<BranchCertificate> out;
    for (std::size_t b = 0; b < (std::size_t{1} << k); ++b) {
        StateVector s = state;
        BranchCertificate c;
        for (std::size_t i = 0; i < k; ++i) {
            const int bit = (b >> (k - 1 - i)) & 1;
            c.outcomes.push_back(bit);
            project(s, witness[i].qubit, witness[i].basis, bit);
        }
        c.probability = s.norm_squared();
        if (c.probability <= 1e-12) continue;
        s.normalize();
        c.max_second_schmidt = max_second_schmidt(s);
        c.product = c.max_second_schmidt < kProductTol;
        out.push_back(std::move(c));
        if (stop_early && !out.back().product) break;
    }
    return out;
}

inline bool all_product(const std::vector<BranchCertificate> &certs) {
    return !certs.empty() && std::all_of(certs.begin(), certs.end(), [](const auto &c) { return c.product; });
}

namespace detail {

/// Calls f(subset) for every k-subset of {0..n-1} in lexicographic order
/// until f returns true.
template <class F> bool for_each_subset(int n, int k, F &&f) {
    std::vector<int> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    if (k > n) return false;
    while (true) {
        if (f(idx)) return true;
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) return false;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

} // namespace detail

/**
 * Smallest k <= max_k such that some k-subset with a fixed basis per
 * measured qubit leaves every possible branch a full product state. The
 * first witness in (k, subset, X<Y<Z assignment) lexicographic order wins.
 */
inline PersistenceReport persistence_search(const StateVector &state, const BasisSet &bases, int max_k) {
    const int n = state.n_qubits();
    if (n > kMaxPersistenceQubits) throw CapacityError("persistence_search: exhaustive search is limited to n <= 10");
    if (max_k < 0) throw ArgumentError("persistence_search: max_k must be >= 0");
    max_k = std::min(max_k, n);
    PersistenceReport rep;
    rep.n = n;
    rep.basis_set = bases.label();
    rep.exhaustive = true;
    rep.min_measurements_found = max_k + 1;
    static const std::array<Basis, 3> paulis{Basis::X, Basis::Y, Basis::Z};

    for (int k = 0; k <= max_k && !rep.found; ++k) {
        std::size_t n_assign = 1;
        for (int i = 0; i < k; ++i) n_assign *= 3;
        detail::for_each_subset(n, k, [&](const std::vector<int> &subset) {
            for (std::size_t a = 0; a < n_assign; ++a) {
                std::vector<WitnessMeasurement> w(k);
                std::size_t code = a;
                for (int i = k - 1; i >= 0; --i) {
                    w[i].qubit = subset[i];
                    w[i].basis = MeasurementBasis::of(paulis[code % 3]);
                    code /= 3;
                }
                ++rep.candidates_tested;
                auto certs = replay_witness(state, w, true);
                if (all_product(certs)) {
                    rep.found = true;
                    rep.min_measurements_found = k;
                    rep.witness = std::move(w);
                    rep.certificates = replay_witness(state, rep.witness);
                    return true;
                }
            }
            return false;
        });
    }

    if (bases.sampled) {
        rep.exhaustive = false;
        Rng rng(bases.sampled->seed);
        const int upper = rep.found ? rep.min_measurements_found : max_k + 1;
        for (int k = 1; k < upper; ++k) {
            bool hit = detail::for_each_subset(n, k, [&](const std::vector<int> &subset) {
                for (int t = 0; t < bases.sampled->count; ++t) {
                    std::vector<WitnessMeasurement> w(k);
                    for (int i = 0; i < k; ++i) {
                        // uniform on the Bloch sphere
                        w[i].qubit = subset[i];
                        w[i].theta = std::acos(1.0 - 2.0 * rng.uniform());
                        w[i].phi = 2.0 * std::numbers::pi * rng.uniform();
                        w[i].basis = MeasurementBasis::bloch(w[i].theta, w[i].phi);
                    }
                    ++rep.candidates_tested;
                    if (all_product(replay_witness(state, w, true))) {
                        rep.found = true;
                        rep.sampled_improved = true;
                        rep.min_measurements_found = k;
                        rep.witness = std::move(w);
                        rep.certificates = replay_witness(state, rep.witness);
                        return true;
                    }
                }
                return false;
            });
            if (hit) break;
        }
    }
    return rep;
}

// --------------------------------------------------------------------------
// Reports
// --------------------------------------------------------------------------

inline nlohmann::json to_json(const ConnectednessReport &r) {
    nlohmann::json branches = nlohmann::json::array();
    for (const auto &b : r.branches) {
        branches.push_back({{"outcomes", b.outcomes},
                            {"probability", b.probability},
                            {"schmidt", b.schmidt},
                            {"max_entangled_fidelity", b.max_entangled_fidelity},
                            {"maximal", b.maximal}});
    }
    return {{"pair", {r.pair.first, r.pair.second}}, {"measured", r.measured}, {"basis", "Z"}, {"passed", r.passed}, {"branches", branches}};
}

inline nlohmann::json to_json(const ConnectednessMatrix &m) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto &p : m.pairs) {
        double worst = 1.0;
        for (const auto &b : p.branches) worst = std::min(worst, b.max_entangled_fidelity);
        pairs.push_back({{"pair", {p.pair.first, p.pair.second}}, {"passed", p.passed}, {"min_max_entangled_fidelity", worst}});
    }
    return {{"n", m.n}, {"all_passed", m.all_passed()}, {"failures", m.failures()}, {"pairs", pairs}};
}

inline nlohmann::json to_json(const PersistenceReport &r) {
    nlohmann::json witness = nlohmann::json::array();
    for (const auto &w : r.witness) {
        nlohmann::json jw{{"qubit", w.qubit}, {"basis", to_string(w.basis.kind)}};
        if (w.basis.kind == Basis::Custom) {
            jw["theta"] = w.theta;
            jw["phi"] = w.phi;
        }
        witness.push_back(jw);
    }
    nlohmann::json certs = nlohmann::json::array();
    for (const auto &c : r.certificates) {
        certs.push_back({{"outcomes", c.outcomes},
                         {"probability", c.probability},
                         {"max_second_schmidt", c.max_second_schmidt},
                         {"product", c.product}});
    }
    nlohmann::json j{{"n", r.n},
                     {"basis_set", r.basis_set},
                     {"found", r.found},
                     {"exhaustive", r.exhaustive},
                     {"candidates_tested", r.candidates_tested},
                     {"witness", witness},
                     {"certificates", certs}};
    if (r.found) {
        j["min_measurements_found"] = r.min_measurements_found;
    } else {
        j["min_measurements_found"] = "not_found(>=" + std::to_string(r.min_measurements_found) + ")";
    }
    if (r.sampled_improved) j["sampled_improved"] = true;
    return j;
}

struct PersistenceSummaryRow {
    int n = 0;
    std::optional<int> mpmc_found;  ///< Pauli-exhaustive persistence of C_n
    int claimed = 0;                ///< N - 1
    int chain_baseline = 0;         ///< floor(N/2)
    std::optional<int> chain_found; ///< Pauli-exhaustive persistence of the chain
};

inline PersistenceSummaryRow persistence_summary_row(int n, int max_k) {
    PersistenceSummaryRow row;
    row.n = n;
    row.claimed = n - 1;
    row.chain_baseline = n / 2;
    const auto rm = persistence_search(build_mpmc_layered(n).state, {}, max_k);
    if (rm.found) row.mpmc_found = rm.min_measurements_found;
    const auto rc = persistence_search(cluster_chain(n), {}, max_k);
    if (rc.found) row.chain_found = rc.min_measurements_found;
    return row;
}

/// Aligned text table comparing measured persistence with the claimed
/// N-1 and the floor(N/2) chain baseline.
inline std::string persistence_summary_table(const std::vector<PersistenceSummaryRow> &rows) {
    std::ostringstream os;
    auto cell = [](const std::optional<int> &v) { return v ? std::to_string(*v) : std::string("n/f"); };
    os << std::left << std::setw(4) << "N" << std::setw(16) << "P(C_N) pauli" << std::setw(14) << "claimed N-1"
       << std::setw(16) << "P(chain) pauli" << std::setw(12) << "floor(N/2)" << '\n';
    for (const auto &r : rows) {
        os << std::left << std::setw(4) << r.n << std::setw(16) << cell(r.mpmc_found) << std::setw(14) << r.claimed
           << std::setw(16) << cell(r.chain_found) << std::setw(12) << r.chain_baseline << '\n';
    }
    return os.str();
}

} // namespace owqc
