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
#include <catch_amalgamated.hpp>

#include "oracles.hpp"
#include "owqc/owqc.hpp"

using namespace owqc;
using Catch::Matchers::WithinAbs;

TEST_CASE("small MPMC states", "[mpmc]") {
    const auto bell = StateVector::from_amplitudes({kInvSqrt2, 0.0, 0.0, kInvSqrt2});
    CHECK_THAT(state_fidelity(build_mpmc_layered(2).state, bell), WithinAbs(1.0, 1e-12));

    const auto c3 = StateVector::from_amplitudes(oracle::mpmc3());
    CHECK(max_amplitude_difference(build_mpmc_layered(3).state, c3) < 1e-12);
    CHECK_THAT(state_fidelity(build_mpmc_recursive(3).first.state, c3), WithinAbs(1.0, 1e-10));

    StateVector pair = tensor(bell, bell);
    pair.apply(u_bell_matrix(1, 2));
    CHECK_THAT(state_fidelity(build_mpmc_layered(4).state, pair), WithinAbs(1.0, 1e-12));
}

TEST_CASE("layered and recursive constructions", "[mpmc]") {
    for (int n = 2; n <= 4; ++n) {
        const auto [c, cp] = build_mpmc_recursive(n);
        CHECK_THAT(state_fidelity(build_mpmc_layered(n).state, c.state), WithinAbs(1.0, 1e-10));
    }
    // The two recursions part ways from five qubits on.
    CHECK_THAT(state_fidelity(build_mpmc_layered(5).state, build_mpmc_recursive(5).first.state), WithinAbs(0.25, 1e-10));
    for (int n = 2; n <= 10; ++n) {
        const auto [c, cp] = build_mpmc_recursive(n);
        CHECK(overlap_magnitude(c.state, cp.state) < 1e-10);
        CHECK(max_marginal_deviation(build_mpmc_layered(n).state) < 1e-10);
    }
}

TEST_CASE("expansion count", "[mpmc]") {
    CHECK(mpsd_expansion_count(2) == 2);
    CHECK(mpsd_expansion_count(3) == 4);
    CHECK(mpsd_expansion_count(5) == 16);
}

TEST_CASE("connectedness", "[mpmc]") {
    const auto c3 = build_mpmc_layered(3).state;
    const auto r = connectedness_check(c3, {0, 2});
    CHECK(r.passed);
    for (const auto &b : r.branches) CHECK(b.maximal);

    const auto r2 = connectedness_check(build_mpmc_layered(2).state, {0, 1});
    CHECK(r2.passed);
    CHECK(r2.measured.empty());

    for (int n = 3; n <= 6; ++n) {
        INFO("n=" << n);
        CHECK(connectedness_matrix(build_mpmc_layered(n).state).all_passed());
    }
    // a product state is not connected
    CHECK(!connectedness_check(StateVector(3), {0, 2}).passed);
}

TEST_CASE("persistence of small states", "[mpmc]") {
    const auto bell = build_mpmc_layered(2).state;
    CHECK(persistence_search(bell, {}, 2).min_measurements_found == 1);

    const auto r3 = persistence_search(build_mpmc_layered(3).state, {}, 3);
    REQUIRE(r3.found);
    CHECK(r3.min_measurements_found == 1);
    CHECK(all_product(replay_witness(build_mpmc_layered(3).state, r3.witness)));

    // Y on the middle qubit also separates every branch
    const std::vector<WitnessMeasurement> middle{{1, MeasurementBasis::of(Basis::Y)}};
    CHECK(all_product(replay_witness(build_mpmc_layered(3).state, middle)));
}

TEST_CASE("chain persistence is floor(N/2)", "[mpmc]") {
    for (int n = 3; n <= 7; ++n) {
        INFO("N=" << n);
        const auto chain = StateVector::from_amplitudes(oracle::chain_graph_state(n));
        const auto r = persistence_search(chain, {}, n);
        REQUIRE(r.found);
        CHECK(r.min_measurements_found == n / 2);
        CHECK(all_product(replay_witness(chain, r.witness)));
        CHECK(persistence_search(cluster_chain(n), {}, n).min_measurements_found == n / 2);
    }
}

TEST_CASE("sampled bases never beat the Pauli search on a Bell pair", "[mpmc]") {
    BasisSet b;
    b.sampled = BasisSet::Sampled{50, 3};
    const auto r = persistence_search(build_mpmc_layered(2).state, b, 2);
    CHECK(r.min_measurements_found == 1);
}

TEST_CASE("size limits", "[mpmc]") {
    CHECK_THROWS_AS(persistence_search(StateVector(11), {}, 2), CapacityError);
    CHECK_THROWS_AS(build_mpmc_layered(21), CapacityError);
    CHECK_THROWS(build_mpmc_layered(1));
}
