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

TEST_CASE("schedule shape", "[cluster]") {
    const auto s44 = build_schedule(4, 4);
    CHECK(s44.edge_count() == 24);
    CHECK(s44.non_empty_layers() == 4);

    const auto s12 = build_schedule(1, 2);
    CHECK(s12.edge_count() == 1);
    CHECK(s12.non_empty_layers() == 1);

    const auto s22 = build_schedule(2, 2);
    CHECK(s22.edge_count() == 4);
    CHECK(s22.layer_sizes() == std::array<std::size_t, 4>{2, 0, 2, 0});
}

TEST_CASE("site indexing", "[cluster]") {
    const auto s = build_schedule(3, 2);
    for (QubitIndex q = 0; q < s.n_qubits(); ++q) CHECK(s.qubit(s.site(q)) == q);
    CHECK(s.qubit({1, 2}) == 3);
}

TEST_CASE("smallest lattices match hand expansion", "[cluster]") {
    const auto want = StateVector::from_amplitudes(oracle::cluster_1x2());
    CHECK_THAT(state_fidelity(build_cluster(build_schedule(1, 2)), want), WithinAbs(1.0, 1e-12));
    CHECK(max_amplitude_difference(reference_cluster(1, 2), want) < 1e-12);
    CHECK_THAT(state_fidelity(reference_cluster(1, 1), init_product_state(1, {ProductLabel::plus})), WithinAbs(1.0, 1e-12));
}

TEST_CASE("construction equals definition", "[cluster]") {
    for (int h = 1; h <= 12; ++h) {
        for (int l = 1; h * l <= 12; ++l) {
            INFO(h << "x" << l);
            CHECK(state_fidelity(build_cluster(build_schedule(h, l)), reference_cluster(h, l)) >= 1.0 - 1e-10);
        }
    }
    const auto v = verify_cluster(4, 4);
    CHECK(v.passed);
    CHECK_THAT(v.fidelity, WithinAbs(1.0, 1e-9));
}

TEST_CASE("2x2 cluster has uniform modulus", "[cluster]") {
    const auto s = reference_cluster(2, 2);
    for (std::size_t i = 0; i < s.dim(); ++i) CHECK_THAT(std::abs(s[i]), WithinAbs(0.25, 1e-12));
}

TEST_CASE("lattice limits", "[cluster]") {
    CHECK_THROWS_AS(build_schedule(0, 3), ArgumentError);
    CHECK_THROWS_AS(build_schedule(6, 5), CapacityError);
    CHECK_THROWS_AS(reference_cluster(5, 5), CapacityError);
}
