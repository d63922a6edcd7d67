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

#include <numbers>

#include "owqc/owqc.hpp"

using namespace owqc;
using Catch::Matchers::WithinAbs;

TEST_CASE("CZ xmon convention", "[gates]") {
    const CMatrix u = cz_xmon(0, 1).matrix();
    CHECK_THAT(u(0, 0).real(), WithinAbs(-1.0, 1e-15));
    CHECK_THAT(u(1, 1).real(), WithinAbs(1.0, 1e-15));
    CHECK((u * u - CMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("U^Bell matrix", "[gates]") {
    const CMatrix u = u_bell_unitary();
    CHECK((u.adjoint() * u - CMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
    // |00> -> (|00> + |11>)/sqrt2
    CHECK_THAT(u(0, 0).real(), WithinAbs(kInvSqrt2, 1e-15));
    CHECK_THAT(u(3, 0).real(), WithinAbs(kInvSqrt2, 1e-15));
    // |10> -> (|10> - |01>)/sqrt2
    CHECK_THAT(u(2, 2).real(), WithinAbs(kInvSqrt2, 1e-15));
    CHECK_THAT(u(1, 2).real(), WithinAbs(-kInvSqrt2, 1e-15));
}

TEST_CASE("exchange Hamiltonian gate", "[gates]") {
    const ConventionChoice c = selected_convention();
    const CMatrix id = u_bell_from_xy({0.0, 0.0, 1.0}, c).matrix();
    CHECK((id - CMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);

    const CMatrix u = u_bell_from_xy({1.25, 1.0, std::numbers::pi}, c).matrix();
    CHECK_THAT(std::abs(u(0, 0) - cplx{kInvSqrt2}), WithinAbs(0.0, 1e-9));
    CHECK_THAT(std::abs(u(3, 0) - cplx{kInvSqrt2}), WithinAbs(0.0, 1e-9));
}

TEST_CASE("convention search", "[gates]") {
    const auto r = u_bell_convention_search();
    CHECK(r.table.size() == 8);
    REQUIRE(r.selected.has_value());
    CHECK(r.match_count() == 2);
    for (const auto &e : r.table) {
        if (e.matches) CHECK(e.deviation < 1e-9);
        // the first-listed qubit order never works
        if (e.choice.order == QubitOrder::jk) CHECK(!e.matches);
    }
    CHECK(r.selected->order == QubitOrder::kj);
    CHECK(r.selected->sigma_y == SigmaYSign::standard);
}

TEST_CASE("U^Bell decomposition", "[gates]") {
    const auto r = u_bell_decomposition();
    REQUIRE(r.matches);
    CHECK(r.deviation < 1e-9);
    CHECK(r.census == GateCensus{});
    StateVector s(2);
    for (const auto &g : r.best.steps) s.apply(g);
    CHECK_THAT(std::abs(s[0]), WithinAbs(kInvSqrt2, 1e-9));
    CHECK_THAT(std::abs(s[3]), WithinAbs(kInvSqrt2, 1e-9));
}

TEST_CASE("gate JSON round trip", "[gates]") {
    const GateSpec g = u_bell_matrix(1, 0);
    const GateSpec back = gate_from_json(gate_to_json(g));
    CHECK(back.targets() == g.targets());
    CHECK((back.matrix() - g.matrix()).cwiseAbs().maxCoeff() < 1e-15);
}
