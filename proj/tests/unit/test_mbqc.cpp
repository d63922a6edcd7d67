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

#include "owqc/owqc.hpp"

using namespace owqc;
using Catch::Matchers::WithinAbs;

namespace {

StateVector basis_logical(int index) {
    StateVector s(2);
    s[0] = 0.0;
    s[static_cast<std::size_t>(index)] = 1.0;
    return s;
}

double cnot_fidelity(const MbqcProgram &p) {
    return process_fidelity(process_tomography(p, p.logical->inputs, p.logical->outputs), cnot_matrix());
}

} // namespace

TEST_CASE("Pauli strings", "[mbqc]") {
    const PauliString x = PauliString::single('X', 0), z = PauliString::single('Z', 0);
    CHECK((x * z).to_string() == "-iY0");
    CHECK(!x.commutes_with('Z', 0));
    CHECK(x.commutes_with('X', 0));
    CHECK(x.pow(2).to_string() == "+I");
    const PauliString p = PauliString::parse("-X1 Z2");
    CHECK(p.to_string() == "-X1 Z2");
    CHECK(p.pow(2).to_string() == "+I");
}

TEST_CASE("standard C-NOT forced branch", "[mbqc]") {
    const MbqcProgram p = cnot_standard_program();
    const BranchResult r = run_logical(p, basis_logical(0), {0, 0});
    REQUIRE(r.logical_fidelity);
    CHECK_THAT(*r.logical_fidelity, WithinAbs(1.0, 1e-10));
}

TEST_CASE("standard C-NOT every input and branch", "[mbqc]") {
    const MbqcProgram p = cnot_standard_program();
    CHECK(p.n_qubits == 4);
    CHECK(p.count_measurements() == 2);
    for (int in = 0; in < 4; ++in) {
        const auto branches = enumerate_logical(p, basis_logical(in));
        REQUIRE(branches.size() == 4);
        for (const auto &b : branches) {
            CHECK_THAT(b.probability, WithinAbs(0.25, 1e-12));
            CHECK_THAT(*b.logical_fidelity, WithinAbs(1.0, 1e-9));
        }
    }
    CHECK(cnot_fidelity(p) > 1.0 - 1e-8);
}

TEST_CASE("efficient C-NOT every input and branch", "[mbqc]") {
    const MbqcProgram p = cnot_efficient_program();
    CHECK(p.n_qubits == 3);
    CHECK(p.count_measurements() == 1);
    // i = 1 (control), j = 1 (target), s = 0 -> target_out carries 0
    const BranchResult r = run_logical(p, basis_logical(3), {0});
    CHECK_THAT(*r.logical_fidelity, WithinAbs(1.0, 1e-10));
    for (int in = 0; in < 4; ++in) {
        const auto branches = enumerate_logical(p, basis_logical(in));
        REQUIRE(branches.size() == 2);
        for (const auto &b : branches) {
            CHECK_THAT(b.probability, WithinAbs(0.5, 1e-12));
            CHECK_THAT(*b.logical_fidelity, WithinAbs(1.0, 1e-9));
        }
    }
    CHECK(cnot_fidelity(p) > 1.0 - 1e-8);
}

TEST_CASE("entangled logical input with a spectator", "[mbqc]") {
    // (|00> + |11>)/sqrt2 across control and a spectator, target |0>
    StateVector ent(3);
    ent[0] = kInvSqrt2;
    ent[5] = kInvSqrt2;
    for (const MbqcProgram &p : {cnot_standard_program(), cnot_efficient_program()}) {
        for (const auto &b : enumerate_logical(p, ent)) CHECK_THAT(*b.logical_fidelity, WithinAbs(1.0, 1e-9));
    }
}

TEST_CASE("entangling order matters for the efficient protocol", "[mbqc]") {
    CHECK(cnot_fidelity(cnot_efficient_program(true)) < 0.5);
}

TEST_CASE("frame mode matches physical corrections", "[mbqc]") {
    const MbqcProgram p = cnot_standard_program();
    for (const auto &b : enumerate_logical(p, basis_logical(2), FeedforwardMode::frame)) {
        CHECK_THAT(*b.logical_fidelity, WithinAbs(1.0, 1e-9));
    }
}

TEST_CASE("programs without measurements are unitary", "[mbqc]") {
    MbqcProgram p;
    p.name = "bell";
    p.n_qubits = 2;
    p.roles = {{RoleKind::control_in, ProductLabel::zero}, {RoleKind::ancilla, ProductLabel::zero}};
    p.steps.push_back(EntangleStep{u_bell_matrix(0, 1)});
    const auto branches = enumerate_branches(p, StateVector(2));
    REQUIRE(branches.size() == 1);
    CHECK_THAT(branches[0].probability, WithinAbs(1.0, 1e-12));

    MbqcProgram id;
    id.name = "identity";
    id.n_qubits = 1;
    id.roles = {{RoleKind::control_in, ProductLabel::zero}};
    const ProcessMatrix pm = process_tomography(id, {0}, {0});
    CHECK(process_fidelity(pm, CMatrix::Identity(2, 2)) > 1.0 - 1e-12);
}

TEST_CASE("impossible branches are reported", "[mbqc]") {
    MbqcProgram p;
    p.name = "xmeas";
    p.n_qubits = 1;
    p.roles = {{RoleKind::ancilla, ProductLabel::plus}};
    p.steps.push_back(MeasureStep{0, Basis::X});
    const auto branches = enumerate_branches(p, init_product_state(1, {ProductLabel::plus}));
    REQUIRE(branches.size() == 2);
    CHECK_THAT(branches[0].probability, WithinAbs(1.0, 1e-12));
    CHECK(branches[1].zero_probability);
    CHECK_THROWS_AS(run_program(p, init_product_state(1, {ProductLabel::plus}), std::vector<int>{1}), ImpossibleBranchError);
}

TEST_CASE("invalid programs are rejected", "[mbqc]") {
    MbqcProgram p = cnot_standard_program();
    p.steps.push_back(MeasureStep{0, Basis::X}); // measuring twice
    CHECK_THROWS_AS(validate(p), ValidationError);

    MbqcProgram q = cnot_standard_program();
    q.steps.insert(q.steps.begin(), EntangleStep{cz_xmon(0, 7)});
    CHECK_THROWS(validate(q));
}

TEST_CASE("program JSON round trip", "[mbqc]") {
    const MbqcProgram p = cnot_efficient_program();
    const MbqcProgram back = program_from_json(to_json(p));
    CHECK(to_json(back) == to_json(p));
    CHECK(cnot_fidelity(back) > 1.0 - 1e-8);
}

TEST_CASE("sampled runs are reproducible", "[mbqc]") {
    const MbqcProgram p = cnot_standard_program();
    Rng a(5), b(5);
    for (int i = 0; i < 8; ++i) {
        CHECK(run_program(p, embed_logical(p, basis_logical(i % 4)), a).outcomes ==
              run_program(p, embed_logical(p, basis_logical(i % 4)), b).outcomes);
    }
}

TEST_CASE("branch CSV", "[mbqc]") {
    const MbqcProgram p = cnot_efficient_program();
    std::vector<std::pair<std::string, BranchResult>> rows;
    for (auto &b : enumerate_logical(p, basis_logical(1))) rows.emplace_back("01", std::move(b));
    const std::string csv = branches_to_csv(rows);
    CHECK(csv.rfind("input,outcomes,probability,fidelity,zero_probability\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}
