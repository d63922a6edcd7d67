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

TEST_CASE("product states", "[core]") {
    const auto z = init_product_state(1, {ProductLabel::zero});
    CHECK(std::abs(z[0] - cplx{1.0}) < 1e-15);
    CHECK(std::abs(z[1]) < 1e-15);

    const auto m = init_product_state(1, {ProductLabel::minus});
    CHECK_THAT(m[0].real(), WithinAbs(-kInvSqrt2, 1e-15));
    CHECK_THAT(m[1].real(), WithinAbs(kInvSqrt2, 1e-15));

    const auto pp = init_product_state(2, {ProductLabel::plus, ProductLabel::plus});
    for (std::size_t i = 0; i < 4; ++i) CHECK_THAT(pp[i].real(), WithinAbs(0.5, 1e-15));

    CHECK_THROWS_AS(init_product_state(2, {ProductLabel::zero}), ArgumentError);
}

TEST_CASE("gate application", "[core]") {
    auto s = apply_gate(StateVector(2), cz_xmon(0, 1));
    CHECK_THAT(s[0].real(), WithinAbs(-1.0, 1e-15));

    auto one_one = init_product_state(2, {ProductLabel::one, ProductLabel::one});
    one_one = apply_gate(one_one, cz_xmon(0, 1));
    CHECK_THAT(one_one[3].real(), WithinAbs(1.0, 1e-15));

    const auto h = apply_gate(StateVector(1), hadamard(0));
    CHECK_THAT(h[0].real(), WithinAbs(kInvSqrt2, 1e-15));
    CHECK_THAT(h[1].real(), WithinAbs(kInvSqrt2, 1e-15));

    // qubit 0 is the most significant bit
    const auto x0 = apply_gate(StateVector(2), pauli_x(0));
    CHECK_THAT(std::abs(x0[2]), WithinAbs(1.0, 1e-15));
}

TEST_CASE("measurement", "[core]") {
    auto plus = init_product_state(1, {ProductLabel::plus});
    auto [post, rec] = measure(plus, 0, Basis::X, Forced{0});
    CHECK_THAT(rec.probability, WithinAbs(1.0, 1e-12));
    CHECK_THAT(state_fidelity(post, plus), WithinAbs(1.0, 1e-12));
    CHECK_THROWS_AS(measure(plus, 0, Basis::X, Forced{1}), ImpossibleBranchError);

    auto [m1, r1] = measure(StateVector(1), 0, Basis::X, Forced{1});
    CHECK_THAT(r1.probability, WithinAbs(0.5, 1e-12));
    CHECK_THAT(m1[0].real(), WithinAbs(kInvSqrt2, 1e-12));
    CHECK_THAT(m1[1].real(), WithinAbs(-kInvSqrt2, 1e-12));

    const auto bell = StateVector::from_amplitudes({kInvSqrt2, 0.0, 0.0, kInvSqrt2});
    auto [b, rb] = measure(bell, 1, Basis::Z, Forced{0});
    CHECK_THAT(rb.probability, WithinAbs(0.5, 1e-12));
    CHECK_THAT(std::abs(b[0]), WithinAbs(1.0, 1e-12));
}

TEST_CASE("sampled measurement is seed-deterministic", "[core]") {
    std::vector<int> a, b;
    Rng r1(42), r2(42);
    for (int i = 0; i < 32; ++i) {
        a.push_back(measure(StateVector(1), 0, Basis::X, std::ref(r1)).second.outcome);
        b.push_back(measure(StateVector(1), 0, Basis::X, std::ref(r2)).second.outcome);
    }
    CHECK(a == b);
}

TEST_CASE("reduced density and Schmidt rank", "[core]") {
    const auto r0 = reduced_density(StateVector(2), {0});
    CHECK_THAT(r0.entries(0, 0).real(), WithinAbs(1.0, 1e-15));
    CHECK_THAT(std::abs(r0.entries(1, 1)), WithinAbs(0.0, 1e-15));

    const auto bell = StateVector::from_amplitudes({kInvSqrt2, 0.0, 0.0, kInvSqrt2});
    const auto rb = reduced_density(bell, {0});
    CHECK_THAT(rb.entries(0, 0).real(), WithinAbs(0.5, 1e-15));
    CHECK_THAT(rb.entries(1, 1).real(), WithinAbs(0.5, 1e-15));

    const auto c3 = StateVector::from_amplitudes(oracle::mpmc3());
    const auto ev = reduced_density(c3, {0, 1}).eigenvalues();
    CHECK_THAT(ev(0), WithinAbs(0.0, 1e-12));
    CHECK_THAT(ev(1), WithinAbs(0.0, 1e-12));
    CHECK_THAT(ev(2), WithinAbs(0.5, 1e-12));
    CHECK_THAT(ev(3), WithinAbs(0.5, 1e-12));

    CHECK(schmidt_rank(StateVector(2), {0}) == 1);
    CHECK(schmidt_rank(bell, {0}) == 2);
    // U^Bell on (1,2) of two Bell pairs: rank 2 across {0,1}|{2,3}, 4 across {0,2}|{1,3}
    CHECK(schmidt_rank(build_mpmc_layered(4).state, {0, 1}) == oracle::kMpmc4RankCut01);
    CHECK(schmidt_rank(build_mpmc_layered(4).state, {0, 2}) == oracle::kMpmc4RankCut02);
}

TEST_CASE("state fidelity", "[core]") {
    const auto zero = StateVector(1);
    const auto one = init_product_state(1, {ProductLabel::one});
    const auto plus = init_product_state(1, {ProductLabel::plus});
    CHECK_THAT(state_fidelity(zero, zero), WithinAbs(1.0, 1e-15));
    CHECK_THAT(state_fidelity(zero, one), WithinAbs(0.0, 1e-15));
    CHECK_THAT(state_fidelity(plus, zero), WithinAbs(0.5, 1e-15));
    CHECK_THROWS_AS(state_fidelity(zero, StateVector(2)), ArgumentError);
}
