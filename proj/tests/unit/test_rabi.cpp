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

#include "oracles.hpp"
#include "owqc/owqc.hpp"

using namespace owqc;
using Catch::Matchers::WithinAbs;

TEST_CASE("decoupled Rabi site", "[rabi]") {
    const QrsSpectrum s = diagonalize_qrs({1.0, 1.0, 0.0, 20});
    // +-1/2 + n: -0.5, 0.5, 0.5, 1.5, ...
    CHECK_THAT(s.eigenvalues(0), WithinAbs(-0.5, 1e-12));
    CHECK_THAT(s.eigenvalues(1), WithinAbs(0.5, 1e-12));
    CHECK_THAT(s.eigenvalues(2), WithinAbs(0.5, 1e-12));
    CHECK_THAT(s.eigenvalues(3), WithinAbs(1.5, 1e-12));
}

TEST_CASE("ultrastrong Rabi spectrum", "[rabi]") {
    const QrsSpectrum s = diagonalize_qrs({1.0, 1.0, 0.5, 60});
    for (int i = 0; i < 3; ++i) CHECK_THAT(s.eigenvalues(i), WithinAbs(oracle::kQrsLevelsG05[i], 1e-10));
    CHECK(s.eigenvalues(0) < -0.25);
    CHECK(s.convergence_change < 1e-8);
    CHECK(s.chi_01 > 0.0);
}

TEST_CASE("unconverged cutoff is reported", "[rabi]") {
    CHECK_THROWS_AS(diagonalize_qrs({1.0, 1.0, 2.0, 10}), ConvergenceError);
    CHECK_THROWS_AS(diagonalize_qrs({1.0, 1.0, -0.1, 30}), ValidationError);
}

TEST_CASE("two-site effective model", "[rabi]") {
    const QrsSpectrum s = diagonalize_qrs({1.0, 1.0, 0.3, 30});
    const TwoSiteEffective same = build_two_site(s, s, {1e-5, 1e-5}, {1e-3, 1e-3});
    CHECK(same.Delta == 0.0);
    CHECK(same.near_degenerate);

    const TwoSiteEffective free = build_two_site(s, s, {0.0, 0.0}, {0.0, 0.0});
    CHECK(free.coupling_static == 0.0);
    CHECK(free.coupling_drive == 0.0);

    const TwoSiteEffective e = build_two_site(RabiWorkingPoint{});
    CHECK(e.Delta != 0.0);
    CHECK(!e.near_degenerate);
    CHECK(std::abs(e.delta) > 10.0 * std::abs(e.Delta));
}

TEST_CASE("flux amplitudes", "[rabi]") {
    const TwoSiteEffective e = build_two_site(RabiWorkingPoint{});
    const auto g0 = flux_gammas(e, 0.0, 0.0, 1e-5, selected_convention());
    CHECK(g0[0] == 0.0);
    CHECK(g0[1] == 0.0);
    // J1 = J2 leaves one of the two tones
    const auto g = flux_gammas(e, 1.0, 1.0, 1e-5, selected_convention());
    CHECK((g[0] == 0.0 || g[1] == 0.0));
}

TEST_CASE("driven propagator", "[rabi]") {
    const TwoSiteEffective e = build_two_site(RabiWorkingPoint{});
    const double xi = 1e-3 * std::abs(e.Delta);
    const DrivenPropagator u = integrate_driven(e, 1.25, 1.0, xi);
    CHECK(unitarity_deviation(u.qrs_basis) < 1e-8);
    CHECK(u.step_change < 1e-8);
    const CMatrix target = rwa_reference(1.25, 1.0, std::numbers::pi);
    const double f = std::norm((target.adjoint() * u.logical).trace()) / 16.0;
    CHECK(f > 0.999);

    // no exchange, no drive: only the static coupling remains
    const TwoSiteEffective free = build_two_site(diagonalize_qrs(RabiWorkingPoint{}.site1),
                                                 diagonalize_qrs(RabiWorkingPoint{}.site2), {0.0, 0.0}, {1e-3, 1e-3});
    const DrivenPropagator id = integrate_driven(free, 0.0, 0.0, xi);
    CHECK((id.qrs_basis - CMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("RWA reference is U^Bell", "[rabi]") {
    const CMatrix d = rwa_reference(1.25, 1.0, std::numbers::pi) - u_bell_unitary();
    CHECK(d.cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("RWA validity sweep", "[rabi]") {
    const TwoSiteEffective e = build_two_site(RabiWorkingPoint{});
    const double D = std::abs(e.Delta);
    const SweepReport r = rwa_validity_sweep(e, {1e-3 * D, 1e-2 * D, 1e-1 * D});
    REQUIRE(r.rows.size() == 3);
    CHECK(r.monotone);
    CHECK(r.rows[0].fidelity > 0.999);
    CHECK(1.0 - r.rows[0].fidelity < 1.0 - r.rows[1].fidelity);
    CHECK(1.0 - r.rows[1].fidelity < 1.0 - r.rows[2].fidelity);
    const std::string csv = sweep_to_csv(r, false);
    CHECK(csv.rfind("xi,Delta,delta,fidelity,wall_time\n", 0) == 0);
}
