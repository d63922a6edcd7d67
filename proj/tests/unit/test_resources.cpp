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

TEST_CASE("4x4 lattice cost", "[resources]") {
    const ProtocolCost c = estimate(cluster_workload(4, 4), DeviceModel{});
    CHECK(c.census.at(GateKind::cz) == 24);
    CHECK(c.depth == 4);
    CHECK_THAT(c.estimated_fidelity, WithinAbs(oracle::lattice_4x4_fidelity(), 1e-12));
    CHECK_THAT(c.estimated_time, WithinAbs(0.20, 1e-12));
}

TEST_CASE("C-NOT costs", "[resources]") {
    const ComparisonReport r = compare_protocols(DeviceModel{});
    CHECK_THAT(r.standard.estimated_fidelity, WithinAbs(oracle::standard_cnot_fidelity(), 1e-12));
    CHECK_THAT(r.standard.estimated_time, WithinAbs(4.15, 1e-9));
    CHECK(r.standard.estimated_time < 5.0);
    CHECK_THAT(r.efficient.estimated_fidelity, WithinAbs(0.963, 0.002));
    CHECK(r.efficient.estimated_time <= 2.5);
    CHECK(r.standard.n_qubits == 4);
    CHECK(r.standard.n_measurements == 2);
    CHECK(r.efficient.n_qubits == 3);
    CHECK(r.efficient.n_measurements == 1);
    CHECK_THAT(r.ancilla_reduction, WithinAbs(0.25, 1e-15));
}

TEST_CASE("U^Bell cost", "[resources]") {
    CHECK_THAT(ubell_cost(DeviceModel{}).estimated_fidelity, WithinAbs(0.988, 0.003));
    DeviceModel d;
    d.f_1q = 1.0;
    CHECK_THAT(ubell_cost(d).estimated_fidelity, WithinAbs(0.995 * 0.995, 1e-12));
    const double t = ubell_cost(DeviceModel{}).estimated_time;
    CHECK(t >= 0.13);
    CHECK(t <= 0.27);
}

TEST_CASE("degenerate devices and censuses", "[resources]") {
    const ProtocolCost empty = estimate(Census{}, DeviceModel{});
    CHECK(empty.estimated_fidelity == 1.0);
    CHECK(empty.estimated_time == 0.0);

    const ComparisonReport perfect = compare_protocols(DeviceModel::perfect());
    CHECK(perfect.standard.estimated_fidelity == 1.0);
    CHECK(perfect.efficient.estimated_fidelity == 1.0);
}

TEST_CASE("parallel readout shortens the standard protocol", "[resources]") {
    DeviceModel d;
    d.meas_parallelism = MeasParallelism::parallel;
    CHECK_THAT(compare_protocols(d).standard.estimated_time, WithinAbs(2.15, 1e-9));
}

TEST_CASE("capacity planner", "[resources]") {
    const CapacityPlan p16 = capacity_planner(16);
    CHECK(p16.standard_cnots == 4);
    CHECK(p16.efficient_cnots == 5);
    const CapacityPlan p20 = capacity_planner(20);
    CHECK(p20.standard_cnots == 5);
    CHECK(p20.efficient_cnots == 6);
    const CapacityPlan p3 = capacity_planner(3);
    CHECK(p3.standard_cnots == 0);
    CHECK(p3.efficient_cnots == 1);
    CHECK_THROWS_AS(capacity_planner(2), ArgumentError);

    const CapacityReport r = capacity_report(20, DeviceModel{});
    CHECK_THAT(r.standard_fidelity_with_generation, WithinAbs(std::pow(oracle::standard_cnot_fidelity(), 5), 1e-12));
}

TEST_CASE("device JSON", "[resources]") {
    DeviceModel d;
    d.f_cz = 0.99;
    const DeviceModel back = device_from_json(to_json(d));
    CHECK(back.f_cz == 0.99);
    CHECK(back.t_meas_ff == d.t_meas_ff);

    nlohmann::json bad = to_json(d);
    bad["f_cz"] = 1.5;
    CHECK_THROWS_AS(device_from_json(bad), ValidationError);
    nlohmann::json unknown = to_json(d);
    unknown["f_swap"] = 0.9;
    CHECK_THROWS_AS(device_from_json(unknown), ValidationError);
}

TEST_CASE("cost table lists the quoted fidelities", "[resources]") {
    const ComparisonReport r = compare_protocols(DeviceModel{});
    const std::string t = cost_table({estimate(cluster_workload(4, 4), DeviceModel{}), r.standard, r.efficient});
    CHECK(t.find("0.887") != std::string::npos);
    CHECK(t.find("0.946") != std::string::npos);
    CHECK(t.find("0.964") != std::string::npos);
    CHECK(t.find("0.963542") != std::string::npos);
}
