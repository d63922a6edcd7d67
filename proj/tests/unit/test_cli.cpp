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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
    int code = 0;
    std::string out, err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    Run r;
    r.code = owqc::cli::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

fs::path scratch(const std::string &name) {
    const fs::path p = fs::temp_directory_path() / "owqc_unit" / name;
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path &p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

} // namespace

TEST_CASE("sha256", "[cli]") {
    CHECK(owqc::cli::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("cluster command", "[cli]") {
    const fs::path d = scratch("cluster");
    const Run r = cli({"--out", d.string(), "cluster", "--h", "4", "--l", "4", "--verify"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["gates"] == 24);
    CHECK(j["layers"] == 4);
    CHECK(j["verification"]["fidelity"].get<double>() > 1.0 - 1e-9);

    const json m = json::parse(slurp(d / "manifest.json"));
    CHECK(m["command"] == "cluster");
    CHECK(m["outputs"] == json::array({"cluster.json"}));
    CHECK(m["config_digest"].get<std::string>().size() == 64);
}

TEST_CASE("efficient C-NOT branches", "[cli]") {
    const fs::path d = scratch("cnot");
    const Run r = cli({"--out", d.string(), "--format", "csv", "cnot", "--variant", "efficient", "--all-branches"});
    REQUIRE(r.code == 0);
    std::istringstream csv(slurp(d / "cnot_efficient_branches.csv"));
    std::string line;
    std::getline(csv, line);
    int rows = 0;
    while (std::getline(csv, line)) {
        ++rows;
        CHECK(line.find(",1") != std::string::npos);
    }
    CHECK(rows == 8);
    CHECK(r.out == slurp(d / "cnot_efficient_branches.csv"));
}

TEST_CASE("estimate command", "[cli]") {
    const fs::path d = scratch("estimate");
    const Run r = cli({"--out", d.string(), "--format", "text", "estimate"});
    REQUIRE(r.code == 0);
    for (const char *v : {"0.887", "0.946", "0.963"}) CHECK(r.out.find(v) != std::string::npos);

    // the written device file reads back as the same configuration
    const Run again = cli({"--out", (d / "again").string(), "--device", (d / "device.json").string(), "estimate"});
    REQUIRE(again.code == 0);
    CHECK(slurp(d / "estimate.json") == slurp(d / "again" / "estimate.json"));
}

TEST_CASE("usage errors and capacity", "[cli]") {
    const fs::path d = scratch("errors");
    CHECK(cli({"--help"}).code == 0);
    CHECK(cli({"--out", d.string()}).code == 1);
    CHECK(cli({"--out", d.string(), "cnot", "--variant", "bogus"}).code == 1);
    CHECK(cli({"--out", d.string(), "--f-cz", "1.5", "estimate"}).code == 1);
    CHECK(cli({"--out", d.string(), "--device", (d / "missing.json").string(), "estimate"}).code == 1);
    CHECK(cli({"--out", d.string(), "cluster", "--h", "5", "--l", "5", "--verify"}).code == 2);
    CHECK(cli({"--out", d.string(), "persistence", "--n", "11"}).code == 2);
}

TEST_CASE("same seed, same bytes", "[cli]") {
    const fs::path a = scratch("seed_a"), b = scratch("seed_b");
    REQUIRE(cli({"--seed", "3", "--out", a.string(), "cnot"}).code == 0);
    REQUIRE(cli({"--seed", "3", "--out", b.string(), "cnot"}).code == 0);
    for (const char *f : {"manifest.json", "cnot_standard.json", "cnot_standard_branches.csv"}) {
        CHECK(slurp(a / f) == slurp(b / f));
    }
}

TEST_CASE("persistence command", "[cli]") {
    const fs::path d = scratch("persistence");
    const Run r = cli({"--out", d.string(), "persistence", "--state", "chain", "--n", "4"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["min_measurements_found"] == 2);
    CHECK(j["witness_replay_ok"] == true);
}
