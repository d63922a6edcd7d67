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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <unistd.h>

#include "cli.hpp"
#include "owqc/owqc.hpp"

namespace fs = std::filesystem;
using owqc::acceptance::CriterionResult;

namespace {

std::string slurp(const fs::path &p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

// Two complete CLI runs with the same seed must produce byte-identical files.
CriterionResult determinism() {
    CriterionResult r;
    r.id = "C9";
    r.title = "selftest --seed 0 is byte-reproducible";
    r.time_limit = 600.0;
    const auto t0 = std::chrono::steady_clock::now();
    const fs::path base = fs::temp_directory_path() / ("owqc_acceptance_" + std::to_string(::getpid()));
    const fs::path a = base / "a", b = base / "b";
    fs::remove_all(base);
    std::ostringstream sink;
    const int ca = owqc::cli::run({"--seed", "0", "--out", a.string(), "selftest"}, sink, sink);
    const int cb = owqc::cli::run({"--seed", "0", "--out", b.string(), "selftest"}, sink, sink);
    r.passed = ca == cb;
    r.details.push_back("exit codes " + std::to_string(ca) + " / " + std::to_string(cb));
    std::size_t files = 0;
    for (const auto &e : fs::directory_iterator(a)) {
        const fs::path other = b / e.path().filename();
        const bool same = fs::exists(other) && slurp(e.path()) == slurp(other);
        if (!same) r.details.push_back("differs: " + e.path().filename().string());
        r.passed = r.passed && same;
        ++files;
    }
    r.passed = r.passed && files > 0;
    r.details.push_back(std::to_string(files) + " files compared");
    fs::remove_all(base);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

} // namespace

int main() {
    auto results = owqc::acceptance::run_library_criteria();
    results.push_back(determinism());
    int failed = 0;
    for (const auto &r : results) {
        const bool in_time = r.time_limit <= 0.0 || r.seconds <= r.time_limit;
        std::cout << owqc::acceptance::status_line(r, true) << (in_time ? "" : "  [over time limit]") << "\n";
        for (const auto &d : r.details) std::cout << "      " << d << "\n";
        if (!r.passed || !in_time) ++failed;
    }
    std::cout << results.size() - failed << "/" << results.size() << " criteria pass\n";
    return failed == 0 ? 0 : 1;
}
