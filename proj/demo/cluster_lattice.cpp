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

// Builds a small cluster lattice and checks it against the reference.
#include <cstdio>
#include <cstdlib>

#include "owqc/owqc.hpp"

int main(int argc, char **argv) {
    const int h = argc > 1 ? std::atoi(argv[1]) : 4;
    const int l = argc > 2 ? std::atoi(argv[2]) : 4;
    const owqc::LatticeSchedule s = owqc::build_schedule(h, l);
    std::printf("%dx%d lattice: %zu CZ gates in %d layers\n", h, l, s.edge_count(), s.non_empty_layers());
    const owqc::VerificationReport v = owqc::verify_cluster(h, l);
    std::printf("fidelity to reference %.15f\n", v.fidelity);
    return v.fidelity > 1.0 - 1e-9 ? 0 : 1;
}
