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

// Runs the three-qubit C-NOT on a random logical input and prints every
// measurement branch.
#include <cstdio>

#include "owqc/owqc.hpp"

int main() {
    using namespace owqc;
    const MbqcProgram p = cnot_efficient_program();
    Rng rng(7);

    StateVector logical(2);
    double norm = 0.0;
    for (std::size_t i = 0; i < logical.dim(); ++i) {
        logical[i] = cplx{rng.uniform() - 0.5, rng.uniform() - 0.5};
        norm += std::norm(logical[i]);
    }
    for (std::size_t i = 0; i < logical.dim(); ++i) logical[i] /= std::sqrt(norm);

    std::printf("%s: %d qubits, %zu measurement(s)\n", p.name.c_str(), p.n_qubits, p.count_measurements());
    for (const auto &b : enumerate_logical(p, logical)) {
        std::printf("  s=%d  p=%.3f  F=%.12f\n", b.outcomes.empty() ? -1 : b.outcomes[0], b.probability,
                    b.logical_fidelity.value_or(0.0));
    }
    const ProcessMatrix pm = process_tomography(p, p.logical->inputs, p.logical->outputs);
    std::printf("process fidelity vs CNOT: %.12f\n", process_fidelity(pm, cnot_matrix()));
}
