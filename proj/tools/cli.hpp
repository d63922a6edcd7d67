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
#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace owqc::cli {

/// Exit codes.
enum ExitCode : int {
    kOk = 0,
    kValidation = 1,  ///< bad input, usage error or tool failure
    kCapacity = 2,
    kDiscrepancy = 3, ///< a checked claim does not hold
};

/// Runs one subcommand. args excludes the program name.
int run(const std::vector<std::string> &args, std::ostream &out = std::cout, std::ostream &err = std::cerr);

/// Hex SHA-256 of `data`.
std::string sha256_hex(const std::string &data);

} // namespace owqc::cli
