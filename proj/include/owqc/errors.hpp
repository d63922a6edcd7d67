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
/**
 * @file
 * Exception hierarchy shared by every owqc module.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace owqc {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed call: wrong lengths, duplicate or out-of-range qubits.
class ArgumentError : public Error {
  public:
    using Error::Error;
};

/// A value that violates a numerical contract (non-unitary matrix,
/// fidelity outside (0,1], ...).
class ValidationError : public Error {
  public:
    using Error::Error;
};

/// Problem size beyond what a dense simulation supports.
class CapacityError : public Error {
  public:
    using Error::Error;
};

/// A forced measurement outcome that has (numerically) zero probability.
class ImpossibleBranchError : public Error {
  public:
    using Error::Error;
};

class ConvergenceError : public Error {
  public:
    using Error::Error;
};

class IntegrationError : public Error {
  public:
    using Error::Error;
};

} // namespace owqc
