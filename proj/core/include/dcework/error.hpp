// Copyright 2026 The dcework Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace dce {

/// Base of every exception thrown by dcework.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid arguments: bad mode index, non-positive length, malformed input.
class DomainError : public Error {
public:
    using Error::Error;
};

/// An iterative method (root bracketing, quadrature, differentiation,
/// branch tracking) did not reach its target accuracy.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// A trace or exponential that does not exist (singular [J]-I, overflow).
class DivergenceError : public Error {
public:
    using Error::Error;
};

/// Resonance classification could not assign a unique case.
class AmbiguityError : public Error {
public:
    using Error::Error;
};

/// Fock truncation too small for the requested accuracy.
class TruncationError : public Error {
public:
    using Error::Error;
};

/// Closed-form product requested for resonances that share a mode.
class CoupledCaseError : public Error {
public:
    using Error::Error;
};

}  // namespace dce
