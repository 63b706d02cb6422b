// Copyright 2026 The cqed Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace cqed {

/// Base class for all library failures that are part of an operation's
/// contract (as opposed to precondition violations, which throw
/// std::invalid_argument).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The dense eigensolver did not converge.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Doubling the charge cutoff moved a requested level by more than the
/// configured tolerance.
class CutoffError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

/// A requested dressed-state label is truncated away or ambiguous.
class MissingLabel : public Error {
public:
    using Error::Error;
};

class InsufficientData : public Error {
public:
    using Error::Error;
};

/// Iteration budget exhausted, or the optimum is not locally identifiable.
class NoConvergence : public Error {
public:
    using Error::Error;
};

/// Decay fit ran to the upper time-constant bound.
class NonDecaying : public Error {
public:
    using Error::Error;
};

class EmptyColumn : public Error {
public:
    using Error::Error;
};

/// Malformed input file.
class DataError : public Error {
public:
    using Error::Error;
};

}  // namespace cqed
