// Copyright 2026 The loclus Authors.
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

#ifndef LOCLUS_ERROR_HPP_
#define LOCLUS_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace loclus {

/// Base class for all loclus errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or unreadable input data (files, ids out of range, ...).
/// The CLI maps these to exit code 2.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Violated mathematical precondition (empty set, zero denominator,
/// parameter out of range, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Iterative solver failed to converge, or capacity scaling overflowed
/// the 63-bit integer budget.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace loclus

#endif  // LOCLUS_ERROR_HPP_
