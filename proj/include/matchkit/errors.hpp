// Copyright 2026 The matchkit Authors.
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

#ifndef MATCHKIT_ERRORS_HPP_
#define MATCHKIT_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace matchkit {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input text (instance files, DIMACS models, ...).
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

// A caller violated a documented precondition.
class ContractError : public Error {
 public:
  explicit ContractError(const std::string& what) : Error(what) {}
};

// A rotation was eliminated from a matching it is not exposed on.
class ExposureError : public ContractError {
 public:
  explicit ExposureError(const std::string& what) : ContractError(what) {}
};

// A configured resource cap (enumeration size, solver conflicts) was hit.
class LimitError : public Error {
 public:
  explicit LimitError(const std::string& what) : Error(what) {}
};

// A SAT-SM instance failed validation. The full report travels separately;
// the message carries a one-line summary per violated condition.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

// A generated CNF failed the structural audit. Signals a generator bug.
class AuditError : public Error {
 public:
  explicit AuditError(const std::string& what) : Error(what) {}
};

// The reduction could not complete a construction step. Signals invalid
// input that slipped validation.
class ConstructionError : public Error {
 public:
  explicit ConstructionError(const std::string& what) : Error(what) {}
};

// Random instance generation failed.
class GenerationError : public Error {
 public:
  GenerationError(const std::string& what, bool infeasible)
      : Error(what), infeasible_(infeasible) {}
  // True when the parameters admit no valid instance at all, false when the
  // rejection budget ran out.
  bool infeasible() const { return infeasible_; }

 private:
  bool infeasible_;
};

}  // namespace matchkit

#endif  // MATCHKIT_ERRORS_HPP_
