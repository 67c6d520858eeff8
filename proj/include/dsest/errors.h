// Copyright 2026 The dsest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DSEST_ERRORS_H_
#define DSEST_ERRORS_H_

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dsest {

enum class ErrorCode {
  kInvalidArgument,
  kSingularMatrix,
  kInfeasible,
  kOutsideValidity,
};

// Base class for every error thrown by the library. The code lets callers
// (the CLI in particular) map failures onto exit statuses without string
// matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// A parameter violates its documented domain. `field` names the parameter
// (e.g. "k", "sigma_q2").
class InvalidArgumentError : public Error {
 public:
  InvalidArgumentError(std::string field, const std::string& message)
      : Error(ErrorCode::kInvalidArgument, field + ": " + message),
        field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// A block that must be inverted (or whose log-determinant is needed) is
// numerically singular. `indices` are the joint-covariance indices whose
// pivots fell below tolerance.
class SingularMatrixError : public Error {
 public:
  SingularMatrixError(std::vector<int> indices, const std::string& message)
      : Error(ErrorCode::kSingularMatrix, message),
        indices_(std::move(indices)) {}

  const std::vector<int>& indices() const { return indices_; }

 private:
  std::vector<int> indices_;
};

// A requested operating point cannot be reached, e.g. a distortion target
// outside [d_min, d_max]. The reachable interval is attached.
class InfeasibleError : public Error {
 public:
  InfeasibleError(double reachable_min, double reachable_max,
                  const std::string& message)
      : Error(ErrorCode::kInfeasible, message),
        reachable_min_(reachable_min),
        reachable_max_(reachable_max) {}

  double reachable_min() const { return reachable_min_; }
  double reachable_max() const { return reachable_max_; }

 private:
  double reachable_min_;
  double reachable_max_;
};

// A closed-form expression was asked to evaluate a logarithm of a
// nonpositive quantity. `term` names the failing sub-expression.
class OutsideValidityError : public Error {
 public:
  OutsideValidityError(std::string term, const std::string& message)
      : Error(ErrorCode::kOutsideValidity, term + ": " + message),
        term_(std::move(term)) {}

  const std::string& term() const { return term_; }

 private:
  std::string term_;
};

}  // namespace dsest

#endif  // DSEST_ERRORS_H_
