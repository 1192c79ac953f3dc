// Copyright 2026 The dpfl Authors
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

#ifndef DPFL_ERRORS_HPP_
#define DPFL_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace dpfl {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed user input: bad probability tables, bad JSON, bad parameters.
// The CLI maps this to exit code 1.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

// KL divergence D(p||q) requested with q_i = 0 while p_i > 0.
class AbsoluteContinuityViolation : public Error {
 public:
  explicit AbsoluteContinuityViolation(const std::string& what) : Error(what) {}
};

// A Bayes inversion hit a column with zero total mass.
class ZeroEvidence : public Error {
 public:
  explicit ZeroEvidence(const std::string& what) : Error(what) {}
};

// An encoder update produced a non-finite exponent.
class NonFiniteExponent : public Error {
 public:
  explicit NonFiniteExponent(const std::string& what) : Error(what) {}
};

// A covariance matrix is numerically singular or a log-determinant is
// non-finite.
class SingularCovariance : public Error {
 public:
  explicit SingularCovariance(const std::string& what) : Error(what) {}
};

// The diagonal jitter needed to restore positive definiteness exceeded the
// repair budget (1e-6 times the trace).
class PSDRepairExceeded : public Error {
 public:
  explicit PSDRepairExceeded(const std::string& what) : Error(what) {}
};

// A chart or frontier was requested for an empty record list.
class EmptyRecords : public Error {
 public:
  explicit EmptyRecords(const std::string& what) : Error(what) {}
};

}  // namespace dpfl

#endif  // DPFL_ERRORS_HPP_
