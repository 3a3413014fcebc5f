// Copyright 2026 The roughou Authors
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

#include <stdexcept>
#include <string>

namespace roughou {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: non-symmetric matrix, bad config, unreadable file.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Series did not converge, cancellation too severe, negative embedding eigenvalue.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Grids or dimensions of two objects do not line up.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Problem size beyond a guarded limit.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// Lift flavor is not the one the operation requires.
class FlavorError : public Error {
 public:
  using Error::Error;
};

/// Gram matrix singular or too ill-conditioned to invert.
class EstimationError : public Error {
 public:
  EstimationError(const std::string& what, double condition)
      : Error(what), condition_(condition) {}
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

}  // namespace roughou
