// Copyright 2026 The Littlewood Cone Authors
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

#ifndef LITTLEWOOD_ERRORS_HPP_
#define LITTLEWOOD_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace littlewood {

// Surd with zero denominator or negative radicand.
class MalformedSurd : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Interval refinement reached the precision cap without separating the
// value from zero, and no exact path was available.
class UndecidedSign : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller-supplied parameter outside the documented domain (N < 2, eps <= 0,
// ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A partial quotient exceeds the declared bound M.
class ProfileViolation : public std::runtime_error {
 public:
  ProfileViolation(const std::string& what, std::size_t index)
      : std::runtime_error(what), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

// A mathematical guarantee failed to hold (Dirichlet point missing, lcm bound
// broken). Always indicates a bug.
class InternalInconsistency : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class NonTransversal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonPositiveDenominator : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RootIsolationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::invalid_argument(what + " (at position " +
                              std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

}  // namespace littlewood

#endif  // LITTLEWOOD_ERRORS_HPP_
