// Copyright 2026 The nmrqc Authors
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

namespace nmrqc {

/// Malformed molecule, circuit, sequence or state input.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// A circuit could not be lowered to a pulse sequence.
class CompileError : public std::runtime_error {
 public:
  explicit CompileError(const std::string& what) : std::runtime_error(what) {}
};

/// Two-qubit gate requested on spins with no effective coupling.
class NotDirectlyCoupledError : public CompileError {
 public:
  NotDirectlyCoupledError(int i, int k)
      : CompileError("spins " + std::to_string(i) + " and " + std::to_string(k) +
                     " are not directly coupled; route through SWAPs"),
        first(i),
        second(k) {}
  int first;
  int second;
};

/// No coupling path connects two spins.
class RoutingError : public CompileError {
 public:
  explicit RoutingError(const std::string& what) : CompileError(what) {}
};

/// Physically inconsistent input or a state that fails a structural check.
class PhysicsError : public std::runtime_error {
 public:
  explicit PhysicsError(const std::string& what) : std::runtime_error(what) {}
};

/// A state is not of pseudo-pure form within tolerance.
class StructureError : public PhysicsError {
 public:
  StructureError(const std::string& what, double worst)
      : PhysicsError(what), worst_deviation(worst) {}
  double worst_deviation;
};

/// File system failure.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nmrqc
