// Copyright 2026 The HQNN Authors

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

namespace hqnn {

/// Base class for every error raised by the library. The concrete subclass
/// names the failing contract; `what()` carries the detail.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Invalid sizes or options passed to a constructor or generator.
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// Gate addresses a qubit outside the register.
class CircuitError : public Error {
  public:
    using Error::Error;
};

/// Parameter vector length does not match the circuit's parameter list.
class BindingError : public Error {
  public:
    using Error::Error;
};

/// Circuits cannot be composed (qubit mismatch, symbol collision).
class CompositionError : public Error {
  public:
    using Error::Error;
};

class ShapeError : public Error {
  public:
    using Error::Error;
};

/// Operation called in the wrong order, e.g. backward before forward.
class StateError : public Error {
  public:
    using Error::Error;
};

/// Empty or inconsistent datasets and labels.
class DataError : public Error {
  public:
    using Error::Error;
};

/// Malformed checkpoint or dataset file.
class FormatError : public Error {
  public:
    using Error::Error;
};

/// Training produced a non-finite value.
class NumericError : public Error {
  public:
    using Error::Error;
};

class IoError : public Error {
  public:
    using Error::Error;
};

} // namespace hqnn
