// Copyright 2026 The lossyboson Authors
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

namespace lossyboson {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shapes or photon numbers that do not line up.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Parameter outside its admissible range.
class RangeError : public Error {
 public:
  using Error::Error;
};

// Problem size beyond a configured limit (permanent size, desk-scale oracles).
class LimitError : public Error {
 public:
  using Error::Error;
};

// Input violates the assumptions of the approximate simulation pipeline.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

// Floating-point breakdown (negative or all-zero sampling weights).
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Malformed JSON/CSV or command-line values.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace lossyboson
