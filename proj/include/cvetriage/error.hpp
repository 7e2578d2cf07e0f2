// Copyright 2026 The cvetriage Authors
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

#ifndef CVETRIAGE_ERROR_HPP_
#define CVETRIAGE_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cvetriage {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user input: malformed files, schema violations, illegal values.
// The CLI maps these to exit status 1.
class InputError : public Error {
 public:
  using Error::Error;
};

// Malformed syntax at a known position (byte offset or 1-based line).
class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t position)
      : InputError(what), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class SchemaError : public InputError {
 public:
  using InputError::InputError;
};

class DuplicateIdError : public InputError {
 public:
  using InputError::InputError;
};

class DimensionError : public InputError {
 public:
  using InputError::InputError;
};

// A broken internal invariant. The CLI maps these to exit status 2.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace cvetriage

#endif  // CVETRIAGE_ERROR_HPP_
