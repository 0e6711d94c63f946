// Copyright 2026 The CCC Toolkit Authors.
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

#ifndef CCC_ERRORS_H_
#define CCC_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ccc {

// Base for every error the toolkit raises. The CLI maps subclasses onto
// distinct exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// Input violated its declared format. Carries the 1-based line (or block)
// number where the violation was found; 0 when not applicable.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t location)
      : Error(what), location_(location) {}
  std::size_t location() const { return location_; }

 private:
  std::size_t location_;
};

// Caller passed an argument outside an operation's precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Scorer endpoint unreachable after retries.
class TransportError : public Error {
 public:
  using Error::Error;
};

// Scorer endpoint answered with a malformed or out-of-contract body.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// What loaders do with a malformed row.
enum class ErrorPolicy { kAbort, kSkip };

}  // namespace ccc

#endif  // CCC_ERRORS_H_
