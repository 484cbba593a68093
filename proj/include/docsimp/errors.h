// Copyright 2026 The docsimp Authors.
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

#ifndef DOCSIMP_ERRORS_H_
#define DOCSIMP_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace docsimp {

// Base of every error the library throws. Callers that only care about
// "something in the input was wrong" can catch this one.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad or missing input values (empty text for FKGL, absent timestamps, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

// A record refers to a different pair than the object it is checked against.
class IdentityError : public Error {
 public:
  using Error::Error;
};

// Structured file content does not match the expected schema.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Malformed markup; offset is the 0-based byte offset of the problem.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error("offset " + std::to_string(offset) + ": " + what), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// An annotation cannot be expressed in per-category B/I labels.
class RepresentabilityError : public Error {
 public:
  RepresentabilityError(const std::string& category, const std::string& why)
      : Error("category '" + category + "' is not representable: " + why),
        category_(category) {}
  const std::string& category() const { return category_; }

 private:
  std::string category_;
};

class CalibrationError : public Error {
 public:
  using Error::Error;
};

class LookupError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

class NetworkError : public Error {
 public:
  using Error::Error;
};

// Filesystem failures (cannot open, cannot write). Distinct from content
// errors so the command line can map it to its own exit code.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace docsimp

#endif  // DOCSIMP_ERRORS_H_
