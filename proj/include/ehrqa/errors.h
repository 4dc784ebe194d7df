/* Copyright 2026 The ehrqa Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef EHRQA_ERRORS_H_
#define EHRQA_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ehrqa {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidSpanError : public Error {
 public:
  using Error::Error;
};

// An annotation or span crosses a sentence boundary.
class BoundaryViolationError : public Error {
 public:
  using Error::Error;
};

class DanglingReferenceError : public Error {
 public:
  using Error::Error;
};

class TemplateMisuseError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

class OracleMisuseError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

class InternalError : public Error {
 public:
  using Error::Error;
};

// Reader backend returned something that violates the output contract.
// field() names the offending field, e.g. "outputs[2].start_probs".
class ProtocolError : public Error {
 public:
  ProtocolError(std::string field, const std::string& what)
      : Error("protocol error in " + field + ": " + what),
        field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Transport failed after `attempts` tries; callers may retry later.
class TransportError : public Error {
 public:
  TransportError(int attempts, const std::string& what)
      : Error(what + " (after " + std::to_string(attempts) + " attempts)"),
        attempts_(attempts) {}
  int attempts() const { return attempts_; }

 private:
  int attempts_;
};

// Input file line failed to parse. line() is 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::string field, const std::string& what)
      : Error("line " + std::to_string(line) + ", field '" + field +
              "': " + what),
        line_(line),
        field_(std::move(field)) {}
  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

// Non-fatal condition worth reporting (skipped class, kept-first span, ...).
struct Diagnostic {
  std::string code;
  std::string message;
};

using Diagnostics = std::vector<Diagnostic>;

inline void report(Diagnostics* diags, std::string code, std::string message) {
  if (diags != nullptr) diags->push_back({std::move(code), std::move(message)});
}

}  // namespace ehrqa

#endif  // EHRQA_ERRORS_H_
