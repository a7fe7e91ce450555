// Copyright 2026 The Flaky Lens Authors
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

#ifndef FLAKYLENS_ERRORS_HPP_
#define FLAKYLENS_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace flakylens {

// Base of every error the library throws. Callers that only need to
// distinguish "our" failures from std failures can catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised by the lexer when the input is not text (NUL bytes, invalid UTF-8).
class LexError : public Error {
 public:
  LexError(const std::string& what, std::size_t offset)
      : Error(what), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class MissingSpecialError : public Error {
 public:
  explicit MissingSpecialError(const std::string& token)
      : Error("vocabulary is missing special token " + token), token_(token) {}
  const std::string& token() const { return token_; }

 private:
  std::string token_;
};

class DuplicateTokenError : public Error {
 public:
  DuplicateTokenError(const std::string& token, std::size_t line)
      : Error("duplicate vocabulary token '" + token + "' on line " +
              std::to_string(line)),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ZeroLengthError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatchError : public Error {
 public:
  DimensionMismatchError(std::size_t expected, std::size_t actual)
      : Error("dimension mismatch: expected " + std::to_string(expected) +
              ", got " + std::to_string(actual)) {}
};

class EmptyDatasetError : public Error {
 public:
  using Error::Error;
};

class NonFiniteLossError : public Error {
 public:
  using Error::Error;
};

class SingleClassError : public Error {
 public:
  using Error::Error;
};

class KTooLargeError : public Error {
 public:
  using Error::Error;
};

class LengthMismatchError : public Error {
 public:
  using Error::Error;
};

class BaselineZeroCostError : public Error {
 public:
  using Error::Error;
};

class EmptyInputError : public Error {
 public:
  using Error::Error;
};

class MalformedCsvError : public Error {
 public:
  MalformedCsvError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class InvalidLabelError : public MalformedCsvError {
 public:
  InvalidLabelError(const std::string& value, std::size_t line)
      : MalformedCsvError("invalid label '" + value + "'", line) {}
};

class SourcesRootMissingError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

// A caller-supplied parameter is out of range.
class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

}  // namespace flakylens

#endif  // FLAKYLENS_ERRORS_HPP_
