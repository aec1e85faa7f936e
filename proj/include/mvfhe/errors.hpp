/*
 * Copyright 2026 The mvfhe Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef MVFHE_ERRORS_HPP_
#define MVFHE_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mvfhe {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid or mutually inconsistent scheme parameters, moduli or operands
// living in different rings.
class ParameterError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Raised by inversion when no pivot exists in `column`.
class SingularMatrixError : public Error {
 public:
  SingularMatrixError(const std::string& what, std::size_t column)
      : Error(what), column_(column) {}
  std::size_t column() const { return column_; }

 private:
  std::size_t column_;
};

class InconsistentSystemError : public Error {
 public:
  using Error::Error;
};

// Key or evaluation-key construction failed (degenerate points, stalled
// reduction, failed post-verification, exhausted retries).
class ConstructionError : public Error {
 public:
  using Error::Error;
};

// Multiplicative level budget exceeded.
class DepthError : public Error {
 public:
  using Error::Error;
};

// Malformed, corrupted or mismatched serialized data.
class FormatError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace mvfhe

#endif  // MVFHE_ERRORS_HPP_
