// SPDX-FileCopyrightText: 2026 The gspdrop Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef GSPDROP_ERROR_HPP
#define GSPDROP_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gspdrop {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input. `line()` is 1-based, 0 when the error is not tied
/// to a single line (e.g. a count mismatch).
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line)
      : Error(line == 0 ? message : "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace gspdrop

#endif  // GSPDROP_ERROR_HPP
