#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace liesym {

/// Base class of all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad input: undeclared names, malformed values, violated preconditions.
struct ValidationError : Error {
  using Error::Error;
};

/// A configured resource bound (exponent, degree, iteration cap) was exceeded.
struct CapacityError : Error {
  using Error::Error;
};

/// The input falls outside the class of problems handled exactly.
struct NotSupportedError : Error {
  using Error::Error;
};

/// A candidate basis does not close under the Lie bracket.
struct ClosureError : Error {
  using Error::Error;
};

/// Internal invariant violation; indicates a bug (CLI exit code 4).
struct InternalError : Error {
  using Error::Error;
};

/// Syntax or semantic error in DSL text, with a source location and hint.
struct ParseError : Error {
  int line = 0;
  int column = 0;
  std::string hint;
  ParseError(const std::string& msg, int line_, int column_, std::string hint_ = "")
      : Error(msg), line(line_), column(column_), hint(std::move(hint_)) {}
};

}  // namespace liesym
