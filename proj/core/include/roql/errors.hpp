#pragma once

#include <stdexcept>
#include <string>

namespace roql {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands disagree on arity, or an arity exceeds the configured cap.
class ArityError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input (formula grammar, table format, assignment literal).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A read-once formula mentions the same variable twice.
class RepeatedVariableError : public ParseError {
 public:
  using ParseError::ParseError;
};

/// An oracle refused a query (kind not allowed, improper hypothesis).
class QueryRejected : public Error {
 public:
  using Error::Error;
};

/// The hidden target does not satisfy the promise an algorithm relies on.
class PromiseViolation : public Error {
 public:
  using Error::Error;
};

/// A graph handed to cotree construction contains an induced P4.
class NotACograph : public Error {
 public:
  using Error::Error;
};

}  // namespace roql
