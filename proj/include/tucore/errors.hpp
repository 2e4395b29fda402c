#pragma once

#include <stdexcept>
#include <string>

namespace tucore {

// All library errors derive from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the operation's domain (bad coalition mask, bad length).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Requested size exceeds what an exact routine can handle.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Malformed input file; the message names the offending key.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed input that violates a structural invariant (length, v(empty)).
class SchemaError : public Error {
 public:
  using Error::Error;
};

// The simplex engine could not reach a certified optimum.
class SolverFailure : public Error {
 public:
  using Error::Error;
};

// An upstream guarantee was broken (e.g. an approximate vertex outside the core).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace tucore
