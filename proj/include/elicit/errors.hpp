#pragma once

#include <stdexcept>
#include <string>

namespace elicit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range input (bad index, dimension mismatch, schema).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Structurally valid input that does not describe a usable instance,
/// e.g. a disconnected graph or overlapping partition blocks.
class InconsistentInstance : public InputError {
 public:
  using InputError::InputError;
};

/// A point lies outside the set an operation is defined on.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Caller violated an operation's precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A combinatorial enumeration would exceed its configured cap.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// A preference cut removed every vertex: the answers are inconsistent.
class ContradictionError : public Error {
 public:
  using Error::Error;
};

}  // namespace elicit
