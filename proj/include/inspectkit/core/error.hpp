#pragma once

#include <stdexcept>
#include <string>

namespace inspectkit {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A referenced entity (comment, PR, project, object, ref) does not exist.
class NotFound : public Error {
 public:
  using Error::Error;
};

/// Caller supplied data that violates a precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Input file or payload could not be parsed.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Another writer holds the resource (corpus lock, ref CAS exhausted).
class Conflict : public Error {
 public:
  using Error::Error;
};

/// Network or filesystem transport failed; callers may retry.
class TransportError : public Error {
 public:
  using Error::Error;
};

}  // namespace inspectkit
