#pragma once

#include <stdexcept>
#include <string>

namespace sqf {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed user input: bad letters, unparsable files, out-of-range parameters.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A computed or loaded artifact is inconsistent (failed certificate, digest mismatch).
class VerificationError : public Error {
 public:
  using Error::Error;
};

/// A size or memory guard refused the request, or allocation failed.
class ResourceError : public Error {
 public:
  using Error::Error;
};

}  // namespace sqf
