#pragma once

#include <stdexcept>
#include <string>

namespace lsm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A model parameter or constant is outside its valid domain.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// A kernel evaluation fell outside [0, 1].
class KernelRangeError : public Error {
 public:
  using Error::Error;
};

/// Input data (adjacency, labels) violates a structural contract.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// An eigensolver or other numerical primitive failed.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The request exceeds a hard resource cap (e.g. brute-force size).
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

/// A file could not be read or parsed. The message carries the line number.
class IngestError : public Error {
 public:
  using Error::Error;
};

}  // namespace lsm
