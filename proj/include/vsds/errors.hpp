#pragma once

#include <stdexcept>
#include <string>

namespace vsds {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class KappaOutOfRange : public Error {
 public:
  using Error::Error;
};

/// A demonstration sample whose velocity (or nominal flow) is too small to
/// define a rotation. Callers skip the sample.
class DegenerateSample : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

class SingularKernel : public Error {
 public:
  using Error::Error;
};

class PathTooShort : public Error {
 public:
  using Error::Error;
};

class DegenerateDirection : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace vsds
