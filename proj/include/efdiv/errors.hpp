#pragma once

#include <stdexcept>
#include <string>

namespace efdiv {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A request is malformed: bad dimension, unknown generator, k above the guard.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// A parameter (or an affine combination of parameters) left the natural
/// parameter space, or a generator derivative was requested outside its domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure could not produce a finite or converged value.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace efdiv
