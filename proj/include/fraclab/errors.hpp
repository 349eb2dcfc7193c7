#pragma once

#include <stdexcept>
#include <string>

namespace fraclab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// (n_dim, s) or another numeric parameter outside its admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Set geometry incompatible with the domain (interval touching the boundary, ...).
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// The grid is too coarse to carry a requested set.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A factorization or eigensolve failed or did not meet its tolerance.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Invalid experiment configuration (bad key, failed simplicity gate, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace fraclab
