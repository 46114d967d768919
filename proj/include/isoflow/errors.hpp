#pragma once

#include <stdexcept>
#include <string>

namespace isoflow {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid numeric parameters (j not half-integer, k <= 0, p outside (0,1), ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// A representation paired with an algebra it does not represent.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

// (r, s) outside the regime required by a diagonalization theorem.
class CaseMismatchError : public Error {
 public:
  using Error::Error;
};

// Argument outside the support of a weight or function.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A series failed to converge or left an imaginary residue above threshold.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

class PoleError : public Error {
 public:
  using Error::Error;
};

// An iterative eigensolver ran out of iterations.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// r or u vanished where the modification ratio u/r is required.
class DegenerateRatioError : public Error {
 public:
  using Error::Error;
};

// Coinciding eigenvalues where a simple spectrum is required.
class DegenerateSpectrumError : public Error {
 public:
  using Error::Error;
};

}  // namespace isoflow
