#pragma once

#include <stdexcept>
#include <string>

namespace sparsene {

// Base class for all errors raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid algorithm parameters (bad window, sample count, dimension, ...).
struct ParamError : Error {
  using Error::Error;
};

// Malformed input data (edge lists, label files, dumps); message carries the
// offending line number where applicable.
struct ParseError : Error {
  using Error::Error;
};

// Input exceeds a size limit (e.g. dense reference routines capped by n).
struct SizeError : Error {
  using Error::Error;
};

// Numerical failure: rank collapse during orthonormalization, factorization
// that cannot reproduce its input, non-convergence where convergence is
// required for correctness.
struct NumericalError : Error {
  using Error::Error;
};

// Request would exceed a resource budget (memory / sample capacity).
struct ResourceError : Error {
  using Error::Error;
};

// The two matrices handed to a spectral comparison do not share a null
// space (e.g. the sampled graph is disconnected), so no finite
// approximation factor exists.
struct IncomparableError : Error {
  using Error::Error;
};

// A requested guarantee only holds in a bounded parameter regime and the
// arguments fall outside it (e.g. spectral error >= 1/2).
struct RegimeError : Error {
  using Error::Error;
};

}  // namespace sparsene
