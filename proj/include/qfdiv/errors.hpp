#pragma once

#include <stdexcept>
#include <string>

namespace qfdiv {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Element/block shapes do not match the algebra description.
struct ShapeError : Error {
  using Error::Error;
};

struct NotHermitianError : Error {
  using Error::Error;
};

struct NotPositiveError : Error {
  using Error::Error;
};

struct NotNormalizedError : Error {
  using Error::Error;
};

struct ZeroTraceError : Error {
  using Error::Error;
};

struct NotUnitaryError : Error {
  using Error::Error;
};

// Problem file is syntactically or structurally invalid; message names the
// offending path, e.g. "phi[0][1][2]".
struct ParseError : Error {
  using Error::Error;
};

// Bad numeric arguments: NaN payloads, negative masses, a function that
// evaluates to a non-finite value on the spectrum, out-of-range parameters.
struct DomainError : Error {
  using Error::Error;
};

}  // namespace qfdiv
