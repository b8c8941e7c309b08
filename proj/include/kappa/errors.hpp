#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kappa {

/// Base class for every error raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// -- jet arithmetic --------------------------------------------------------

struct OrderMismatch : Error {
  using Error::Error;
};

struct BasePointMismatch : Error {
  using Error::Error;
};

struct OrderExceeded : Error {
  using Error::Error;
};

struct DivisionByZeroJet : Error {
  using Error::Error;
};

struct NonFiniteValue : Error {
  using Error::Error;
};

// -- expression parsing / evaluation ---------------------------------------

/// Syntax error; `offset` is the byte position in the input text.
struct ParseError : Error {
  ParseError(std::size_t offset_, const std::string& what_)
      : Error("parse error at offset " + std::to_string(offset_) + ": " + what_),
        offset(offset_) {}
  std::size_t offset;
};

struct EvaluationError : Error {
  using Error::Error;
};

// -- frame / curvature pipeline --------------------------------------------

/// f, f', ..., f^(n) linearly dependent at the point (Wronskian ~ 0).
struct DegenerateCurve : Error {
  using Error::Error;
};

/// Schwarzian derivative requested at a point where u' ~ 0.
struct CriticalPoint : Error {
  using Error::Error;
};

/// Affine image's first homogeneous component vanishes at the point.
struct ChartEscape : Error {
  using Error::Error;
};

/// Coordinate change with z'(w) ~ 0 at the base point.
struct CriticalReparameterization : Error {
  using Error::Error;
};

struct InvalidInput : Error {
  using Error::Error;
};

}  // namespace kappa
