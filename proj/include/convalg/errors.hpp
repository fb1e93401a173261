#pragma once

#include <stdexcept>
#include <string>

namespace convalg {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for malformed or inconsistent user input (channel files, CLI).
class InputError : public Error {
 public:
  using Error::Error;
};

#define CONVALG_DEFINE_ERROR(Name, Base)                  \
  class Name : public Base {                              \
   public:                                                \
    explicit Name(const std::string& what) : Base(what) {} \
  };

CONVALG_DEFINE_ERROR(ShapeMismatch, Error)
CONVALG_DEFINE_ERROR(NotSquare, Error)
CONVALG_DEFINE_ERROR(NotHermitian, Error)
CONVALG_DEFINE_ERROR(NoConvergence, Error)
CONVALG_DEFINE_ERROR(UnsupportedP, Error)
CONVALG_DEFINE_ERROR(DimMismatch, Error)
CONVALG_DEFINE_ERROR(DegenerateDenominator, Error)
CONVALG_DEFINE_ERROR(NotDiagonalizable, Error)
CONVALG_DEFINE_ERROR(NotCP, Error)
CONVALG_DEFINE_ERROR(NotUnitary, Error)
CONVALG_DEFINE_ERROR(NonHermitianChoi, Error)
CONVALG_DEFINE_ERROR(NoRealEigenvalue, Error)

CONVALG_DEFINE_ERROR(ParseError, InputError)
CONVALG_DEFINE_ERROR(SchemaError, InputError)

#undef CONVALG_DEFINE_ERROR

}  // namespace convalg
