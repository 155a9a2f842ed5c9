#pragma once

#include <stdexcept>
#include <string>

namespace asdescent {

// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& m) : std::runtime_error(m) {}
};

struct DivisionByZero : Error {
  DivisionByZero() : Error("division by zero") {}
};

struct FieldMismatch : Error {
  FieldMismatch() : Error("operands belong to different fields") {}
};

struct ZeroInput : Error {
  explicit ZeroInput(const std::string& m = "zero input") : Error(m) {}
};

struct IrreduciblePolynomialNotFound : Error {
  IrreduciblePolynomialNotFound() : Error("no irreducible polynomial found") {}
};

struct UnsupportedFieldSize : Error {
  explicit UnsupportedFieldSize(const std::string& m) : Error(m) {}
};

struct PrecisionNotPositiveOverValuation : Error {
  PrecisionNotPositiveOverValuation()
      : Error("requested precision does not exceed the valuation") {}
};

struct UnsupportedPlaceDegree : Error {
  UnsupportedPlaceDegree()
      : Error("operation requires a place of degree 1") {}
};

struct NotAUnit : Error {
  NotAUnit() : Error("local expansion is not a unit") {}
};

struct PNotCoprime : Error {
  PNotCoprime() : Error("exponent must be prime to the characteristic") {}
};

struct NoResidueRoot : Error {
  explicit NoResidueRoot(const std::string& m =
                             "required root is missing in the residue field "
                             "(constants extension needed)")
      : Error(m) {}
};

struct NotNegativePrimeToP : Error {
  explicit NotNegativePrimeToP(const std::string& m =
                                   "defining element must have negative "
                                   "valuation prime to p at every tracked "
                                   "place")
      : Error(m) {}
};

struct UnreducedInput : Error {
  UnreducedInput()
      : Error("valuation is negative and divisible by p; reduce first") {}
};

struct SearchSpaceTooLarge : Error {
  SearchSpaceTooLarge() : Error("brute-force search space exceeds the cap") {}
};

struct ParseError : Error {
  ParseError(const std::string& what, size_t pos)
      : Error(what + " (at position " + std::to_string(pos) + ")"),
        position(pos) {}
  size_t position;
};

}  // namespace asdescent
