#include "pairdim/error.hpp"

#include "pairdim/context.hpp"

#include <algorithm>

namespace pairdim {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Syntax: return "SyntaxError";
    case ErrorKind::Sort: return "SortError";
    case ErrorKind::ZeroDegree: return "ZeroDegree";
    case ErrorKind::NotUnivariate: return "NotUnivariate";
    case ErrorKind::SizeLimit: return "SizeLimit";
    case ErrorKind::UnsupportedAtom: return "UnsupportedAtom";
    case ErrorKind::FreeVariable: return "FreeVariable";
    case ErrorKind::BoundVarSubstitution: return "BoundVarSubstitution";
    case ErrorKind::UnsupportedFragment: return "UnsupportedFragment";
    case ErrorKind::InternalInconsistency: return "InternalInconsistency";
    case ErrorKind::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::NotPregeometry: return "NotPregeometry";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Error";
}

namespace {

bool is_prime(unsigned long n) {
  if (n < 2) return false;
  for (unsigned long d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

}  // namespace

Characteristic::Characteristic(unsigned long value) : value_(value) {
  if (value != 0 && !is_prime(value)) {
    throw Error(ErrorKind::InvalidArgument,
                "characteristic must be 0 or a prime, got " +
                    std::to_string(value));
  }
}

bool EngineContext::is_transcendental(const std::string& name) const {
  return std::find(transcendentals.begin(), transcendentals.end(), name) !=
         transcendentals.end();
}

}  // namespace pairdim
