#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pairdim {

enum class ErrorKind {
  Syntax,
  Sort,
  ZeroDegree,
  NotUnivariate,
  SizeLimit,
  UnsupportedAtom,
  FreeVariable,
  BoundVarSubstitution,
  UnsupportedFragment,
  InternalInconsistency,
  ZeroPolynomial,
  TooLarge,
  NotPregeometry,
  DimensionMismatch,
  InvalidArgument,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& message)
      : Error(ErrorKind::Syntax,
              "syntax error at offset " + std::to_string(position) + ": " +
                  message),
        position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Raised whenever an input leaves the fragment the normalizer can handle.
// `subformula` is the printed offending piece.
class UnsupportedFragment : public Error {
 public:
  UnsupportedFragment(const std::string& reason, const std::string& subformula)
      : Error(ErrorKind::UnsupportedFragment,
              "unsupported fragment: " + reason + ": " + subformula),
        reason_(reason),
        subformula_(subformula) {}

  const std::string& reason() const { return reason_; }
  const std::string& subformula() const { return subformula_; }

 private:
  std::string reason_;
  std::string subformula_;
};

}  // namespace pairdim
