#pragma once

#include <gmpxx.h>

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pairdim/context.hpp"

namespace pairdim {

using Rational = mpq_class;

enum class Sort {
  Field,           // ranges over K
  Small,           // ranges over k, the U-predicate
  Transcendental,  // declared constant of K algebraically independent over k
};

struct Var {
  std::string name;
  Sort sort = Sort::Field;

  friend bool operator==(const Var&, const Var&) = default;
};

// A power product. Factors are kept sorted by variable name, largest first,
// and every exponent is positive.
class Monomial {
 public:
  using Factor = std::pair<std::string, unsigned>;

  Monomial() = default;
  explicit Monomial(std::vector<Factor> factors);

  static Monomial variable(const std::string& name, unsigned exponent = 1);

  const std::vector<Factor>& factors() const { return factors_; }
  bool is_one() const { return factors_.empty(); }
  unsigned total_degree() const;
  unsigned degree_in(std::string_view var) const;
  Monomial without(std::string_view var) const;
  bool divides(const Monomial& other) const;
  // Requires divides(other).
  Monomial quotient_of(const Monomial& other) const;

  friend Monomial operator*(const Monomial& a, const Monomial& b);
  friend bool operator==(const Monomial&, const Monomial&) = default;

 private:
  std::vector<Factor> factors_;
};

// Graded order; ties are broken lexicographically with larger variable names
// more significant (z > y > x > ... > a). Returns <0, 0, >0.
int compare_monomials(const Monomial& a, const Monomial& b);

struct MonomialGreater {
  bool operator()(const Monomial& a, const Monomial& b) const {
    return compare_monomials(a, b) > 0;
  }
};

// Sparse multivariate polynomial with exact rational coefficients. Terms are
// stored leading term first; zero coefficients are never stored, so two
// polynomials are equal iff their term maps are equal.
class Polynomial {
 public:
  using Terms = std::map<Monomial, Rational, MonomialGreater>;

  Polynomial() = default;
  Polynomial(long constant);  // NOLINT(google-explicit-constructor)
  explicit Polynomial(const Rational& constant);
  explicit Polynomial(Terms terms);

  static Polynomial variable(const std::string& name);
  static Polynomial monomial(const Monomial& m, const Rational& c);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  // Constant term (zero when absent).
  Rational constant_term() const;
  std::size_t size() const { return terms_.size(); }

  const Monomial& leading_monomial() const;
  const Rational& leading_rational() const;

  unsigned total_degree() const;
  // Degree in `var`; 0 for the zero polynomial.
  unsigned degree_in(std::string_view var) const;
  bool contains(std::string_view var) const;
  std::set<std::string> variables() const;

  // Coefficient of var^deg(var) and p - lc * var^deg.
  Polynomial leading_coefficient(const std::string& var) const;
  Polynomial reductum(const std::string& var) const;

  Polynomial pow(unsigned exponent) const;
  Polynomial scaled(const Rational& factor) const;

  // Substitutes rationals for the assigned variables; others stay symbolic.
  Polynomial evaluate(const std::map<std::string, Rational>& assignment) const;
  Polynomial substitute(const std::map<std::string, Polynomial>& sigma) const;

  // Image in F_p when the characteristic is a prime, coefficients in [0, p).
  Polynomial reduce(Characteristic characteristic) const;
  // Nonzero-scalar representative: primitive integer with positive leading
  // coefficient in characteristic 0, monic modulo p otherwise.
  Polynomial canonical(Characteristic characteristic) const;
  bool is_integral() const;

  std::string to_string() const;

  Polynomial operator-() const;
  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial& operator+=(const Polynomial& b) { return *this = *this + b; }
  Polynomial& operator-=(const Polynomial& b) { return *this = *this - b; }
  Polynomial& operator*=(const Polynomial& b) { return *this = *this * b; }

  friend bool operator==(const Polynomial& a, const Polynomial& b);
  // Total order used for canonical sorting: by terms, leading first.
  friend std::strong_ordering operator<=>(const Polynomial& a,
                                          const Polynomial& b);

 private:
  void add_term(const Monomial& m, const Rational& c);

  Terms terms_;
};

enum class ArithOp { Add, Sub, Mul };

Polynomial arith(const Polynomial& p, const Polynomial& q, ArithOp op);

// c_0..c_d with p = sum c_j var^j and d = deg_var p; empty for p = 0.
std::vector<Polynomial> coeffs_in(const Polynomial& p, const std::string& var);

// Sylvester resultant with respect to `var` (Bareiss elimination).
Polynomial resultant(const Polynomial& p, const Polynomial& q,
                     const std::string& var);

struct PseudoDivision {
  Polynomial quotient;
  Polynomial remainder;
  unsigned power = 0;
};

// lc(q)^power * p = quotient * q + remainder, deg_var remainder < deg_var q.
PseudoDivision pseudo_divide(const Polynomial& p, const Polynomial& q,
                             const std::string& var);

// Monic gcd over Q of two polynomials in `var` alone.
Polynomial gcd_univariate(const Polynomial& p, const Polynomial& q,
                          const std::string& var);

// p / q when q divides p exactly in Q[vars].
std::optional<Polynomial> exact_divide(const Polynomial& p,
                                       const Polynomial& q);

std::string rational_to_string(const Rational& r);

}  // namespace pairdim
