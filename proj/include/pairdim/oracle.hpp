#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "pairdim/context.hpp"
#include "pairdim/formula.hpp"
#include "pairdim/poly.hpp"

// Brute-force checks that do not reuse the elimination or normalization
// code they are meant to test.
namespace pairdim::oracle {

// Dense univariate polynomial over Q, lowest coefficient first, no trailing
// zeros.
class UPoly {
 public:
  UPoly() = default;
  explicit UPoly(std::vector<Rational> coeffs);

  // Throws NotUnivariate unless p mentions at most `var`.
  static UPoly from(const Polynomial& p, const std::string& var);

  const std::vector<Rational>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  // -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  Rational eval(const Rational& x) const;
  UPoly derivative() const;
  UPoly monic() const;

  friend UPoly operator*(const UPoly& a, const UPoly& b);
  friend bool operator==(const UPoly&, const UPoly&) = default;

 private:
  void trim();
  std::vector<Rational> c_;
};

// Remainder and quotient of Euclidean division; b must be nonzero.
UPoly upoly_rem(const UPoly& a, const UPoly& b);
UPoly upoly_quo(const UPoly& a, const UPoly& b);
UPoly upoly_gcd(UPoly a, UPoly b);

// exists y (p_1 = ... = p_k = 0 & q != 0) over an algebraically closed field
// of characteristic 0, decided by gcd stripping.
bool exists_root_not_root(const std::vector<Polynomial>& ps,
                          const Polynomial& q);

// Number of distinct roots in K of a nonzero polynomial in z whose
// coefficients are polynomials in the given transcendental constants.
unsigned distinct_root_count(const Polynomial& f, const std::string& z);

// Values of free variables: rationals or polynomials in transcendentals.
using Assignment = std::map<std::string, Polynomial>;

std::vector<Assignment> generate_assignments(
    const std::vector<std::string>& vars, std::size_t count,
    const EngineContext& ctx, std::uint32_t seed);

// Replaces free variables by their values. U(x) with x assigned becomes
// true iff the value is a rational (every nonconstant polynomial in the
// transcendentals lies outside k).
Formula instantiate(const Formula& f, const Assignment& a);

enum class Tri { False, True, Unknown };
const char* to_string(Tri t);

// Three-valued evaluation of a sentence by sampling quantifiers: small ones
// over a few rationals, field ones over rationals and expressions in the
// transcendentals. A found witness settles an existential, a found
// counterexample settles a universal; otherwise the answer is Unknown.
Tri sample_eval(const Formula& sentence, const EngineContext& ctx);

struct Disagreement {
  Assignment assignment;
  bool engine_verdict = false;
  bool oracle_verdict = false;
};

struct SampleReport {
  std::size_t total = 0;
  std::size_t agreements = 0;
  std::vector<Disagreement> disagreements;
};

// Pointwise comparison of two formulas with the same free variables. The
// engine side is decided symbolically per instance; the reference side uses
// the sampling evaluator when that is conclusive, else the symbolic decision.
// A conclusive sample that contradicts the engine side is also recorded.
SampleReport sample_check(const Formula& engine, const Formula& reference,
                          const std::vector<Assignment>& assignments,
                          const EngineContext& ctx);

struct DimEstimate {
  double estimate = 0;
  // (p, number of F_p-points)
  std::vector<std::pair<unsigned long, unsigned long>> counts;
  std::string label = "HEURISTIC";
};

// Least-squares slope of log(count) against log(p) over the given primes for
// the zero set of `eqs` in F_p^vars. Primes with zero points are skipped.
DimEstimate ffield_dim_estimate(const std::vector<Polynomial>& eqs,
                                const std::vector<std::string>& vars,
                                const std::vector<unsigned long>& primes);

}  // namespace pairdim::oracle
