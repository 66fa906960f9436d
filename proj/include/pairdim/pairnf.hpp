#pragma once

#include <set>
#include <string>
#include <vector>

#include "pairdim/context.hpp"
#include "pairdim/formula.hpp"

namespace pairdim {

// exists u_1..u_m in U. matrix, with a U-free matrix.
struct SpecialFormula {
  std::vector<std::string> u_vars;
  Formula matrix;
};

// exists u in U. P_1 = ... = P_r = 0 & Q != 0. `eqs` is never empty; [0]
// stands for "no equation" and Q = 1 for "no inequation".
struct VerySpecialFormula {
  std::vector<std::string> u_vars;
  std::vector<Polynomial> eqs;
  Polynomial ineq{1};

  friend bool operator==(const VerySpecialFormula&,
                         const VerySpecialFormula&) = default;
};

// positive & ~negatives[0] & ... & ~negatives[r-1]
struct NormalDisjunct {
  VerySpecialFormula positive;
  std::vector<VerySpecialFormula> negatives;

  friend bool operator==(const NormalDisjunct&, const NormalDisjunct&) = default;
};

// Disjunction of NormalDisjuncts; no disjuncts means the empty set.
struct PairNormalForm {
  std::vector<NormalDisjunct> disjuncts;

  friend bool operator==(const PairNormalForm&, const PairNormalForm&) = default;
};

SpecialFormula special_true();
SpecialFormula special_and(const SpecialFormula& a, const SpecialFormula& b);
SpecialFormula special_or(const SpecialFormula& a, const SpecialFormula& b);

VerySpecialFormula very_special_true();
bool is_true(const VerySpecialFormula& v);
bool is_true(const PairNormalForm& nf);

// The disjunction of very specials equivalent to `s` in every pair of the
// context's characteristic. Bound small variables get positional names.
std::vector<VerySpecialFormula> to_very_special(const SpecialFormula& s,
                                                const EngineContext& ctx);

// Normal form of a formula in the supported fragment. Throws
// UnsupportedFragment naming the offending subformula otherwise.
PairNormalForm normalize(const Formula& f, const EngineContext& ctx);
PairNormalForm complement(const PairNormalForm& nf, const EngineContext& ctx);

Formula to_formula(const SpecialFormula& s);
Formula to_formula(const VerySpecialFormula& v);
Formula to_formula(const NormalDisjunct& d);
Formula to_formula(const PairNormalForm& nf);

// Free field variables (not small-bound, not transcendental).
std::set<std::string> field_vars(const VerySpecialFormula& v,
                                 const EngineContext& ctx);
std::set<std::string> field_vars(const PairNormalForm& nf,
                                 const EngineContext& ctx);

// Coefficients of p viewed as a polynomial in `vars`, keyed by the monomial
// in those variables.
std::vector<std::pair<Monomial, Polynomial>> coefficients_wrt(
    const Polynomial& p, const std::set<std::string>& vars);

}  // namespace pairdim
