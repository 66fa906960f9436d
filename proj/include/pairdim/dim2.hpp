#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pairdim/context.hpp"
#include "pairdim/formula.hpp"
#include "pairdim/pairnf.hpp"

namespace pairdim {

// Dimensions are -inf (empty set) or 0..n; -inf is encoded as kNegInf.
constexpr int kNegInf = -1;
int dim_max(int a, int b);
int dim_add(int a, int b);
std::string dim_to_string(int d);

// Truth of a closed very special formula / normal form. Transcendental
// constants are algebraically independent over k, so a small tuple satisfies
// a relation involving them iff it satisfies every coefficient relation.
bool very_special_holds(const VerySpecialFormula& v, const EngineContext& ctx);
bool normal_form_holds(const PairNormalForm& nf, const EngineContext& ctx);
bool decide_pair_sentence(const Formula& f, const EngineContext& ctx);

// "p is the zero polynomial in z" and its negation, over the coefficients.
Formula zero_in(const Polynomial& p, const std::string& z);
Formula nonzero_in(const Polynomial& p, const std::string& z);

// forall u in U. (some P_i nonzero in Z) | (all P_i and Q zero in Z):
// the parameters whose fiber psi(a, K) is small.
Formula fiber_dim0_formula(const VerySpecialFormula& psi, const std::string& z,
                           Characteristic ch = Characteristic(0));
// exists u in U. (all P_i zero in Z) & (Q nonzero in Z): the parameters
// whose fiber is cofinite, missing at most deg_Z Q points.
Formula fiber_cofinite_formula(const VerySpecialFormula& psi,
                               const std::string& z,
                               Characteristic ch = Characteristic(0));
// A special formula equivalent to exists z. psi.
Formula fiber_nonempty_formula(const VerySpecialFormula& psi,
                               const std::string& z, const EngineContext& ctx);
// Conjunction over disjuncts of (psi_0* | cofinite(psi_1) | ...).
Formula set_small_formula(const PairNormalForm& nf, const std::string& z,
                          const EngineContext& ctx);

enum class Label { Small, CoSmall };
const char* to_string(Label label);

struct DichotomyResult {
  Label label = Label::Small;
  Formula small_formula;
  Formula complement_small_formula;
  PairNormalForm complement;
  bool small = false;
  bool complement_small = false;
};

// Exactly one of S and K \ S is small. Throws InternalInconsistency if the
// decisions disagree with that.
DichotomyResult dichotomy(const PairNormalForm& nf, const std::string& z,
                          const EngineContext& ctx);

// One level of the dimension recursion. The fiber over a parameter point is
// empty, small and nonempty, or co-small (dimension -inf, 0, 1).
struct DimCertificate {
  int dimension = kNegInf;
  std::vector<std::string> vars;
  std::string set_formula;
  // closed | empty | full | absent | fiber
  std::string method;
  std::string variable;
  std::vector<std::string> rejected_variables;
  std::optional<Formula> empty_formula;
  std::optional<Formula> small_nonempty_formula;
  std::optional<Formula> small_nonempty_upper_formula;
  std::optional<Formula> co_small_formula;
  bool exact_partition = true;
  // role -> sub-certificate: smallNonempty, smallNonemptyUpper, coSmall
  std::map<std::string, DimCertificate> parts;
};

// dim_2 of the set defined by nf in K^vars. `vars` must contain every free
// field variable of nf. Throws UnsupportedFragment when no coordinate order
// yields an exact answer.
DimCertificate dim(const PairNormalForm& nf, const std::vector<std::string>& vars,
                   const EngineContext& ctx);

struct InternalityWitness {
  Formula relation;
  unsigned bound = 0;
  std::vector<std::string> small_vars;
  std::string fiber_var;
  Polynomial polynomial;
  Formula image;
};

// R(u, b) :<=> P(u, a, b) = 0 & P(u, a, Z) != 0, with |R(u)| <= deg_Z P.
InternalityWitness almost_internal_witness(
    const Polynomial& p, const std::vector<std::string>& small_vars,
    const std::string& z, const std::map<std::string, Polynomial>& assignment,
    const EngineContext& ctx);

}  // namespace pairdim
