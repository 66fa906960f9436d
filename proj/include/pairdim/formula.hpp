#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pairdim/context.hpp"
#include "pairdim/poly.hpp"

namespace pairdim {

enum class AtomKind { Eq, Neq, InU };

// p = 0, p != 0, or U(var). Right-hand sides are folded into `poly`.
struct Atom {
  AtomKind kind = AtomKind::Eq;
  Polynomial poly;
  std::string var;

  friend bool operator==(const Atom&, const Atom&) = default;
};

enum class Connective { Atom, Not, And, Or, Exists, Forall };

// Immutable first-order formula over the ring language plus U. The bound
// variable of a quantifier carries its sort: Field quantifiers range over K,
// Small ones over k (exists x in U. phi  ==  exists x (U(x) & phi)).
class Formula {
 public:
  Formula();  // 0 = 0

  static Formula atom(Atom a);
  static Formula eq(Polynomial p);
  static Formula neq(Polynomial p);
  static Formula in_u(std::string var);
  static Formula truth();    // 0 = 0
  static Formula falsity();  // 1 = 0
  static Formula negation(Formula f);
  // Nested conjunctions are flattened; an empty list is `truth()` and a
  // singleton is its element. Same for disjunctions with `falsity()`.
  static Formula conjunction(std::vector<Formula> parts);
  static Formula disjunction(std::vector<Formula> parts);
  static Formula exists(Var bound, Formula body);
  static Formula forall(Var bound, Formula body);

  Connective kind() const;
  const Atom& atom() const;
  const std::vector<Formula>& children() const;
  const Formula& body() const;
  const Var& bound() const;

  bool is_atom() const { return kind() == Connective::Atom; }
  bool is_quantifier() const {
    return kind() == Connective::Exists || kind() == Connective::Forall;
  }
  // Atom or negated U-atom.
  bool is_literal() const;

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node);

  std::shared_ptr<const Node> node_;
};

using Clause = std::vector<Formula>;

struct ParsedFormula {
  Formula formula;
  std::vector<std::string> transcendentals;
};

// Grammar: see README. Bound variables are renamed apart; free variables keep
// the user's names. A leading `#trans t1, t2.` declares constants.
ParsedFormula parse(const std::string& text);
Polynomial parse_polynomial(const std::string& text);

std::string print(const Formula& f);
// Prefixes the `#trans` header when constants are given.
std::string print_with_header(const Formula& f,
                              const std::vector<std::string>& transcendentals);

std::set<std::string> free_vars(const Formula& f);
std::set<std::string> all_names(const Formula& f);
bool is_quantifier_free(const Formula& f);
bool mentions_u(const Formula& f);

Formula nnf(const Formula& f);
// Clauses of an equivalent disjunctive normal form of a quantifier-free
// formula. Throws SizeLimit past `max_clauses`.
std::vector<Clause> dnf_clauses(const Formula& f, std::size_t max_clauses);
Formula dnf(const Formula& f, std::size_t max_clauses);
Formula from_clauses(const std::vector<Clause>& clauses);

Formula substitute(const Formula& f,
                   const std::map<std::string, Polynomial>& sigma);
Formula rename_bound(const Formula& f, const std::string& from,
                     const std::string& to);
// Makes every binder distinct from each other, from free names and from
// `reserved`. Binders that already satisfy this keep their names.
Formula rename_apart(const Formula& f,
                     const std::set<std::string>& reserved = {});
bool alpha_equivalent(const Formula& a, const Formula& b);

// Truth value of an atom whose polynomial is constant in the characteristic.
std::optional<bool> constant_truth(const Atom& a, Characteristic ch);
bool is_truth(const Formula& f);
bool is_falsity(const Formula& f);
// Folds constant atoms and propagates truth values through connectives.
Formula simplify(const Formula& f, Characteristic ch);

// Deterministic fresh names that avoid a given set.
class NameSupply {
 public:
  explicit NameSupply(std::set<std::string> used);
  std::string fresh(const std::string& base);
  void reserve(const std::string& name) { used_.insert(name); }

 private:
  std::set<std::string> used_;
};

}  // namespace pairdim
