#include "pairdim/formula.hpp"

#include <algorithm>
#include <functional>

#include "pairdim/error.hpp"

namespace pairdim {

struct Formula::Node {
  Connective kind = Connective::Atom;
  Atom atom;
  std::vector<Formula> children;
  Var bound;
};

Formula::Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Formula::Formula() : Formula(truth()) {}

Formula Formula::atom(Atom a) {
  if (a.kind == AtomKind::InU) a.poly = Polynomial();
  auto node = std::make_shared<Node>();
  node->kind = Connective::Atom;
  node->atom = std::move(a);
  return Formula(std::move(node));
}

Formula Formula::eq(Polynomial p) {
  return atom(Atom{AtomKind::Eq, std::move(p), {}});
}

Formula Formula::neq(Polynomial p) {
  return atom(Atom{AtomKind::Neq, std::move(p), {}});
}

Formula Formula::in_u(std::string var) {
  return atom(Atom{AtomKind::InU, Polynomial(), std::move(var)});
}

Formula Formula::truth() {
  static const Formula t = [] {
    auto node = std::make_shared<Node>();
    node->atom = Atom{AtomKind::Eq, Polynomial(), {}};
    return Formula(std::move(node));
  }();
  return t;
}

Formula Formula::falsity() { return eq(Polynomial(1)); }

Formula Formula::negation(Formula f) {
  auto node = std::make_shared<Node>();
  node->kind = Connective::Not;
  node->children.push_back(std::move(f));
  return Formula(std::move(node));
}

namespace {

Formula make_nary(Connective kind, std::vector<Formula> parts,
                  const std::function<Formula(Connective, std::vector<Formula>)>&
                      build) {
  std::vector<Formula> flat;
  for (auto& p : parts) {
    if (p.kind() == kind) {
      for (const auto& c : p.children()) flat.push_back(c);
    } else {
      flat.push_back(std::move(p));
    }
  }
  return build(kind, std::move(flat));
}

}  // namespace

Formula Formula::conjunction(std::vector<Formula> parts) {
  return make_nary(Connective::And, std::move(parts),
                   [](Connective k, std::vector<Formula> flat) {
                     if (flat.empty()) return truth();
                     if (flat.size() == 1) return flat.front();
                     auto node = std::make_shared<Node>();
                     node->kind = k;
                     node->children = std::move(flat);
                     return Formula(std::move(node));
                   });
}

Formula Formula::disjunction(std::vector<Formula> parts) {
  return make_nary(Connective::Or, std::move(parts),
                   [](Connective k, std::vector<Formula> flat) {
                     if (flat.empty()) return falsity();
                     if (flat.size() == 1) return flat.front();
                     auto node = std::make_shared<Node>();
                     node->kind = k;
                     node->children = std::move(flat);
                     return Formula(std::move(node));
                   });
}

Formula Formula::exists(Var bound, Formula body) {
  auto node = std::make_shared<Node>();
  node->kind = Connective::Exists;
  node->bound = std::move(bound);
  node->children.push_back(std::move(body));
  return Formula(std::move(node));
}

Formula Formula::forall(Var bound, Formula body) {
  auto node = std::make_shared<Node>();
  node->kind = Connective::Forall;
  node->bound = std::move(bound);
  node->children.push_back(std::move(body));
  return Formula(std::move(node));
}

Connective Formula::kind() const { return node_->kind; }
const Atom& Formula::atom() const { return node_->atom; }
const std::vector<Formula>& Formula::children() const {
  return node_->children;
}
const Formula& Formula::body() const { return node_->children.front(); }
const Var& Formula::bound() const { return node_->bound; }

bool Formula::is_literal() const {
  if (kind() == Connective::Atom) return true;
  return kind() == Connective::Not && body().is_atom() &&
         body().atom().kind == AtomKind::InU;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Connective::Atom:
      return a.atom() == b.atom();
    case Connective::Exists:
    case Connective::Forall:
      if (!(a.bound() == b.bound())) return false;
      break;
    default:
      break;
  }
  return a.children() == b.children();
}

// ---------------------------------------------------------------------------
// Variables

namespace {

void collect_free(const Formula& f, std::set<std::string>& bound,
                  std::set<std::string>& out) {
  switch (f.kind()) {
    case Connective::Atom: {
      const Atom& a = f.atom();
      if (a.kind == AtomKind::InU) {
        if (!bound.count(a.var)) out.insert(a.var);
      } else {
        for (const auto& v : a.poly.variables()) {
          if (!bound.count(v)) out.insert(v);
        }
      }
      return;
    }
    case Connective::Exists:
    case Connective::Forall: {
      bool fresh = bound.insert(f.bound().name).second;
      collect_free(f.body(), bound, out);
      if (fresh) bound.erase(f.bound().name);
      return;
    }
    default:
      for (const auto& c : f.children()) collect_free(c, bound, out);
  }
}

void collect_all(const Formula& f, std::set<std::string>& out) {
  switch (f.kind()) {
    case Connective::Atom:
      if (f.atom().kind == AtomKind::InU) {
        out.insert(f.atom().var);
      } else {
        auto vs = f.atom().poly.variables();
        out.insert(vs.begin(), vs.end());
      }
      return;
    case Connective::Exists:
    case Connective::Forall:
      out.insert(f.bound().name);
      break;
    default:
      break;
  }
  for (const auto& c : f.children()) collect_all(c, out);
}

}  // namespace

std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> bound;
  std::set<std::string> out;
  collect_free(f, bound, out);
  return out;
}

std::set<std::string> all_names(const Formula& f) {
  std::set<std::string> out;
  collect_all(f, out);
  return out;
}

bool is_quantifier_free(const Formula& f) {
  if (f.is_quantifier()) return false;
  return std::all_of(f.children().begin(), f.children().end(),
                     [](const Formula& c) { return is_quantifier_free(c); });
}

bool mentions_u(const Formula& f) {
  if (f.is_atom()) return f.atom().kind == AtomKind::InU;
  if (f.is_quantifier() && f.bound().sort == Sort::Small) return true;
  return std::any_of(f.children().begin(), f.children().end(),
                     [](const Formula& c) { return mentions_u(c); });
}

// ---------------------------------------------------------------------------
// Normal forms

namespace {

Formula nnf_rec(const Formula& f, bool negate) {
  switch (f.kind()) {
    case Connective::Atom: {
      if (!negate) return f;
      const Atom& a = f.atom();
      switch (a.kind) {
        case AtomKind::Eq:
          return Formula::neq(a.poly);
        case AtomKind::Neq:
          return Formula::eq(a.poly);
        case AtomKind::InU:
          return Formula::negation(f);
      }
      return f;
    }
    case Connective::Not:
      return nnf_rec(f.body(), !negate);
    case Connective::And:
    case Connective::Or: {
      std::vector<Formula> parts;
      for (const auto& c : f.children()) parts.push_back(nnf_rec(c, negate));
      bool conj = (f.kind() == Connective::And) != negate;
      return conj ? Formula::conjunction(std::move(parts))
                  : Formula::disjunction(std::move(parts));
    }
    case Connective::Exists:
    case Connective::Forall: {
      Formula body = nnf_rec(f.body(), negate);
      bool ex = (f.kind() == Connective::Exists) != negate;
      return ex ? Formula::exists(f.bound(), std::move(body))
                : Formula::forall(f.bound(), std::move(body));
    }
  }
  return f;
}

void add_unique(Clause& clause, const Formula& lit) {
  if (std::find(clause.begin(), clause.end(), lit) == clause.end()) {
    clause.push_back(lit);
  }
}

std::vector<Clause> dnf_rec(const Formula& f, std::size_t max_clauses) {
  switch (f.kind()) {
    case Connective::Or: {
      std::vector<Clause> out;
      for (const auto& c : f.children()) {
        auto part = dnf_rec(c, max_clauses);
        out.insert(out.end(), part.begin(), part.end());
        if (out.size() > max_clauses) {
          throw Error(ErrorKind::SizeLimit,
                      "DNF exceeds " + std::to_string(max_clauses) +
                          " clauses");
        }
      }
      return out;
    }
    case Connective::And: {
      std::vector<Clause> acc{Clause{}};
      for (const auto& c : f.children()) {
        auto part = dnf_rec(c, max_clauses);
        if (acc.size() * part.size() > max_clauses) {
          throw Error(ErrorKind::SizeLimit,
                      "DNF exceeds " + std::to_string(max_clauses) +
                          " clauses");
        }
        std::vector<Clause> next;
        next.reserve(acc.size() * part.size());
        for (const auto& a : acc) {
          for (const auto& b : part) {
            Clause merged = a;
            for (const auto& lit : b) add_unique(merged, lit);
            next.push_back(std::move(merged));
          }
        }
        acc = std::move(next);
      }
      return acc;
    }
    default:
      if (!f.is_literal()) {
        throw Error(ErrorKind::InvalidArgument,
                    "dnf expects a quantifier-free formula, got " + print(f));
      }
      return {Clause{f}};
  }
}

}  // namespace

Formula nnf(const Formula& f) { return nnf_rec(f, false); }

std::vector<Clause> dnf_clauses(const Formula& f, std::size_t max_clauses) {
  return dnf_rec(nnf(f), max_clauses);
}

Formula from_clauses(const std::vector<Clause>& clauses) {
  std::vector<Formula> disjuncts;
  disjuncts.reserve(clauses.size());
  for (const auto& c : clauses) disjuncts.push_back(Formula::conjunction(c));
  return Formula::disjunction(std::move(disjuncts));
}

Formula dnf(const Formula& f, std::size_t max_clauses) {
  return from_clauses(dnf_clauses(f, max_clauses));
}

// ---------------------------------------------------------------------------
// Renaming and substitution

NameSupply::NameSupply(std::set<std::string> used) : used_(std::move(used)) {}

std::string NameSupply::fresh(const std::string& base) {
  for (std::size_t k = 1;; ++k) {
    std::string candidate = base + "_" + std::to_string(k);
    if (used_.insert(candidate).second) return candidate;
  }
}

namespace {

Formula map_atoms(const Formula& f,
                  const std::function<Formula(const Atom&)>& fn) {
  switch (f.kind()) {
    case Connective::Atom:
      return fn(f.atom());
    case Connective::Not:
      return Formula::negation(map_atoms(f.body(), fn));
    case Connective::And:
    case Connective::Or: {
      std::vector<Formula> parts;
      for (const auto& c : f.children()) parts.push_back(map_atoms(c, fn));
      return f.kind() == Connective::And
                 ? Formula::conjunction(std::move(parts))
                 : Formula::disjunction(std::move(parts));
    }
    case Connective::Exists:
      return Formula::exists(f.bound(), map_atoms(f.body(), fn));
    case Connective::Forall:
      return Formula::forall(f.bound(), map_atoms(f.body(), fn));
  }
  return f;
}

Formula rebuild_quantifier(const Formula& f, Var bound, Formula body) {
  return f.kind() == Connective::Exists
             ? Formula::exists(std::move(bound), std::move(body))
             : Formula::forall(std::move(bound), std::move(body));
}

// Renames free occurrences of `from` to `to` (no capture checks).
Formula rename_free(const Formula& f, const std::string& from,
                    const std::string& to) {
  switch (f.kind()) {
    case Connective::Atom: {
      const Atom& a = f.atom();
      if (a.kind == AtomKind::InU) {
        return a.var == from ? Formula::in_u(to) : f;
      }
      if (!a.poly.contains(from)) return f;
      Polynomial p = a.poly.substitute({{from, Polynomial::variable(to)}});
      return Formula::atom(Atom{a.kind, std::move(p), {}});
    }
    case Connective::Exists:
    case Connective::Forall:
      if (f.bound().name == from) return f;
      return rebuild_quantifier(f, f.bound(),
                                rename_free(f.body(), from, to));
    case Connective::Not:
      return Formula::negation(rename_free(f.body(), from, to));
    case Connective::And:
    case Connective::Or: {
      std::vector<Formula> parts;
      for (const auto& c : f.children()) {
        parts.push_back(rename_free(c, from, to));
      }
      return f.kind() == Connective::And
                 ? Formula::conjunction(std::move(parts))
                 : Formula::disjunction(std::move(parts));
    }
  }
  return f;
}

Formula rename_apart_rec(const Formula& f, std::set<std::string>& taken,
                         NameSupply& supply) {
  switch (f.kind()) {
    case Connective::Atom:
      return f;
    case Connective::Exists:
    case Connective::Forall: {
      Var bound = f.bound();
      Formula body = f.body();
      if (taken.count(bound.name)) {
        std::string fresh = supply.fresh(bound.name);
        body = rename_free(body, bound.name, fresh);
        bound.name = fresh;
      }
      taken.insert(bound.name);
      supply.reserve(bound.name);
      return rebuild_quantifier(f, bound,
                                rename_apart_rec(body, taken, supply));
    }
    case Connective::Not:
      return Formula::negation(rename_apart_rec(f.body(), taken, supply));
    case Connective::And:
    case Connective::Or: {
      std::vector<Formula> parts;
      for (const auto& c : f.children()) {
        parts.push_back(rename_apart_rec(c, taken, supply));
      }
      return f.kind() == Connective::And
                 ? Formula::conjunction(std::move(parts))
                 : Formula::disjunction(std::move(parts));
    }
  }
  return f;
}

}  // namespace

Formula rename_bound(const Formula& f, const std::string& from,
                     const std::string& to) {
  return rename_free(f, from, to);
}

Formula rename_apart(const Formula& f, const std::set<std::string>& reserved) {
  std::set<std::string> taken = free_vars(f);
  taken.insert(reserved.begin(), reserved.end());
  std::set<std::string> used = all_names(f);
  used.insert(reserved.begin(), reserved.end());
  NameSupply supply(std::move(used));
  return rename_apart_rec(f, taken, supply);
}

namespace {

Formula substitute_rec(const Formula& f,
                       const std::map<std::string, Polynomial>& sigma,
                       const std::set<std::string>& range_vars,
                       NameSupply& supply) {
  switch (f.kind()) {
    case Connective::Atom: {
      const Atom& a = f.atom();
      if (a.kind == AtomKind::InU) {
        auto it = sigma.find(a.var);
        if (it == sigma.end()) return f;
        // U applies to variables only; a substituted variable must map to a
        // variable or a constant.
        const Polynomial& p = it->second;
        auto vs = p.variables();
        if (vs.size() == 1 && p == Polynomial::variable(*vs.begin())) {
          return Formula::in_u(*vs.begin());
        }
        if (p.is_constant()) {
          // Rational constants lie in the prime field, hence in k.
          return Formula::truth();
        }
        throw Error(ErrorKind::Sort, "cannot substitute " + p.to_string() +
                                         " under U(" + a.var + ")");
      }
      return Formula::atom(Atom{a.kind, a.poly.substitute(sigma), {}});
    }
    case Connective::Exists:
    case Connective::Forall: {
      Var bound = f.bound();
      if (sigma.count(bound.name)) {
        throw Error(ErrorKind::BoundVarSubstitution,
                    "substitution touches bound variable " + bound.name);
      }
      Formula body = f.body();
      if (range_vars.count(bound.name)) {
        std::string fresh = supply.fresh(bound.name);
        body = rename_free(body, bound.name, fresh);
        bound.name = fresh;
      }
      return rebuild_quantifier(
          f, bound, substitute_rec(body, sigma, range_vars, supply));
    }
    case Connective::Not:
      return Formula::negation(
          substitute_rec(f.body(), sigma, range_vars, supply));
    case Connective::And:
    case Connective::Or: {
      std::vector<Formula> parts;
      for (const auto& c : f.children()) {
        parts.push_back(substitute_rec(c, sigma, range_vars, supply));
      }
      return f.kind() == Connective::And
                 ? Formula::conjunction(std::move(parts))
                 : Formula::disjunction(std::move(parts));
    }
  }
  return f;
}

}  // namespace

Formula substitute(const Formula& f,
                   const std::map<std::string, Polynomial>& sigma) {
  std::set<std::string> range_vars;
  for (const auto& [v, p] : sigma) {
    auto vs = p.variables();
    range_vars.insert(vs.begin(), vs.end());
  }
  std::set<std::string> used = all_names(f);
  used.insert(range_vars.begin(), range_vars.end());
  for (const auto& [v, p] : sigma) used.insert(v);
  NameSupply supply(std::move(used));
  return substitute_rec(f, sigma, range_vars, supply);
}

namespace {

Formula canonical_binders(const Formula& f, std::size_t& counter) {
  switch (f.kind()) {
    case Connective::Atom:
      return f;
    case Connective::Exists:
    case Connective::Forall: {
      Var bound = f.bound();
      std::string name = "%" + std::to_string(counter++);
      Formula body = rename_free(f.body(), bound.name, name);
      bound.name = name;
      return rebuild_quantifier(f, bound, canonical_binders(body, counter));
    }
    case Connective::Not:
      return Formula::negation(canonical_binders(f.body(), counter));
    case Connective::And:
    case Connective::Or: {
      std::vector<Formula> parts;
      for (const auto& c : f.children()) {
        parts.push_back(canonical_binders(c, counter));
      }
      return f.kind() == Connective::And
                 ? Formula::conjunction(std::move(parts))
                 : Formula::disjunction(std::move(parts));
    }
  }
  return f;
}

}  // namespace

bool alpha_equivalent(const Formula& a, const Formula& b) {
  std::size_t ca = 0;
  std::size_t cb = 0;
  return canonical_binders(a, ca) == canonical_binders(b, cb);
}

// ---------------------------------------------------------------------------
// Constant folding

std::optional<bool> constant_truth(const Atom& a, Characteristic ch) {
  if (a.kind == AtomKind::InU) return std::nullopt;
  Polynomial p = a.poly.reduce(ch);
  if (!p.is_constant()) return std::nullopt;
  bool zero = p.is_zero();
  return a.kind == AtomKind::Eq ? zero : !zero;
}

bool is_truth(const Formula& f) {
  return f.is_atom() && f.atom().kind == AtomKind::Eq && f.atom().poly.is_zero();
}

bool is_falsity(const Formula& f) {
  return f.is_atom() && f.atom().kind == AtomKind::Eq &&
         f.atom().poly == Polynomial(1);
}

Formula simplify(const Formula& f, Characteristic ch) {
  switch (f.kind()) {
    case Connective::Atom: {
      auto v = constant_truth(f.atom(), ch);
      if (v) return *v ? Formula::truth() : Formula::falsity();
      return f;
    }
    case Connective::Not: {
      Formula b = simplify(f.body(), ch);
      if (is_truth(b)) return Formula::falsity();
      if (is_falsity(b)) return Formula::truth();
      return Formula::negation(std::move(b));
    }
    case Connective::And:
    case Connective::Or: {
      bool conj = f.kind() == Connective::And;
      std::vector<Formula> parts;
      for (const auto& c : f.children()) {
        Formula s = simplify(c, ch);
        if (conj ? is_falsity(s) : is_truth(s)) {
          return conj ? Formula::falsity() : Formula::truth();
        }
        if (conj ? is_truth(s) : is_falsity(s)) continue;
        if (std::find(parts.begin(), parts.end(), s) == parts.end()) {
          parts.push_back(std::move(s));
        }
      }
      return conj ? Formula::conjunction(std::move(parts))
                  : Formula::disjunction(std::move(parts));
    }
    case Connective::Exists:
    case Connective::Forall: {
      Formula b = simplify(f.body(), ch);
      // Both sorts are nonempty, so vacuous quantifiers disappear.
      if (!free_vars(b).count(f.bound().name)) return b;
      return rebuild_quantifier(f, f.bound(), std::move(b));
    }
  }
  return f;
}

}  // namespace pairdim
