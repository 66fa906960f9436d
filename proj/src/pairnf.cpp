#include "pairdim/pairnf.hpp"

#include <algorithm>
#include <map>

#include "pairdim/acfqe.hpp"
#include "pairdim/error.hpp"

namespace pairdim {

namespace {

std::set<std::string> free_names(const SpecialFormula& s) {
  std::set<std::string> out = free_vars(s.matrix);
  for (const auto& u : s.u_vars) out.erase(u);
  return out;
}

std::set<std::string> every_name(const SpecialFormula& s) {
  std::set<std::string> out = all_names(s.matrix);
  out.insert(s.u_vars.begin(), s.u_vars.end());
  return out;
}

void rename_u(SpecialFormula& s, std::size_t i, const std::string& to) {
  s.matrix = rename_bound(s.matrix, s.u_vars[i], to);
  s.u_vars[i] = to;
}

// Renames the small variables of a and b so that neither block captures a
// free name of the other and the blocks are disjoint.
void separate(SpecialFormula& a, SpecialFormula& b) {
  std::set<std::string> used = every_name(a);
  auto nb = every_name(b);
  used.insert(nb.begin(), nb.end());
  NameSupply supply(used);
  std::set<std::string> fa = free_names(a);
  std::set<std::string> fb = free_names(b);
  for (std::size_t i = 0; i < a.u_vars.size(); ++i) {
    if (fb.count(a.u_vars[i])) rename_u(a, i, supply.fresh(a.u_vars[i]));
  }
  std::set<std::string> ua(a.u_vars.begin(), a.u_vars.end());
  for (std::size_t i = 0; i < b.u_vars.size(); ++i) {
    if (ua.count(b.u_vars[i]) || fa.count(b.u_vars[i])) {
      rename_u(b, i, supply.fresh(b.u_vars[i]));
    }
  }
}

}  // namespace

SpecialFormula special_true() { return SpecialFormula{{}, Formula::truth()}; }

SpecialFormula special_and(const SpecialFormula& a, const SpecialFormula& b) {
  SpecialFormula x = a;
  SpecialFormula y = b;
  separate(x, y);
  if (is_truth(x.matrix)) std::swap(x, y);
  x.u_vars.insert(x.u_vars.end(), y.u_vars.begin(), y.u_vars.end());
  if (is_truth(y.matrix)) return x;
  x.matrix = Formula::conjunction({x.matrix, y.matrix});
  return x;
}

// k is nonempty, so the block that a disjunct leaves unconstrained always has
// witnesses.
SpecialFormula special_or(const SpecialFormula& a, const SpecialFormula& b) {
  SpecialFormula x = a;
  SpecialFormula y = b;
  separate(x, y);
  x.u_vars.insert(x.u_vars.end(), y.u_vars.begin(), y.u_vars.end());
  x.matrix = Formula::disjunction({x.matrix, y.matrix});
  return x;
}

VerySpecialFormula very_special_true() {
  return VerySpecialFormula{{}, {Polynomial()}, Polynomial(1)};
}

bool is_true(const VerySpecialFormula& v) {
  return v.u_vars.empty() && v.eqs.size() == 1 && v.eqs[0].is_zero() &&
         v.ineq == Polynomial(1);
}

bool is_true(const PairNormalForm& nf) {
  return std::any_of(nf.disjuncts.begin(), nf.disjuncts.end(),
                     [](const NormalDisjunct& d) {
                       return is_true(d.positive) && d.negatives.empty();
                     });
}

// ---------------------------------------------------------------------------
// Formulas

Formula to_formula(const SpecialFormula& s) {
  Formula body = s.matrix;
  for (auto it = s.u_vars.rbegin(); it != s.u_vars.rend(); ++it) {
    body = Formula::exists(Var{*it, Sort::Small}, body);
  }
  return body;
}

Formula to_formula(const VerySpecialFormula& v) {
  std::vector<Formula> parts;
  for (const auto& e : v.eqs) {
    if (!e.is_zero()) parts.push_back(Formula::eq(e));
  }
  if (v.ineq != Polynomial(1)) parts.push_back(Formula::neq(v.ineq));
  return to_formula(SpecialFormula{v.u_vars, Formula::conjunction(parts)});
}

Formula to_formula(const NormalDisjunct& d) {
  std::vector<Formula> parts;
  if (!is_true(d.positive) || d.negatives.empty()) {
    parts.push_back(to_formula(d.positive));
  }
  for (const auto& n : d.negatives) {
    parts.push_back(Formula::negation(to_formula(n)));
  }
  return Formula::conjunction(parts);
}

Formula to_formula(const PairNormalForm& nf) {
  std::vector<Formula> parts;
  for (const auto& d : nf.disjuncts) parts.push_back(to_formula(d));
  return rename_apart(Formula::disjunction(parts));
}

std::set<std::string> field_vars(const VerySpecialFormula& v,
                                 const EngineContext& ctx) {
  std::set<std::string> out;
  auto add = [&](const Polynomial& p) {
    for (const auto& name : p.variables()) {
      if (ctx.is_transcendental(name)) continue;
      if (std::find(v.u_vars.begin(), v.u_vars.end(), name) != v.u_vars.end()) {
        continue;
      }
      out.insert(name);
    }
  };
  for (const auto& e : v.eqs) add(e);
  add(v.ineq);
  return out;
}

std::set<std::string> field_vars(const PairNormalForm& nf,
                                 const EngineContext& ctx) {
  std::set<std::string> out;
  for (const auto& d : nf.disjuncts) {
    auto p = field_vars(d.positive, ctx);
    out.insert(p.begin(), p.end());
    for (const auto& n : d.negatives) {
      auto q = field_vars(n, ctx);
      out.insert(q.begin(), q.end());
    }
  }
  return out;
}

std::vector<std::pair<Monomial, Polynomial>> coefficients_wrt(
    const Polynomial& p, const std::set<std::string>& vars) {
  std::map<Monomial, Polynomial, MonomialGreater> grouped;
  for (const auto& [m, c] : p.terms()) {
    std::vector<Monomial::Factor> inside;
    std::vector<Monomial::Factor> outside;
    for (const auto& f : m.factors()) {
      (vars.count(f.first) ? inside : outside).push_back(f);
    }
    grouped[Monomial(inside)] += Polynomial::monomial(Monomial(outside), c);
  }
  std::vector<std::pair<Monomial, Polynomial>> out;
  for (auto& [m, c] : grouped) {
    if (!c.is_zero()) out.emplace_back(m, std::move(c));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Very special decomposition

namespace {

std::string pick_prefix(const std::set<std::string>& names) {
  std::string prefix = "_u";
  for (;;) {
    bool clash = std::any_of(names.begin(), names.end(), [&](const auto& n) {
      return n.compare(0, prefix.size(), prefix) == 0;
    });
    if (!clash) return prefix;
    prefix = "_" + prefix;
  }
}

std::string very_special_key(const VerySpecialFormula& v) {
  return print(to_formula(v));
}

// Sound sufficient test for "a divides b" in the characteristic.
bool divides(const Polynomial& a, const Polynomial& b, Characteristic ch) {
  if (a == Polynomial(1) || a == b) return true;
  if (a.is_zero()) return b.is_zero();
  auto q = exact_divide(b, a);
  if (!q) return false;
  if (ch.is_zero()) return true;
  try {
    q->reduce(ch);
    return true;
  } catch (const Error&) {
    return false;
  }
}

// The existential closure of `w` is implied by that of `v`.
bool implies(const VerySpecialFormula& v, const VerySpecialFormula& w,
             Characteristic ch) {
  for (const auto& u : w.u_vars) {
    if (std::find(v.u_vars.begin(), v.u_vars.end(), u) == v.u_vars.end()) {
      return false;
    }
  }
  for (const auto& e : w.eqs) {
    if (e.is_zero()) continue;
    if (std::find(v.eqs.begin(), v.eqs.end(), e) == v.eqs.end()) return false;
  }
  return divides(w.ineq, v.ineq, ch);
}

class Decomposer {
 public:
  Decomposer(const EngineContext& ctx, std::string prefix)
      : ctx_(ctx), ch_(ctx.characteristic), prefix_(std::move(prefix)) {}

  std::vector<VerySpecialFormula> run(const SpecialFormula& s) {
    Formula m = simplify(qe(s.matrix, ctx_), ch_);
    std::vector<VerySpecialFormula> out;
    std::set<std::string> seen;
    for (const auto& clause : dnf_clauses(m, ctx_.max_clauses)) {
      VerySpecialFormula v;
      v.u_vars = s.u_vars;
      Polynomial q(1);
      for (const auto& lit : clause) {
        if (!lit.is_atom() || lit.atom().kind == AtomKind::InU) {
          throw Error(ErrorKind::InternalInconsistency,
                      "U literal inside a special matrix: " + print(lit));
        }
        if (lit.atom().kind == AtomKind::Eq) {
          v.eqs.push_back(lit.atom().poly);
        } else {
          q *= lit.atom().poly;
        }
      }
      v.ineq = q;
      auto simplified = tidy(std::move(v));
      if (!simplified) continue;
      if (seen.insert(very_special_key(*simplified)).second) {
        out.push_back(std::move(*simplified));
      }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
      return very_special_key(a) < very_special_key(b);
    });
    return out;
  }

 private:
  bool is_small(const VerySpecialFormula& v, const std::string& name) const {
    return std::find(v.u_vars.begin(), v.u_vars.end(), name) != v.u_vars.end();
  }

  // An equation c*u + r = 0 with r in the other small variables pins u to an
  // element of k; substitute it away.
  bool eliminate_defined(VerySpecialFormula& v) {
    for (std::size_t i = 0; i < v.eqs.size(); ++i) {
      const Polynomial& e = v.eqs[i];
      for (const auto& u : v.u_vars) {
        if (e.degree_in(u) != 1) continue;
        Polynomial c = e.leading_coefficient(u);
        if (!c.is_constant()) continue;
        Polynomial r = e.reductum(u);
        bool ok = true;
        for (const auto& name : r.variables()) {
          if (name == u || !is_small(v, name)) ok = false;
        }
        if (!ok) continue;
        Polynomial value = (-r).scaled(1 / c.constant_term()).reduce(ch_);
        std::map<std::string, Polynomial> sigma{{u, value}};
        std::vector<Polynomial> rest;
        for (std::size_t j = 0; j < v.eqs.size(); ++j) {
          if (j != i) rest.push_back(v.eqs[j].substitute(sigma).reduce(ch_));
        }
        v.eqs = std::move(rest);
        v.ineq = v.ineq.substitute(sigma).reduce(ch_);
        v.u_vars.erase(std::find(v.u_vars.begin(), v.u_vars.end(), u));
        return true;
      }
    }
    return false;
  }

  std::optional<VerySpecialFormula> tidy(VerySpecialFormula v) {
    for (auto& e : v.eqs) e = e.canonical(ch_);
    v.ineq = v.ineq.reduce(ch_);
    while (eliminate_defined(v)) {
    }
    std::vector<Polynomial> eqs;
    for (const auto& e : v.eqs) {
      Polynomial c = e.canonical(ch_);
      if (c.is_zero()) continue;
      if (c.is_constant()) return std::nullopt;
      if (std::find(eqs.begin(), eqs.end(), c) == eqs.end()) eqs.push_back(c);
    }
    v.ineq = v.ineq.canonical(ch_);
    if (v.ineq.is_zero()) return std::nullopt;
    if (v.ineq.is_constant()) v.ineq = Polynomial(1);
    std::sort(eqs.begin(), eqs.end());
    if (eqs.empty()) eqs.push_back(Polynomial());
    v.eqs = std::move(eqs);
    // Unused small variables range over a nonempty set.
    std::vector<std::string> used;
    for (const auto& u : v.u_vars) {
      bool occurs = v.ineq.contains(u) ||
                    std::any_of(v.eqs.begin(), v.eqs.end(),
                                [&](const Polynomial& e) { return e.contains(u); });
      if (occurs) used.push_back(u);
    }
    // Positional names; for short blocks the numbering that gives the
    // smallest key, so the result does not depend on incoming names.
    std::vector<std::size_t> order(used.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::optional<VerySpecialFormula> best;
    std::string best_key;
    do {
      VerySpecialFormula w = renumbered(v, used, order);
      std::string key = very_special_key(w);
      if (!best || key < best_key) {
        best = std::move(w);
        best_key = std::move(key);
      }
    } while (used.size() <= kMaxPermuted &&
             std::next_permutation(order.begin(), order.end()));
    return best;
  }

  static constexpr std::size_t kMaxPermuted = 5;

  VerySpecialFormula renumbered(const VerySpecialFormula& v,
                                const std::vector<std::string>& used,
                                const std::vector<std::size_t>& order) const {
    VerySpecialFormula w = v;
    std::map<std::string, Polynomial> sigma;
    w.u_vars.clear();
    for (std::size_t i = 0; i < used.size(); ++i) {
      std::string name = prefix_ + std::to_string(order[i] + 1);
      sigma.emplace(used[i], Polynomial::variable(name));
    }
    for (std::size_t i = 0; i < used.size(); ++i) {
      w.u_vars.push_back(prefix_ + std::to_string(i + 1));
    }
    for (auto& e : w.eqs) e = e.substitute(sigma);
    w.ineq = w.ineq.substitute(sigma);
    std::sort(w.eqs.begin(), w.eqs.end());
    return w;
  }

  const EngineContext& ctx_;
  Characteristic ch_;
  std::string prefix_;
};

// ---------------------------------------------------------------------------
// Normalization

// A special or a negated special. Literals without small variables are kept
// positive by negating their matrix.
struct SLit {
  bool positive = true;
  SpecialFormula s;
};

using SClause = std::vector<SLit>;
using SDnf = std::vector<SClause>;

SLit negate(const SLit& lit) {
  if (lit.s.u_vars.empty()) {
    return SLit{true, SpecialFormula{{}, nnf(Formula::negation(lit.s.matrix))}};
  }
  return SLit{!lit.positive, lit.s};
}

class Normalizer {
 public:
  Normalizer(const EngineContext& ctx, const Formula& f)
      : ctx_(ctx), supply_(collect_names(ctx, f)) {
    std::set<std::string> names = free_vars(f);
    names.insert(ctx.transcendentals.begin(), ctx.transcendentals.end());
    prefix_ = pick_prefix(names);
  }

  PairNormalForm run(const Formula& f) {
    SDnf d = translate(nnf(f));
    PairNormalForm nf;
    for (const auto& clause : d) assemble(clause, nf);
    finish(nf);
    return nf;
  }

 private:
  static std::set<std::string> collect_names(const EngineContext& ctx,
                                             const Formula& f) {
    std::set<std::string> used = all_names(f);
    used.insert(ctx.transcendentals.begin(), ctx.transcendentals.end());
    return used;
  }

  void check_budget(std::size_t n) const {
    if (n > ctx_.max_clauses) {
      throw Error(ErrorKind::SizeLimit,
                  "normal form exceeds " + std::to_string(ctx_.max_clauses) +
                      " clauses");
    }
  }

  SDnf product(const SDnf& a, const SDnf& b) {
    check_budget(a.size() * b.size());
    SDnf out;
    for (const auto& x : a) {
      for (const auto& y : b) {
        SClause c = x;
        c.insert(c.end(), y.begin(), y.end());
        out.push_back(std::move(c));
      }
    }
    return out;
  }

  SDnf negate_dnf(const SDnf& d) {
    SDnf acc{SClause{}};
    for (const auto& clause : d) {
      SDnf alt;
      for (const auto& lit : clause) alt.push_back(SClause{negate(lit)});
      acc = product(acc, alt);
    }
    return acc;
  }

  SLit membership(const std::string& var) {
    std::string u = supply_.fresh("u");
    Polynomial p = Polynomial::variable(var) - Polynomial::variable(u);
    return SLit{true, SpecialFormula{{u}, Formula::eq(p)}};
  }

  SDnf translate(const Formula& g) {
    if (!mentions_u(g)) return {SClause{SLit{true, SpecialFormula{{}, g}}}};
    switch (g.kind()) {
      case Connective::Atom:
        return {SClause{membership(g.atom().var)}};
      case Connective::Not:
        // nnf leaves negation only on U atoms.
        return {SClause{negate(membership(g.body().atom().var))}};
      case Connective::And: {
        SDnf acc{SClause{}};
        for (const auto& c : g.children()) acc = product(acc, translate(c));
        return acc;
      }
      case Connective::Or: {
        SDnf out;
        for (const auto& c : g.children()) {
          SDnf part = translate(c);
          out.insert(out.end(), part.begin(), part.end());
          check_budget(out.size());
        }
        return out;
      }
      case Connective::Exists:
        return exists_over(g.bound(), translate(g.body()), g);
      case Connective::Forall: {
        Formula inner = nnf(Formula::negation(g.body()));
        return negate_dnf(exists_over(g.bound(), translate(inner), g));
      }
    }
    return {};
  }

  SDnf exists_over(const Var& x, const SDnf& body, const Formula& origin) {
    SDnf out;
    for (const auto& clause : body) {
      SClause kept;
      std::vector<SpecialFormula> gathered;
      for (const auto& lit : clause) {
        if (!free_names(lit.s).count(x.name)) {
          kept.push_back(lit);
        } else if (lit.positive) {
          gathered.push_back(lit.s);
        } else {
          throw UnsupportedFragment(
              std::string(x.sort == Sort::Field ? "field" : "small") +
                  " quantifier over a negated U-special formula",
              print(origin));
        }
      }
      if (!gathered.empty()) {
        SpecialFormula s = gathered.front();
        for (std::size_t i = 1; i < gathered.size(); ++i) {
          s = special_and(s, gathered[i]);
        }
        if (x.sort == Sort::Field) {
          // exists x exists u (U(u) & m) == exists u (U(u) & exists x m)
          s.matrix = Formula::exists(x, s.matrix);
        } else {
          s.u_vars.push_back(x.name);
        }
        kept.push_back(SLit{true, std::move(s)});
      }
      out.push_back(std::move(kept));
    }
    return out;
  }

  std::vector<VerySpecialFormula> decompose(const SpecialFormula& s) {
    Decomposer d(ctx_, prefix_);
    return d.run(s);
  }

  void assemble(const SClause& clause, PairNormalForm& nf) {
    SpecialFormula positive = special_true();
    std::vector<VerySpecialFormula> negatives;
    for (const auto& lit : clause) {
      if (lit.positive) positive = special_and(positive, lit.s);
    }
    for (const auto& lit : clause) {
      if (lit.positive) continue;
      // ~(v_1 | ... | v_k) == ~v_1 & ... & ~v_k
      for (auto& v : decompose(lit.s)) negatives.push_back(std::move(v));
    }
    for (const auto& p : decompose(positive)) add_disjunct(p, negatives, nf);
  }

  // An equation c*y + r = 0 of the positive part with r free of small
  // variables fixes the field variable y; negated parts may use the value.
  std::vector<VerySpecialFormula> pin_field_vars(
      const VerySpecialFormula& p,
      const std::vector<VerySpecialFormula>& negatives) {
    const Characteristic ch = ctx_.characteristic;
    std::vector<Polynomial> work = p.eqs;
    std::vector<VerySpecialFormula> out = negatives;
    for (;;) {
      std::optional<std::pair<std::string, Polynomial>> pin;
      for (const auto& e : work) {
        for (const auto& y : e.variables()) {
          if (ctx_.is_transcendental(y)) continue;
          if (std::find(p.u_vars.begin(), p.u_vars.end(), y) != p.u_vars.end()) {
            continue;
          }
          if (e.degree_in(y) != 1) continue;
          Polynomial c = e.leading_coefficient(y);
          if (!c.is_constant()) continue;
          Polynomial r = e.reductum(y);
          bool clean = std::none_of(
              p.u_vars.begin(), p.u_vars.end(),
              [&](const std::string& u) { return r.contains(u); });
          if (!clean) continue;
          pin.emplace(y, (-r).scaled(1 / c.constant_term()).reduce(ch));
          break;
        }
        if (pin) break;
      }
      if (!pin) return out;
      std::map<std::string, Polynomial> sigma{*pin};
      for (auto& e : work) e = e.substitute(sigma).reduce(ch);
      std::vector<VerySpecialFormula> next;
      for (const auto& n : out) {
        if (!field_vars(n, ctx_).count(pin->first)) {
          next.push_back(n);
          continue;
        }
        VerySpecialFormula body{{}, n.eqs, n.ineq};
        SpecialFormula s{n.u_vars, substitute(to_formula(body), sigma)};
        for (auto& v : decompose(s)) next.push_back(std::move(v));
      }
      out = std::move(next);
    }
  }

  void add_disjunct(const VerySpecialFormula& p,
                    const std::vector<VerySpecialFormula>& negatives,
                    PairNormalForm& nf) {
    std::vector<VerySpecialFormula> substituted = pin_field_vars(p, negatives);
    if (substituted != negatives) {
      add_disjunct(p, substituted, nf);
      return;
    }
    std::vector<Formula> folded;
    std::vector<VerySpecialFormula> rest;
    for (const auto& n : negatives) {
      if (n.u_vars.empty()) {
        folded.push_back(nnf(Formula::negation(to_formula(n))));
      } else {
        rest.push_back(n);
      }
    }
    if (!folded.empty()) {
      // Negated very specials without small variables are ring formulas;
      // move them into the positive part.
      Formula body = to_formula(VerySpecialFormula{{}, p.eqs, p.ineq});
      folded.insert(folded.begin(), body);
      SpecialFormula s{p.u_vars, Formula::conjunction(folded)};
      for (const auto& q : decompose(s)) add_disjunct(q, rest, nf);
      return;
    }
    NormalDisjunct d{p, {}};
    std::set<std::string> seen;
    for (const auto& n : rest) {
      if (implies(p, n, ctx_.characteristic)) return;
      if (seen.insert(very_special_key(n)).second) d.negatives.push_back(n);
    }
    std::sort(d.negatives.begin(), d.negatives.end(),
              [](const auto& a, const auto& b) {
                return very_special_key(a) < very_special_key(b);
              });
    nf.disjuncts.push_back(std::move(d));
  }

  void finish(PairNormalForm& nf) {
    if (is_true(nf)) {
      nf.disjuncts = {NormalDisjunct{very_special_true(), {}}};
      return;
    }
    std::vector<std::pair<std::string, NormalDisjunct>> keyed;
    std::set<std::string> seen;
    for (auto& d : nf.disjuncts) {
      std::string key = print(to_formula(d));
      if (seen.insert(key).second) keyed.emplace_back(key, std::move(d));
    }
    std::sort(keyed.begin(), keyed.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    nf.disjuncts.clear();
    for (auto& [k, d] : keyed) nf.disjuncts.push_back(std::move(d));
  }

  const EngineContext& ctx_;
  NameSupply supply_;
  std::string prefix_;
};

}  // namespace

std::vector<VerySpecialFormula> to_very_special(const SpecialFormula& s,
                                                const EngineContext& ctx) {
  std::set<std::string> names = free_names(s);
  names.insert(ctx.transcendentals.begin(), ctx.transcendentals.end());
  Decomposer d(ctx, pick_prefix(names));
  return d.run(s);
}

PairNormalForm normalize(const Formula& f, const EngineContext& ctx) {
  std::set<std::string> reserved(ctx.transcendentals.begin(),
                                 ctx.transcendentals.end());
  Formula g = rename_apart(f, reserved);
  Normalizer n(ctx, g);
  return n.run(g);
}

PairNormalForm complement(const PairNormalForm& nf, const EngineContext& ctx) {
  return normalize(Formula::negation(to_formula(nf)), ctx);
}

}  // namespace pairdim
