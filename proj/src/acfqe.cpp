#include "pairdim/acfqe.hpp"

#include <algorithm>

#include "pairdim/error.hpp"

namespace pairdim {

Formula canonical_atom(AtomKind kind, const Polynomial& p, Characteristic ch) {
  Polynomial c = p.canonical(ch);
  if (c.is_constant()) {
    bool zero = c.is_zero();
    bool holds = kind == AtomKind::Eq ? zero : !zero;
    return holds ? Formula::truth() : Formula::falsity();
  }
  return Formula::atom(Atom{kind, std::move(c), {}});
}

std::vector<Clause> tidy_clauses(std::vector<Clause> clauses,
                                 Characteristic ch) {
  std::vector<std::pair<std::vector<std::string>, Clause>> kept;
  for (auto& clause : clauses) {
    std::vector<std::pair<std::string, Formula>> lits;
    bool dead = false;
    for (const auto& lit : clause) {
      Formula l = lit;
      if (l.is_atom() && l.atom().kind != AtomKind::InU) {
        l = canonical_atom(l.atom().kind, l.atom().poly, ch);
        if (is_truth(l)) continue;
        if (is_falsity(l)) {
          dead = true;
          break;
        }
      }
      std::string key = print(l);
      if (std::none_of(lits.begin(), lits.end(),
                       [&](const auto& e) { return e.first == key; })) {
        lits.emplace_back(std::move(key), std::move(l));
      }
    }
    if (dead) continue;
    // p = 0 together with p != 0, or U(x) with ~U(x).
    for (const auto& [ka, a] : lits) {
      for (const auto& [kb, b] : lits) {
        if (a.is_atom() && b.is_atom() && a.atom().kind == AtomKind::Eq &&
            b.atom().kind == AtomKind::Neq && a.atom().poly == b.atom().poly) {
          dead = true;
        }
        if (a.is_atom() && a.atom().kind == AtomKind::InU &&
            b.kind() == Connective::Not && b.body() == a) {
          dead = true;
        }
      }
    }
    if (dead) continue;
    std::sort(lits.begin(), lits.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    std::vector<std::string> keys;
    Clause out;
    for (auto& [k, l] : lits) {
      keys.push_back(k);
      out.push_back(std::move(l));
    }
    kept.emplace_back(std::move(keys), std::move(out));
  }
  std::vector<Clause> result;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    bool drop = false;
    for (std::size_t j = 0; j < kept.size() && !drop; ++j) {
      if (i == j) continue;
      const auto& small = kept[j].first;
      const auto& big = kept[i].first;
      bool subset = std::includes(big.begin(), big.end(), small.begin(),
                                  small.end());
      // Strict subsets win; among equal clauses the first one stays.
      if (subset && (small.size() < big.size() || j < i)) drop = true;
    }
    if (!drop) result.push_back(kept[i].second);
  }
  return result;
}

namespace {

class Eliminator {
 public:
  Eliminator(std::string v, const EngineContext& ctx)
      : v_(std::move(v)), ctx_(ctx), ch_(ctx.characteristic) {}

  std::vector<Clause> run(const Clause& clause) {
    std::vector<Polynomial> eqs;
    Polynomial q(1);
    Clause guards;
    for (const auto& lit : clause) {
      if (!lit.is_atom() || lit.atom().kind == AtomKind::InU) {
        throw Error(ErrorKind::UnsupportedAtom,
                    "ring elimination cannot handle " + print(lit));
      }
      const Atom& a = lit.atom();
      Polynomial p = a.poly.reduce(ch_);
      if (!p.contains(v_)) {
        guards.push_back(Formula::atom(Atom{a.kind, p, {}}));
      } else if (a.kind == AtomKind::Eq) {
        eqs.push_back(p);
      } else {
        q = (q * p).reduce(ch_);
      }
    }
    solve(std::move(eqs), std::move(q), std::move(guards));
    return tidy_clauses(std::move(out_), ch_);
  }

 private:
  Polynomial red(const Polynomial& p) const { return p.reduce(ch_); }

  // Remainder of a by b in v, assuming lc_v(b) != 0.
  Polynomial prem(const Polynomial& a, const Polynomial& b) const {
    return red(pseudo_divide(a, b, v_).remainder);
  }

  void emit(Clause clause) {
    if (out_.size() > ctx_.max_clauses) {
      throw Error(ErrorKind::SizeLimit,
                  "elimination of " + v_ + " exceeds " +
                      std::to_string(ctx_.max_clauses) + " clauses");
    }
    out_.push_back(std::move(clause));
  }

  // One clause per nonzero coefficient of `c` in v.
  void emit_some_coefficient_nonzero(const Polynomial& c, const Clause& guards) {
    for (const auto& coeff : coeffs_in(c, v_)) {
      if (coeff.is_zero()) continue;
      Clause clause = guards;
      clause.push_back(Formula::neq(coeff));
      if (coeff.is_constant()) {
        emit(guards);
        return;
      }
      emit(std::move(clause));
    }
  }

  static bool guards_false(const Clause& guards, Characteristic ch) {
    for (const auto& g : guards) {
      if (!g.is_atom()) continue;
      auto v = constant_truth(g.atom(), ch);
      if (v && !*v) return true;
    }
    return false;
  }

  // 1 if the guards force lc != 0, 0 if they force lc = 0, -1 otherwise.
  int known_sign(const Polynomial& lc, const Clause& guards) const {
    Polynomial c = lc.canonical(ch_);
    for (const auto& g : guards) {
      if (!g.is_atom() || g.atom().kind == AtomKind::InU) continue;
      if (g.atom().poly.canonical(ch_) != c) continue;
      return g.atom().kind == AtomKind::Neq ? 1 : 0;
    }
    return -1;
  }

  void solve(std::vector<Polynomial> eqs, Polynomial q, Clause guards) {
    if (guards_false(guards, ch_)) return;
    q = red(q);
    if (q.is_zero()) return;
    std::vector<Polynomial> live;
    for (auto& p : eqs) {
      p = red(p);
      if (p.is_zero()) continue;
      if (!p.contains(v_)) {
        if (p.is_constant()) return;
        guards.push_back(Formula::eq(p));
      } else {
        live.push_back(std::move(p));
      }
    }
    if (live.empty()) {
      emit_some_coefficient_nonzero(q, guards);
      return;
    }
    // Pivot: lowest degree in v, ties broken by the polynomial order.
    std::size_t pivot = 0;
    for (std::size_t i = 1; i < live.size(); ++i) {
      unsigned di = live[i].degree_in(v_);
      unsigned dp = live[pivot].degree_in(v_);
      if (di < dp || (di == dp && live[i] < live[pivot])) pivot = i;
    }
    Polynomial p = live[pivot];
    Polynomial lc = red(p.leading_coefficient(v_));
    int known = known_sign(lc, guards);
    if (known == 0) {
      std::vector<Polynomial> reduced = live;
      reduced[pivot] = red(p.reductum(v_));
      solve(std::move(reduced), q, std::move(guards));
      return;
    }
    if (!lc.is_constant() && known < 0) {
      Clause nonzero = guards;
      nonzero.push_back(Formula::neq(lc));
      Clause zero = guards;
      zero.push_back(Formula::eq(lc));
      solve_nonzero_lc(live, pivot, q, std::move(nonzero));
      std::vector<Polynomial> reduced = live;
      reduced[pivot] = red(p.reductum(v_));
      solve(std::move(reduced), q, std::move(zero));
      return;
    }
    solve_nonzero_lc(live, pivot, q, std::move(guards));
  }

  void solve_nonzero_lc(const std::vector<Polynomial>& live, std::size_t pivot,
                        const Polynomial& q, Clause guards) {
    if (guards_false(guards, ch_)) return;
    const Polynomial& p = live[pivot];
    if (live.size() > 1) {
      std::vector<Polynomial> next{p};
      for (std::size_t i = 0; i < live.size(); ++i) {
        if (i != pivot) next.push_back(prem(live[i], p));
      }
      solve(std::move(next), q, std::move(guards));
      return;
    }
    // exists v (p = 0 & q != 0) with lc(p) != 0 iff p does not divide
    // q^deg(p), i.e. the remainder of q^deg(p) has a nonzero coefficient.
    unsigned d = p.degree_in(v_);
    Polynomial r = prem(q, p);
    Polynomial acc(1);
    for (unsigned i = 0; i < d; ++i) acc = prem(acc * r, p);
    emit_some_coefficient_nonzero(acc, guards);
  }

  std::string v_;
  const EngineContext& ctx_;
  Characteristic ch_;
  std::vector<Clause> out_;
};

Formula qe_rec(const Formula& f, const EngineContext& ctx);

Formula eliminate_exists(const std::string& v, const Formula& body,
                         const EngineContext& ctx) {
  std::vector<Clause> result;
  for (const auto& clause : dnf_clauses(body, ctx.max_clauses)) {
    auto part = eliminate_one_clauses(v, clause, ctx);
    result.insert(result.end(), part.begin(), part.end());
    if (result.size() > ctx.max_clauses) {
      throw Error(ErrorKind::SizeLimit, "elimination exceeds clause budget");
    }
  }
  return from_clauses(tidy_clauses(std::move(result), ctx.characteristic));
}

Formula qe_rec(const Formula& f, const EngineContext& ctx) {
  switch (f.kind()) {
    case Connective::Atom:
      if (f.atom().kind == AtomKind::InU) {
        throw Error(ErrorKind::UnsupportedAtom,
                    "ring elimination cannot handle " + print(f));
      }
      return f;
    case Connective::Not:
      return Formula::negation(qe_rec(f.body(), ctx));
    case Connective::And:
    case Connective::Or: {
      std::vector<Formula> parts;
      for (const auto& c : f.children()) parts.push_back(qe_rec(c, ctx));
      return f.kind() == Connective::And
                 ? Formula::conjunction(std::move(parts))
                 : Formula::disjunction(std::move(parts));
    }
    case Connective::Exists:
    case Connective::Forall: {
      if (f.bound().sort == Sort::Small) {
        throw Error(ErrorKind::UnsupportedAtom,
                    "ring elimination cannot handle a quantifier over U: " +
                        print(f));
      }
      Formula body = simplify(qe_rec(f.body(), ctx), ctx.characteristic);
      const std::string& v = f.bound().name;
      if (f.kind() == Connective::Exists) return eliminate_exists(v, body, ctx);
      // forall v. b  ==  ~exists v. ~b
      Formula inner = eliminate_exists(v, nnf(Formula::negation(body)), ctx);
      Formula out = nnf(Formula::negation(inner));
      return from_clauses(tidy_clauses(dnf_clauses(out, ctx.max_clauses),
                                       ctx.characteristic));
    }
  }
  return f;
}

}  // namespace

std::vector<Clause> eliminate_one_clauses(const std::string& v,
                                          const Clause& clause,
                                          const EngineContext& ctx) {
  Eliminator e(v, ctx);
  return e.run(clause);
}

Formula eliminate_one(const std::string& v, const Clause& clause,
                      const EngineContext& ctx) {
  return from_clauses(eliminate_one_clauses(v, clause, ctx));
}

Formula qe(const Formula& f, const EngineContext& ctx) {
  if (is_quantifier_free(f)) {
    if (mentions_u(f)) {
      throw Error(ErrorKind::UnsupportedAtom,
                  "ring elimination cannot handle U atoms");
    }
    return f;
  }
  return simplify(qe_rec(f, ctx), ctx.characteristic);
}

bool eval_over_transcendentals(const Formula& f, const EngineContext& ctx) {
  switch (f.kind()) {
    case Connective::Atom: {
      const Atom& a = f.atom();
      if (a.kind == AtomKind::InU) {
        throw Error(ErrorKind::UnsupportedAtom,
                    "cannot evaluate " + print(f) + " in the ring language");
      }
      bool zero = a.poly.reduce(ctx.characteristic).is_zero();
      return a.kind == AtomKind::Eq ? zero : !zero;
    }
    case Connective::Not:
      return !eval_over_transcendentals(f.body(), ctx);
    case Connective::And:
      return std::all_of(f.children().begin(), f.children().end(),
                         [&](const Formula& c) {
                           return eval_over_transcendentals(c, ctx);
                         });
    case Connective::Or:
      return std::any_of(f.children().begin(), f.children().end(),
                         [&](const Formula& c) {
                           return eval_over_transcendentals(c, ctx);
                         });
    default:
      throw Error(ErrorKind::InternalInconsistency,
                  "quantifier left after elimination");
  }
}

bool decide_sentence(const Formula& f, const EngineContext& ctx) {
  for (const auto& v : free_vars(f)) {
    if (!ctx.is_transcendental(v)) {
      throw Error(ErrorKind::FreeVariable,
                  "free variable " + v + " in a sentence");
    }
  }
  return eval_over_transcendentals(qe(f, ctx), ctx);
}

}  // namespace pairdim
