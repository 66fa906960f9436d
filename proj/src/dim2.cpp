#include "pairdim/dim2.hpp"

#include <algorithm>

#include "pairdim/acfqe.hpp"
#include "pairdim/error.hpp"

namespace pairdim {

int dim_max(int a, int b) { return std::max(a, b); }

int dim_add(int a, int b) {
  if (a == kNegInf || b == kNegInf) return kNegInf;
  return a + b;
}

std::string dim_to_string(int d) {
  return d == kNegInf ? "neg_inf" : std::to_string(d);
}

const char* to_string(Label label) {
  return label == Label::Small ? "Small" : "CoSmall";
}

// ---------------------------------------------------------------------------
// Sentences

bool very_special_holds(const VerySpecialFormula& v, const EngineContext& ctx) {
  auto free = field_vars(v, ctx);
  if (!free.empty()) {
    throw Error(ErrorKind::FreeVariable,
                "free variable " + *free.begin() + " in a sentence");
  }
  std::set<std::string> ts(ctx.transcendentals.begin(),
                           ctx.transcendentals.end());
  std::vector<Formula> parts;
  for (const auto& e : v.eqs) {
    for (const auto& [m, c] : coefficients_wrt(e, ts)) {
      parts.push_back(Formula::eq(c));
    }
  }
  std::vector<Formula> some;
  for (const auto& [m, c] : coefficients_wrt(v.ineq, ts)) {
    some.push_back(Formula::neq(c));
  }
  parts.push_back(Formula::disjunction(some));
  Formula body = simplify(Formula::conjunction(parts), ctx.characteristic);
  for (auto it = v.u_vars.rbegin(); it != v.u_vars.rend(); ++it) {
    body = Formula::exists(Var{*it, Sort::Field}, body);
  }
  // The u's now range over k, itself a model of ACF in the characteristic.
  EngineContext pure = ctx;
  pure.transcendentals.clear();
  return decide_sentence(body, pure);
}

bool normal_form_holds(const PairNormalForm& nf, const EngineContext& ctx) {
  for (const auto& d : nf.disjuncts) {
    if (!very_special_holds(d.positive, ctx)) continue;
    bool excluded = std::any_of(
        d.negatives.begin(), d.negatives.end(),
        [&](const VerySpecialFormula& n) { return very_special_holds(n, ctx); });
    if (!excluded) return true;
  }
  return false;
}

bool decide_pair_sentence(const Formula& f, const EngineContext& ctx) {
  for (const auto& v : free_vars(f)) {
    if (!ctx.is_transcendental(v)) {
      throw Error(ErrorKind::FreeVariable,
                  "free variable " + v + " in a sentence");
    }
  }
  return normal_form_holds(normalize(f, ctx), ctx);
}

// ---------------------------------------------------------------------------
// Fiber formulas

Formula zero_in(const Polynomial& p, const std::string& z) {
  std::vector<Formula> parts;
  for (const auto& c : coeffs_in(p, z)) {
    if (!c.is_zero()) parts.push_back(Formula::eq(c));
  }
  return Formula::conjunction(parts);
}

Formula nonzero_in(const Polynomial& p, const std::string& z) {
  std::vector<Formula> parts;
  for (const auto& c : coeffs_in(p, z)) {
    if (!c.is_zero()) parts.push_back(Formula::neq(c));
  }
  return Formula::disjunction(parts);
}

namespace {

Formula close_small(const std::vector<std::string>& u_vars, Formula body,
                    bool universal) {
  std::set<std::string> used = free_vars(body);
  for (auto it = u_vars.rbegin(); it != u_vars.rend(); ++it) {
    if (!used.count(*it)) continue;
    Var v{*it, Sort::Small};
    body = universal ? Formula::forall(v, body) : Formula::exists(v, body);
  }
  return body;
}

}  // namespace

Formula fiber_dim0_formula(const VerySpecialFormula& psi, const std::string& z,
                           Characteristic ch) {
  std::vector<Formula> some_nonzero;
  std::vector<Formula> all_zero;
  for (const auto& p : psi.eqs) {
    some_nonzero.push_back(nonzero_in(p, z));
    all_zero.push_back(zero_in(p, z));
  }
  all_zero.push_back(zero_in(psi.ineq, z));
  some_nonzero.push_back(Formula::conjunction(all_zero));
  Formula phi = simplify(Formula::disjunction(some_nonzero), ch);
  return close_small(psi.u_vars, phi, true);
}

Formula fiber_cofinite_formula(const VerySpecialFormula& psi,
                               const std::string& z, Characteristic ch) {
  std::vector<Formula> parts;
  for (const auto& p : psi.eqs) parts.push_back(zero_in(p, z));
  parts.push_back(nonzero_in(psi.ineq, z));
  Formula phi = simplify(Formula::conjunction(parts), ch);
  return close_small(psi.u_vars, phi, false);
}

Formula fiber_nonempty_formula(const VerySpecialFormula& psi,
                               const std::string& z, const EngineContext& ctx) {
  VerySpecialFormula body = psi;
  body.u_vars.clear();
  Formula matrix = Formula::exists(Var{z, Sort::Field}, to_formula(body));
  matrix = simplify(qe(matrix, ctx), ctx.characteristic);
  return close_small(psi.u_vars, matrix, false);
}

Formula set_small_formula(const PairNormalForm& nf, const std::string& z,
                          const EngineContext& ctx) {
  Characteristic ch = ctx.characteristic;
  std::vector<Formula> parts;
  for (const auto& d : nf.disjuncts) {
    std::vector<Formula> options{fiber_dim0_formula(d.positive, z, ch)};
    for (const auto& n : d.negatives) {
      options.push_back(fiber_cofinite_formula(n, z, ch));
    }
    parts.push_back(Formula::disjunction(options));
  }
  return simplify(Formula::conjunction(parts), ch);
}

DichotomyResult dichotomy(const PairNormalForm& nf, const std::string& z,
                          const EngineContext& ctx) {
  DichotomyResult r;
  r.complement = complement(nf, ctx);
  r.small_formula = set_small_formula(nf, z, ctx);
  r.complement_small_formula = set_small_formula(r.complement, z, ctx);
  r.small = decide_pair_sentence(r.small_formula, ctx);
  r.complement_small = decide_pair_sentence(r.complement_small_formula, ctx);
  if (r.small == r.complement_small) {
    throw Error(ErrorKind::InternalInconsistency,
                std::string("set and complement are ") +
                    (r.small ? "both small" : "both not small") + ": " +
                    print(to_formula(nf)));
  }
  r.label = r.small ? Label::Small : Label::CoSmall;
  return r;
}

// ---------------------------------------------------------------------------
// Dimension

namespace {

class DimEngine {
 public:
  explicit DimEngine(const EngineContext& ctx) : ctx_(ctx) {}

  DimCertificate run(const PairNormalForm& nf,
                     const std::vector<std::string>& vars) {
    DimCertificate cert;
    cert.vars = vars;
    cert.set_formula = print(to_formula(nf));
    std::string key;
    for (const auto& v : vars) key += v + ",";
    key += "|" + cert.set_formula;
    auto hit = memo_.find(key);
    if (hit != memo_.end()) return hit->second;

    auto used = field_vars(nf, ctx_);
    for (const auto& v : used) {
      if (std::find(vars.begin(), vars.end(), v) == vars.end()) {
        throw Error(ErrorKind::InvalidArgument,
                    "variable " + v + " is not among the ambient variables");
      }
    }
    const int n = static_cast<int>(vars.size());
    if (nf.disjuncts.empty()) {
      cert.method = "empty";
      cert.dimension = kNegInf;
    } else if (is_true(nf)) {
      cert.method = "full";
      cert.dimension = n;
    } else if (vars.empty()) {
      cert.method = "closed";
      cert.dimension = normal_form_holds(nf, ctx_) ? 0 : kNegInf;
    } else {
      peel(nf, vars, used, cert);
    }
    memo_.emplace(key, cert);
    return cert;
  }

 private:
  DimCertificate of_formula(const Formula& g,
                            const std::vector<std::string>& vars) {
    return run(normalize(g, ctx_), vars);
  }

  static std::vector<std::string> without(const std::vector<std::string>& vars,
                                          const std::string& z) {
    std::vector<std::string> out;
    for (const auto& v : vars) {
      if (v != z) out.push_back(v);
    }
    return out;
  }

  void peel(const PairNormalForm& nf, const std::vector<std::string>& vars,
            const std::set<std::string>& used, DimCertificate& cert) {
    // A coordinate the set does not mention contributes a factor K.
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
      if (used.count(*it)) continue;
      Formula f = to_formula(nf);
      cert.method = "absent";
      cert.variable = *it;
      cert.empty_formula = Formula::negation(f);
      cert.small_nonempty_formula = Formula::falsity();
      cert.co_small_formula = f;
      DimCertificate sub = run(nf, without(vars, *it));
      cert.dimension = dim_add(1, sub.dimension);
      cert.parts.emplace("coSmall", std::move(sub));
      return;
    }
    std::string last_reason;
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
      try {
        if (level(nf, vars, *it, cert)) return;
        last_reason = "fiber nonemptiness undetermined over " + *it;
      } catch (const UnsupportedFragment& e) {
        last_reason = e.what();
      }
      cert.rejected_variables.push_back(*it);
    }
    throw UnsupportedFragment(
        "no coordinate yields an exact fiber analysis (" + last_reason + ")",
        cert.set_formula);
  }

  bool level(const PairNormalForm& nf, const std::vector<std::string>& vars,
             const std::string& z, DimCertificate& cert) {
    const Characteristic ch = ctx_.characteristic;
    std::vector<std::string> base = without(vars, z);
    Formula small = set_small_formula(nf, z, ctx_);
    std::vector<Formula> upper_parts;
    std::vector<Formula> lower_parts;
    bool exact = true;
    for (const auto& d : nf.disjuncts) {
      std::vector<Formula> conj{fiber_nonempty_formula(d.positive, z, ctx_)};
      bool dependent = false;
      for (const auto& n : d.negatives) {
        if (field_vars(n, ctx_).count(z)) {
          dependent = true;
        } else {
          conj.push_back(Formula::negation(to_formula(n)));
        }
      }
      Formula part = Formula::conjunction(conj);
      upper_parts.push_back(part);
      if (dependent) {
        exact = false;
      } else {
        lower_parts.push_back(part);
      }
    }
    Formula upper = simplify(
        Formula::conjunction({small, Formula::disjunction(upper_parts)}), ch);
    Formula lower = simplify(
        Formula::conjunction({small, Formula::disjunction(lower_parts)}), ch);
    Formula co_small = simplify(Formula::negation(small), ch);

    DimCertificate c1 = of_formula(co_small, base);
    DimCertificate cu = of_formula(upper, base);
    int top = dim_add(1, c1.dimension);
    int result = dim_max(cu.dimension, top);
    std::optional<DimCertificate> cl;
    std::optional<Formula> inside_k;
    if (!exact && result != top && base.empty() && !mentions_constants(nf)) {
      // Here the set is small and defined without parameters outside k, so
      // it lies inside k: every quantifier may range over k.
      inside_k = nonempty_inside_k(nf, z, Sort::Small);
      EngineContext pure = ctx_;
      pure.transcendentals.clear();
      bool nonempty = decide_sentence(nonempty_inside_k(nf, z, Sort::Field), pure);
      DimCertificate k_cert;
      k_cert.method = "closed";
      k_cert.set_formula = print(*inside_k);
      k_cert.dimension = nonempty ? 0 : kNegInf;
      cl = std::move(k_cert);
      lower = simplify(Formula::conjunction({small, *inside_k}), ch);
      exact = true;
      result = dim_max(cl->dimension, top);
    } else if (!exact && result != top) {
      cl = of_formula(lower, base);
      if (dim_max(cl->dimension, top) != result) return false;
    }

    cert.method = "fiber";
    cert.variable = z;
    cert.exact_partition = exact;
    cert.co_small_formula = co_small;
    if (inside_k) {
      cert.small_nonempty_formula = lower;
      cert.empty_formula = simplify(
          Formula::conjunction({small, Formula::negation(*inside_k)}), ch);
      cert.parts.emplace("smallNonempty", std::move(*cl));
    } else if (exact) {
      cert.small_nonempty_formula = upper;
      cert.empty_formula = simplify(
          Formula::conjunction(
              {small, Formula::negation(Formula::disjunction(upper_parts))}),
          ch);
      cert.parts.emplace("smallNonempty", std::move(cu));
    } else {
      cert.small_nonempty_formula = lower;
      cert.small_nonempty_upper_formula = upper;
      // Fibers outside the upper bound are certainly empty.
      cert.empty_formula = simplify(
          Formula::conjunction(
              {small, Formula::negation(Formula::disjunction(upper_parts))}),
          ch);
      if (cl) cert.parts.emplace("smallNonempty", std::move(*cl));
      cert.parts.emplace("smallNonemptyUpper", std::move(cu));
    }
    cert.parts.emplace("coSmall", std::move(c1));
    cert.dimension = result;
    return true;
  }

  bool mentions_constants(const PairNormalForm& nf) const {
    auto touches = [&](const VerySpecialFormula& v) {
      auto hit = [&](const Polynomial& p) {
        for (const auto& name : p.variables()) {
          if (ctx_.is_transcendental(name)) return true;
        }
        return false;
      };
      return hit(v.ineq) || std::any_of(v.eqs.begin(), v.eqs.end(), hit);
    };
    for (const auto& d : nf.disjuncts) {
      if (touches(d.positive)) return true;
      if (std::any_of(d.negatives.begin(), d.negatives.end(), touches)) {
        return true;
      }
    }
    return false;
  }

  static Formula bind(const VerySpecialFormula& v, Sort sort) {
    Formula body = to_formula(VerySpecialFormula{{}, v.eqs, v.ineq});
    for (auto it = v.u_vars.rbegin(); it != v.u_vars.rend(); ++it) {
      body = Formula::exists(Var{*it, sort}, body);
    }
    return body;
  }

  // exists z. S(z) with z and every small quantifier ranging over `sort`.
  static Formula nonempty_inside_k(const PairNormalForm& nf,
                                   const std::string& z, Sort sort) {
    std::vector<Formula> options;
    for (const auto& d : nf.disjuncts) {
      std::vector<Formula> parts{bind(d.positive, sort)};
      for (const auto& n : d.negatives) {
        parts.push_back(Formula::negation(bind(n, sort)));
      }
      options.push_back(Formula::conjunction(parts));
    }
    return rename_apart(
        Formula::exists(Var{z, sort}, Formula::disjunction(options)));
  }

  const EngineContext& ctx_;
  std::map<std::string, DimCertificate> memo_;
};

}  // namespace

DimCertificate dim(const PairNormalForm& nf, const std::vector<std::string>& vars,
                   const EngineContext& ctx) {
  DimEngine engine(ctx);
  return engine.run(nf, vars);
}

// ---------------------------------------------------------------------------
// Almost internality

InternalityWitness almost_internal_witness(
    const Polynomial& p, const std::vector<std::string>& small_vars,
    const std::string& z, const std::map<std::string, Polynomial>& assignment,
    const EngineContext& ctx) {
  if (p.is_zero()) {
    throw Error(ErrorKind::ZeroPolynomial, "witness polynomial is zero");
  }
  for (const auto& [name, value] : assignment) {
    for (const auto& v : value.variables()) {
      if (!ctx.is_transcendental(v)) {
        throw Error(ErrorKind::InvalidArgument,
                    "parameter value for " + name + " mentions " + v);
      }
    }
  }
  Polynomial pa = p.substitute(assignment).reduce(ctx.characteristic);
  if (pa.is_zero()) {
    throw Error(ErrorKind::ZeroPolynomial,
                "witness polynomial vanishes at the parameters");
  }
  unsigned d = pa.degree_in(z);
  if (d == 0) {
    throw Error(ErrorKind::ZeroDegree,
                "witness polynomial has degree 0 in " + z);
  }
  for (const auto& v : pa.variables()) {
    bool known = v == z || ctx.is_transcendental(v) ||
                 std::find(small_vars.begin(), small_vars.end(), v) !=
                     small_vars.end();
    if (!known) {
      throw Error(ErrorKind::InvalidArgument,
                  "variable " + v + " is neither small, the fiber, nor assigned");
    }
  }
  InternalityWitness w;
  w.small_vars = small_vars;
  w.fiber_var = z;
  w.polynomial = pa;
  w.bound = d;
  w.relation = simplify(
      Formula::conjunction({Formula::eq(pa), nonzero_in(pa, z)}),
      ctx.characteristic);
  w.image = close_small(small_vars, w.relation, false);
  return w;
}

}  // namespace pairdim
