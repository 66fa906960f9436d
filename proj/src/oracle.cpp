#include "pairdim/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "pairdim/dim2.hpp"
#include "pairdim/error.hpp"

namespace pairdim::oracle {

// ---------------------------------------------------------------------------
// Dense univariate arithmetic

UPoly::UPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

void UPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

UPoly UPoly::from(const Polynomial& p, const std::string& var) {
  std::vector<Rational> c;
  for (const auto& [m, coeff] : p.terms()) {
    unsigned e = 0;
    for (const auto& [name, exp] : m.factors()) {
      if (name != var) {
        throw Error(ErrorKind::NotUnivariate,
                    "oracle expects polynomials in " + var + " only, got " +
                        p.to_string());
      }
      e = exp;
    }
    if (c.size() <= e) c.resize(e + 1);
    c[e] += coeff;
  }
  return UPoly(std::move(c));
}

Rational UPoly::eval(const Rational& x) const {
  Rational acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

UPoly UPoly::derivative() const {
  std::vector<Rational> d;
  for (std::size_t i = 1; i < c_.size(); ++i) {
    d.push_back(c_[i] * static_cast<long>(i));
  }
  return UPoly(std::move(d));
}

UPoly UPoly::monic() const {
  if (c_.empty()) return *this;
  std::vector<Rational> m = c_;
  Rational lead = c_.back();
  for (auto& x : m) x /= lead;
  return UPoly(std::move(m));
}

UPoly operator*(const UPoly& a, const UPoly& b) {
  if (a.is_zero() || b.is_zero()) return UPoly();
  std::vector<Rational> c(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  }
  return UPoly(std::move(c));
}

namespace {

std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b) {
  if (b.is_zero()) {
    throw Error(ErrorKind::ZeroPolynomial, "division by zero polynomial");
  }
  std::vector<Rational> r = a.coeffs();
  const auto& bc = b.coeffs();
  int db = b.degree();
  std::vector<Rational> q(r.size() > bc.size() ? r.size() - bc.size() + 1 : 1);
  for (int k = static_cast<int>(r.size()) - 1; k >= db; --k) {
    if (r[k] == 0) continue;
    Rational f = r[k] / bc.back();
    q[k - db] = f;
    for (int j = 0; j <= db; ++j) r[k - db + j] -= f * bc[j];
  }
  return {UPoly(std::move(q)), UPoly(std::move(r))};
}

}  // namespace

UPoly upoly_rem(const UPoly& a, const UPoly& b) { return divmod(a, b).second; }
UPoly upoly_quo(const UPoly& a, const UPoly& b) { return divmod(a, b).first; }

UPoly upoly_gcd(UPoly a, UPoly b) {
  while (!b.is_zero()) {
    UPoly r = upoly_rem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

bool exists_root_not_root(const std::vector<Polynomial>& ps,
                          const Polynomial& q) {
  std::set<std::string> vars = q.variables();
  for (const auto& p : ps) {
    auto v = p.variables();
    vars.insert(v.begin(), v.end());
  }
  if (vars.size() > 1) {
    throw Error(ErrorKind::NotUnivariate,
                "oracle expects a single variable, got " +
                    std::to_string(vars.size()));
  }
  std::string var = vars.empty() ? "y" : *vars.begin();
  UPoly g;
  for (const auto& p : ps) g = upoly_gcd(g, UPoly::from(p, var));
  UPoly uq = UPoly::from(q, var);
  if (g.is_zero()) return !uq.is_zero();
  // Strip every root of q from g.
  for (;;) {
    UPoly h = upoly_gcd(g, uq);
    if (h.degree() <= 0) break;
    g = upoly_quo(g, h);
  }
  return g.degree() > 0;
}

// ---------------------------------------------------------------------------
// Root counting over Q(t)

namespace {

Polynomial derivative_in(const Polynomial& f, const std::string& z) {
  Polynomial out;
  for (const auto& [m, c] : f.terms()) {
    unsigned e = m.degree_in(z);
    if (e == 0) continue;
    std::vector<Monomial::Factor> fs;
    for (const auto& fac : m.factors()) {
      if (fac.first == z) {
        if (fac.second > 1) fs.emplace_back(z, fac.second - 1);
      } else {
        fs.push_back(fac);
      }
    }
    out += Polynomial::monomial(Monomial(fs), c * static_cast<long>(e));
  }
  return out;
}

Polynomial coefficient_of(const Polynomial& f, const std::string& z,
                          unsigned e) {
  Polynomial out;
  for (const auto& [m, c] : f.terms()) {
    if (m.degree_in(z) == e) out += Polynomial::monomial(m.without(z), c);
  }
  return out;
}

unsigned zdeg(const Polynomial& f, const std::string& z) {
  unsigned d = 0;
  for (const auto& [m, c] : f.terms()) d = std::max(d, m.degree_in(z));
  return d;
}

// Scales to integer coefficients with unit content.
Polynomial primitive_scalar(const Polynomial& f) {
  if (f.is_zero()) return f;
  mpz_class den = 1;
  mpz_class num = 0;
  for (const auto& [m, c] : f.terms()) {
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
    mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), c.get_num_mpz_t());
  }
  Rational s(den, num);
  s.canonicalize();
  return f.scaled(s);
}

// Pseudo-remainder of a by b in z, written out independently of the engine.
Polynomial prem_in(Polynomial a, const Polynomial& b, const std::string& z) {
  unsigned db = zdeg(b, z);
  Polynomial lc = coefficient_of(b, z, db);
  Polynomial zv = Polynomial::variable(z);
  while (!a.is_zero() && zdeg(a, z) >= db) {
    unsigned da = zdeg(a, z);
    Polynomial la = coefficient_of(a, z, da);
    a = lc * a - la * zv.pow(da - db) * b;
  }
  return a;
}

}  // namespace

unsigned distinct_root_count(const Polynomial& f, const std::string& z) {
  if (f.is_zero()) {
    throw Error(ErrorKind::ZeroPolynomial, "root count of the zero polynomial");
  }
  unsigned d = zdeg(f, z);
  if (d == 0) return 0;
  Polynomial a = primitive_scalar(f);
  Polynomial b = primitive_scalar(derivative_in(f, z));
  // Euclid over Q(t)[z] through pseudo-remainders; the last nonzero term
  // has the degree of gcd(f, f').
  while (!b.is_zero() && zdeg(b, z) > 0) {
    Polynomial r = primitive_scalar(prem_in(a, b, z));
    a = std::move(b);
    b = std::move(r);
  }
  unsigned g = b.is_zero() ? zdeg(a, z) : 0;
  return d - g;
}

// ---------------------------------------------------------------------------
// Assignments and instantiation

std::vector<Assignment> generate_assignments(
    const std::vector<std::string>& vars, std::size_t count,
    const EngineContext& ctx, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> num(-4, 4);
  std::uniform_int_distribution<int> den(1, 3);
  std::uniform_int_distribution<int> kind(0, 9);
  std::vector<Assignment> out;
  for (std::size_t i = 0; i < count; ++i) {
    Assignment a;
    for (std::size_t j = 0; j < vars.size(); ++j) {
      int k = kind(rng);
      if (k == 0 && j > 0) {
        a[vars[j]] = a[vars[rng() % j]];
        continue;
      }
      if (k >= 6 && !ctx.transcendentals.empty()) {
        Polynomial t = Polynomial::variable(
            ctx.transcendentals[rng() % ctx.transcendentals.size()]);
        Rational c1(num(rng) == 0 ? 1 : num(rng));
        Rational c0(num(rng), den(rng));
        c0.canonicalize();
        Polynomial value = t.scaled(c1) + Polynomial(c0);
        if (k == 9) value = t * t + Polynomial(c0);
        a[vars[j]] = value;
        continue;
      }
      Rational r(num(rng), den(rng));
      r.canonicalize();
      a[vars[j]] = Polynomial(r);
    }
    out.push_back(std::move(a));
  }
  return out;
}

namespace {

Formula instantiate_rec(const Formula& f, const Assignment& a,
                        std::set<std::string>& bound) {
  switch (f.kind()) {
    case Connective::Atom: {
      const Atom& at = f.atom();
      if (at.kind == AtomKind::InU) {
        if (bound.count(at.var)) return f;
        auto it = a.find(at.var);
        if (it == a.end()) return f;
        return it->second.is_constant() ? Formula::truth() : Formula::falsity();
      }
      std::map<std::string, Polynomial> sigma;
      for (const auto& v : at.poly.variables()) {
        if (bound.count(v)) continue;
        auto it = a.find(v);
        if (it != a.end()) sigma.emplace(v, it->second);
      }
      if (sigma.empty()) return f;
      return Formula::atom(Atom{at.kind, at.poly.substitute(sigma), {}});
    }
    case Connective::Not:
      return Formula::negation(instantiate_rec(f.body(), a, bound));
    case Connective::And:
    case Connective::Or: {
      std::vector<Formula> parts;
      for (const auto& c : f.children()) {
        parts.push_back(instantiate_rec(c, a, bound));
      }
      return f.kind() == Connective::And ? Formula::conjunction(parts)
                                         : Formula::disjunction(parts);
    }
    case Connective::Exists:
    case Connective::Forall: {
      bool fresh = bound.insert(f.bound().name).second;
      Formula body = instantiate_rec(f.body(), a, bound);
      if (fresh) bound.erase(f.bound().name);
      return f.kind() == Connective::Exists ? Formula::exists(f.bound(), body)
                                            : Formula::forall(f.bound(), body);
    }
  }
  return f;
}

}  // namespace

Formula instantiate(const Formula& f, const Assignment& a) {
  std::set<std::string> bound;
  return instantiate_rec(f, a, bound);
}

// ---------------------------------------------------------------------------
// Sampling evaluator

const char* to_string(Tri t) {
  switch (t) {
    case Tri::False:
      return "false";
    case Tri::True:
      return "true";
    case Tri::Unknown:
      return "unknown";
  }
  return "unknown";
}

namespace {

class Sampler {
 public:
  explicit Sampler(const EngineContext& ctx) : ctx_(ctx) {
    for (int v : {0, 1, -1, 2}) small_.push_back(Polynomial(v));
    small_.push_back(Polynomial(Rational(1, 2)));
    field_ = {Polynomial(0), Polynomial(1), Polynomial(-1), Polynomial(2)};
    for (const auto& t : ctx.transcendentals) {
      Polynomial tv = Polynomial::variable(t);
      field_.push_back(tv);
      field_.push_back(tv + Polynomial(1));
      field_.push_back(-tv);
    }
  }

  Tri eval(const Formula& f, Assignment& env) {
    switch (f.kind()) {
      case Connective::Atom:
        return atom(f.atom(), env);
      case Connective::Not: {
        Tri b = eval(f.body(), env);
        if (b == Tri::Unknown) return b;
        return b == Tri::True ? Tri::False : Tri::True;
      }
      case Connective::And:
      case Connective::Or: {
        bool conj = f.kind() == Connective::And;
        Tri settle = conj ? Tri::False : Tri::True;
        bool unknown = false;
        for (const auto& c : f.children()) {
          Tri v = eval(c, env);
          if (v == settle) return settle;
          if (v == Tri::Unknown) unknown = true;
        }
        if (unknown) return Tri::Unknown;
        return conj ? Tri::True : Tri::False;
      }
      case Connective::Exists:
      case Connective::Forall: {
        bool ex = f.kind() == Connective::Exists;
        const auto& samples = f.bound().sort == Sort::Small ? small_ : field_;
        const std::string& x = f.bound().name;
        auto saved = env.find(x) == env.end()
                         ? std::optional<Polynomial>()
                         : std::optional<Polynomial>(env[x]);
        Tri result = Tri::Unknown;
        for (const auto& s : samples) {
          env[x] = s;
          Tri v = eval(f.body(), env);
          if (ex && v == Tri::True) {
            result = Tri::True;
            break;
          }
          if (!ex && v == Tri::False) {
            result = Tri::False;
            break;
          }
        }
        if (saved) {
          env[x] = *saved;
        } else {
          env.erase(x);
        }
        return result;
      }
    }
    return Tri::Unknown;
  }

 private:
  Tri atom(const Atom& a, const Assignment& env) {
    if (a.kind == AtomKind::InU) {
      auto it = env.find(a.var);
      if (it != env.end()) {
        return it->second.is_constant() ? Tri::True : Tri::False;
      }
      if (ctx_.is_transcendental(a.var)) return Tri::False;
      throw Error(ErrorKind::FreeVariable, "unassigned variable " + a.var);
    }
    std::map<std::string, Polynomial> sigma;
    for (const auto& v : a.poly.variables()) {
      auto it = env.find(v);
      if (it != env.end()) {
        sigma.emplace(v, it->second);
      } else if (!ctx_.is_transcendental(v)) {
        throw Error(ErrorKind::FreeVariable, "unassigned variable " + v);
      }
    }
    bool zero = a.poly.substitute(sigma).reduce(ctx_.characteristic).is_zero();
    bool holds = a.kind == AtomKind::Eq ? zero : !zero;
    return holds ? Tri::True : Tri::False;
  }

  const EngineContext& ctx_;
  std::vector<Polynomial> small_;
  std::vector<Polynomial> field_;
};

}  // namespace

Tri sample_eval(const Formula& sentence, const EngineContext& ctx) {
  Sampler s(ctx);
  Assignment env;
  return s.eval(sentence, env);
}

SampleReport sample_check(const Formula& engine, const Formula& reference,
                          const std::vector<Assignment>& assignments,
                          const EngineContext& ctx) {
  SampleReport report;
  for (const auto& a : assignments) {
    Formula e = instantiate(engine, a);
    Formula r = instantiate(reference, a);
    bool ev = decide_pair_sentence(e, ctx);
    Tri rs = sample_eval(r, ctx);
    bool rv = rs == Tri::Unknown ? decide_pair_sentence(r, ctx) : rs == Tri::True;
    Tri es = sample_eval(e, ctx);
    bool ok = ev == rv;
    if (es != Tri::Unknown && (es == Tri::True) != ev) {
      ok = false;
      rv = es == Tri::True;
    }
    ++report.total;
    if (ok) {
      ++report.agreements;
    } else {
      report.disagreements.push_back(Disagreement{a, ev, rv});
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Point counts

namespace {

struct ModTerm {
  unsigned long coeff;
  std::vector<unsigned> exps;
};

std::optional<std::vector<ModTerm>> to_mod_terms(
    const Polynomial& p, const std::vector<std::string>& vars,
    unsigned long prime) {
  std::vector<ModTerm> out;
  mpz_class mod(prime);
  for (const auto& [m, c] : p.terms()) {
    mpz_class den = c.get_den() % mod;
    if (den == 0) return std::nullopt;
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t());
    mpz_class num = c.get_num() % mod;
    if (num < 0) num += mod;
    mpz_class v = (num * inv) % mod;
    ModTerm t{v.get_ui(), std::vector<unsigned>(vars.size(), 0)};
    for (const auto& [name, e] : m.factors()) {
      auto it = std::find(vars.begin(), vars.end(), name);
      if (it == vars.end()) {
        throw Error(ErrorKind::InvalidArgument,
                    "variable " + name + " is not among the ambient variables");
      }
      t.exps[it - vars.begin()] = e;
    }
    out.push_back(std::move(t));
  }
  return out;
}

unsigned long powmod(unsigned long b, unsigned e, unsigned long p) {
  unsigned long r = 1 % p;
  b %= p;
  while (e > 0) {
    if (e & 1U) r = r * b % p;
    b = b * b % p;
    e >>= 1U;
  }
  return r;
}

}  // namespace

DimEstimate ffield_dim_estimate(const std::vector<Polynomial>& eqs,
                                const std::vector<std::string>& vars,
                                const std::vector<unsigned long>& primes) {
  DimEstimate est;
  std::vector<double> xs;
  std::vector<double> ys;
  for (unsigned long p : primes) {
    std::vector<std::vector<ModTerm>> polys;
    bool usable = true;
    for (const auto& e : eqs) {
      auto t = to_mod_terms(e, vars, p);
      if (!t) {
        usable = false;
        break;
      }
      polys.push_back(std::move(*t));
    }
    if (!usable) continue;
    std::vector<unsigned long> point(vars.size(), 0);
    unsigned long count = 0;
    for (;;) {
      bool all_zero = true;
      for (const auto& poly : polys) {
        unsigned long acc = 0;
        for (const auto& t : poly) {
          unsigned long v = t.coeff;
          for (std::size_t i = 0; i < point.size(); ++i) {
            if (t.exps[i] > 0) v = v * powmod(point[i], t.exps[i], p) % p;
          }
          acc = (acc + v) % p;
        }
        if (acc != 0) {
          all_zero = false;
          break;
        }
      }
      if (all_zero) ++count;
      std::size_t i = 0;
      while (i < point.size() && ++point[i] == p) point[i++] = 0;
      if (i == point.size()) break;
    }
    est.counts.emplace_back(p, count);
    if (count > 0) {
      xs.push_back(std::log(static_cast<double>(p)));
      ys.push_back(std::log(static_cast<double>(count)));
    }
  }
  if (xs.size() >= 2) {
    double mx = 0;
    double my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i];
      my += ys[i];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double sxy = 0;
    double sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    est.estimate = sxx > 0 ? sxy / sxx : 0;
  }
  return est;
}

}  // namespace pairdim::oracle
