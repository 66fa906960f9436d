// Acceptance run: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include "generators.hpp"
#include "pairdim/acfqe.hpp"
#include "pairdim/cli.hpp"
#include "pairdim/dim2.hpp"
#include "pairdim/error.hpp"
#include "pairdim/oracle.hpp"
#include "pairdim/pairnf.hpp"
#include "pairdim/pregeo.hpp"
#include "support.hpp"

using namespace pairdim;
using pairdim::testing::load_corpus;
using pairdim::testing::P;
using pairdim::testing::random_poly;
using pairdim::testing::random_rational;
using pairdim::testing::SetGenerator;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::vector<std::string> failures;

  void fail(const std::string& what) {
    pass = false;
    if (failures.size() < 5) failures.push_back(what);
  }
  void require(bool ok, const std::string& what) {
    if (!ok) fail(what);
  }
};

std::map<std::string, Polynomial> to_sigma(
    const std::map<std::string, Rational>& at) {
  std::map<std::string, Polynomial> out;
  for (const auto& [v, r] : at) out.emplace(v, Polynomial(r));
  return out;
}

// ---------------------------------------------------------------------------
// 1. Quantifier elimination against the gcd oracle.

Formula exists_clause(const std::vector<Polynomial>& ps, const Polynomial& q) {
  std::vector<Formula> lits;
  for (const auto& p : ps) lits.push_back(Formula::eq(p));
  lits.push_back(Formula::neq(q));
  return Formula::exists(Var{"y", Sort::Field}, Formula::conjunction(lits));
}

void qe_oracle(Outcome& out) {
  std::mt19937 rng(101);
  EngineContext ctx;
  std::uniform_int_distribution<int> nparams(1, 3);
  std::uniform_int_distribution<int> neqs(1, 2);
  std::uniform_int_distribution<int> root(-3, 3);
  std::uniform_int_distribution<int> coin(0, 1);
  const std::vector<std::string> all{"a", "b", "c"};
  int instances = 0;
  int samples = 0;
  int true_side = 0;
  for (int i = 0; i < 600; ++i) {
    std::vector<std::string> params(all.begin(), all.begin() + nparams(rng));
    std::vector<std::string> vars{"y"};
    vars.insert(vars.end(), params.begin(), params.end());
    std::vector<Polynomial> ps;
    for (int j = neqs(rng); j > 0; --j) {
      Polynomial p = random_poly(rng, vars, 4, 3);
      // Half of the equations get a rational root in y at every parameter.
      if (coin(rng)) {
        p = p * (Polynomial::variable("y") - Polynomial(root(rng)));
        if (p.degree_in("y") > 4) p = Polynomial::variable("y") - P(params[0]);
      }
      ps.push_back(p);
    }
    Polynomial q = random_poly(rng, vars, 3, 2);
    Formula f = exists_clause(ps, q);
    Formula reduced = qe(f, ctx);
    ++instances;
    for (int s = 0; s < 2; ++s) {
      std::map<std::string, Rational> at;
      for (const auto& v : params) at[v] = random_rational(rng, 3);
      std::vector<Polynomial> ps_at;
      for (const auto& p : ps) ps_at.push_back(p.evaluate(at));
      bool expected = oracle::exists_root_not_root(ps_at, q.evaluate(at));
      bool got = eval_over_transcendentals(substitute(reduced, to_sigma(at)), ctx);
      true_side += expected;
      ++samples;
      out.require(got == expected, print(f));
    }
  }
  out.require(instances >= 500, "fewer than 500 instances");
  out.detail << instances << " instances, " << samples << " samples ("
             << true_side << " true)";
}

// ---------------------------------------------------------------------------
// Dimension helpers.

std::optional<int> dim_of(const std::string& text,
                          const std::vector<std::string>& vars) {
  ParsedFormula parsed = parse(text);
  EngineContext ctx;
  ctx.transcendentals = parsed.transcendentals;
  try {
    return dim(normalize(parsed.formula, ctx), vars, ctx).dimension;
  } catch (const UnsupportedFragment&) {
    return std::nullopt;
  }
}

void anchors(Outcome& out) {
  const std::vector<std::string> all{"y1", "y2", "y3"};
  for (int n = 1; n <= 3; ++n) {
    std::vector<std::string> vars(all.begin(), all.begin() + n);
    std::string small;
    for (const auto& v : vars) small += (small.empty() ? "" : " & ") + ("U(" + v + ")");
    auto full = dim_of("0 = 0", vars);
    auto inner = dim_of(small, vars);
    out.require(full && *full == n, "dim K^" + std::to_string(n));
    out.require(inner && *inner == 0, "dim k^" + std::to_string(n));
    out.detail << (n > 1 ? ", " : "") << "dim K^" << n << " = "
               << (full ? dim_to_string(*full) : "?") << ", dim k^" << n
               << " = " << (inner ? dim_to_string(*inner) : "?");
  }
}

// ---------------------------------------------------------------------------
// 3. Dichotomy totality.

void dichotomy_totality(Outcome& out) {
  SetGenerator gen(303, {"z"}, {"t"});
  int checked = 0;
  int small = 0;
  int unsupported = 0;
  int inconsistent = 0;
  for (int i = 0; i < 400 && checked < 150; ++i) {
    std::string text = gen.formula();
    ParsedFormula parsed = parse(text);
    EngineContext ctx;
    ctx.transcendentals = parsed.transcendentals;
    try {
      PairNormalForm nf = normalize(parsed.formula, ctx);
      DichotomyResult d = dichotomy(nf, "z", ctx);
      DichotomyResult co = dichotomy(complement(nf, ctx), "z", ctx);
      out.require(d.small != d.complement_small, "not exactly one side: " + text);
      out.require((d.label == Label::Small) == d.small, "label: " + text);
      out.require(co.label != d.label, "complement label: " + text);
      small += d.label == Label::Small;
      ++checked;
    } catch (const UnsupportedFragment&) {
      ++unsupported;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InternalInconsistency) throw;
      ++inconsistent;
      out.fail("InternalInconsistency: " + text);
    }
  }
  out.require(checked >= 100, "fewer than 100 normal forms");
  out.detail << checked << " sets (" << small << " Small), " << unsupported
             << " outside the fragment, " << inconsistent
             << " inconsistencies";
}

// ---------------------------------------------------------------------------
// 4. Dimension laws.

std::string body(SetGenerator& gen) {
  std::string f = gen.formula();
  return f.substr(gen.header().size());
}

struct LawCounter {
  std::string name;
  int checked = 0;
  int skipped = 0;
};

void dimension_laws(Outcome& out) {
  const std::vector<std::string> coords{"x", "y", "w"};
  LawCounter uni{"union"}, prod{"product"}, incl{"inclusion"},
      perm{"permutation"}, proj{"projection"};
  auto vars_n = [&](int n) {
    return std::vector<std::string>(coords.begin(), coords.begin() + n);
  };
  const int kTarget = 60;

  for (std::uint32_t seed = 1; seed < 2000; ++seed) {
    if (uni.checked >= kTarget && incl.checked >= kTarget) break;
    int n = 1 + static_cast<int>(seed % 3);
    std::vector<std::string> trans;
    if (seed % 2 == 0) trans = {"t"};
    SetGenerator gen(seed, vars_n(n), trans);
    std::string s = body(gen);
    std::string t = body(gen);
    std::string h = gen.header();
    auto ds = dim_of(h + s, vars_n(n));
    auto dt = dim_of(h + t, vars_n(n));
    auto du = dim_of(h + "(" + s + ") | (" + t + ")", vars_n(n));
    auto di = dim_of(h + "(" + s + ") & (" + t + ")", vars_n(n));
    if (ds && dt && du) {
      ++uni.checked;
      out.require(*du == dim_max(*ds, *dt), "union: " + s + " ; " + t);
    } else {
      ++uni.skipped;
    }
    if (ds && dt && di && du) {
      ++incl.checked;
      out.require(*di <= *ds && *di <= *dt && *ds <= *du && *dt <= *du,
                  "inclusion: " + s + " ; " + t);
    } else {
      ++incl.skipped;
    }
  }

  for (std::uint32_t seed = 1; seed < 2000 && prod.checked < kTarget; ++seed) {
    // Factors in disjoint coordinates, n <= 3 overall.
    std::vector<std::string> left{"x"};
    std::vector<std::string> right{"y"};
    if (seed % 3 == 1) left.push_back("w");
    if (seed % 3 == 2) right.push_back("w");
    std::vector<std::string> trans;
    if (seed % 2 == 0) trans = {"t"};
    SetGenerator g1(seed, left, trans);
    SetGenerator g2(seed + 7919, right, trans);
    std::string s = body(g1);
    std::string t = body(g2);
    std::vector<std::string> all = left;
    all.insert(all.end(), right.begin(), right.end());
    auto ds = dim_of(g1.header() + s, left);
    auto dt = dim_of(g1.header() + t, right);
    auto dp = dim_of(g1.header() + "(" + s + ") & (" + t + ")", all);
    if (ds && dt && dp) {
      ++prod.checked;
      out.require(*dp == dim_add(*ds, *dt), "product: " + s + " ; " + t);
    } else {
      ++prod.skipped;
    }
  }

  for (std::uint32_t seed = 1; seed < 2000 && perm.checked < kTarget; ++seed) {
    int n = 2 + static_cast<int>(seed % 2);
    std::vector<std::string> vars = vars_n(n);
    std::vector<std::string> image = vars;
    std::rotate(image.begin(), image.begin() + 1, image.end());
    std::vector<std::string> trans;
    if (seed % 2 == 0) trans = {"t"};
    // Same draws with renamed coordinates give the permuted set.
    SetGenerator g1(seed, vars, trans);
    SetGenerator g2(seed, image, trans);
    std::string s = g1.formula();
    std::string s_sigma = g2.formula();
    std::vector<std::string> reversed(vars.rbegin(), vars.rend());
    auto d = dim_of(s, vars);
    auto d_sigma = dim_of(s_sigma, vars);
    auto d_order = dim_of(s, reversed);
    if (d && d_sigma && d_order) {
      ++perm.checked;
      out.require(*d == *d_sigma && *d == *d_order, "permutation: " + s);
    } else {
      ++perm.skipped;
    }
  }

  for (std::uint32_t seed = 1; seed < 4000 && proj.checked < kTarget; ++seed) {
    int n = 2 + static_cast<int>(seed % 2);
    int m = 1 + static_cast<int>((seed / 2) % static_cast<unsigned>(n - 1));
    std::vector<std::string> trans;
    if (seed % 4 < 2) trans = {"t"};
    SetGenerator gen(seed, vars_n(n), trans);
    std::string s = body(gen);
    std::string image = "(" + s + ")";
    for (int i = n - 1; i >= m; --i) image = "exists " + coords[i] + ". " + image;
    auto d = dim_of(gen.header() + s, vars_n(n));
    auto dp = dim_of(gen.header() + image, vars_n(m));
    if (d && dp) {
      ++proj.checked;
      out.require(*dp <= *d, "projection: " + image);
    } else {
      ++proj.skipped;
    }
  }

  bool first = true;
  for (const LawCounter* c : {&uni, &prod, &incl, &perm, &proj}) {
    out.require(c->checked >= 50, c->name + " has fewer than 50 instances");
    out.detail << (first ? "" : ", ") << c->name << " " << c->checked << " (+"
               << c->skipped << " skipped)";
    first = false;
  }
}

// ---------------------------------------------------------------------------
// 5. The small-fiber formula against coefficient extraction.

std::vector<Polynomial> z_coefficients(const std::vector<Polynomial>& ps) {
  std::vector<Polynomial> out;
  for (const auto& p : ps) {
    for (const auto& c : coeffs_in(p, "z")) {
      if (!c.is_zero()) out.push_back(c);
    }
  }
  return out;
}

std::vector<Rational> rational_grid() {
  std::vector<Rational> out;
  for (int den = 1; den <= 3; ++den) {
    for (int num = -6; num <= 6; ++num) {
      Rational r(num, den);
      r.canonicalize();
      if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
    }
  }
  return out;
}

void psi_star(Outcome& out) {
  std::mt19937 rng(505);
  std::uniform_int_distribution<int> root(-3, 3);
  std::uniform_int_distribution<int> shape(0, 3);
  const std::vector<std::string> vars{"u", "a", "z"};
  const Polynomial u = Polynomial::variable("u");
  const auto grid = rational_grid();
  int formulas = 0;
  int samples = 0;
  int small_cases = 0;
  int cofinite_cases = 0;
  int witnessed = 0;
  EngineContext ctx;
  for (int i = 0; i < 80; ++i) {
    VerySpecialFormula psi;
    psi.u_vars = {"u"};
    int k = 1 + shape(rng) % 2;
    for (int j = 0; j < k; ++j) {
      Polynomial p = random_poly(rng, vars, 3, 3);
      // Some equations vanish identically in z at a rational u.
      if (shape(rng) == 0) p = (u - Polynomial(root(rng))) * p;
      if (shape(rng) == 0) p = (u - P("a")) * random_poly(rng, {"z", "a"}, 2, 2);
      psi.eqs.push_back(p);
    }
    psi.ineq = shape(rng) == 0 ? Polynomial(1) : random_poly(rng, vars, 2, 2);
    if (psi.ineq.is_zero()) psi.ineq = Polynomial(1);
    Formula star = fiber_dim0_formula(psi, "z");
    Formula cofinite = fiber_cofinite_formula(psi, "z");
    ++formulas;
    for (int s = 0; s < 4; ++s) {
      std::map<std::string, Rational> at{{"a", random_rational(rng, 3)}};
      std::vector<Polynomial> eqs_at;
      for (const auto& p : psi.eqs) eqs_at.push_back(p.evaluate(at));
      Polynomial q_at = psi.ineq.evaluate(at);
      // Is there u in k with every P_i(u, a, Z) zero and Q(u, a, Z) nonzero?
      std::vector<Polynomial> g = z_coefficients(eqs_at);
      bool some_u = false;
      for (const auto& d : z_coefficients({q_at})) {
        if (oracle::exists_root_not_root(g, d)) some_u = true;
      }
      bool star_holds =
          decide_pair_sentence(substitute(star, to_sigma(at)), ctx);
      bool cofinite_holds =
          decide_pair_sentence(substitute(cofinite, to_sigma(at)), ctx);
      std::string where = print(to_formula(psi)) + " at a = " + at["a"].get_str();
      ++samples;
      out.require(star_holds == !some_u, "psi* vs extraction: " + where);
      out.require(cofinite_holds == some_u, "cofinite vs extraction: " + where);
      small_cases += star_holds;
      if (!cofinite_holds) continue;
      ++cofinite_cases;
      for (const auto& r : grid) {
        std::map<std::string, Rational> at_u = at;
        at_u["u"] = r;
        bool all_zero = true;
        for (const auto& p : psi.eqs) all_zero = all_zero && p.evaluate(at_u).is_zero();
        Polynomial qu = psi.ineq.evaluate(at_u);
        if (!all_zero || qu.is_zero()) continue;
        ++witnessed;
        unsigned missing = oracle::distinct_root_count(qu, "z");
        out.require(missing <= qu.degree_in("z"), "complement bound: " + where);
        break;
      }
    }
  }
  out.require(formulas >= 50, "fewer than 50 formulas");
  out.require(small_cases > 0 && witnessed > 0, "a branch was never exercised");
  out.detail << formulas << " formulas, " << samples << " parameter samples, "
             << small_cases << " small, " << cofinite_cases << " cofinite ("
             << witnessed << " with a rational witness)";
}

// ---------------------------------------------------------------------------
// 6. Almost-internality bound.

void witness_bound(Outcome& out) {
  std::mt19937 rng(606);
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_int_distribution<int> small_int(-3, 3);
  EngineContext ctx;
  ctx.transcendentals = {"t"};
  const auto grid = rational_grid();
  int pairs = 0;
  int samples = 0;
  int rejected = 0;
  for (int i = 0; i < 100 && pairs < 60; ++i) {
    Polynomial p = random_poly(rng, {"z", "x1", "y1"}, 3, 4);
    if (p.degree_in("z") == 0) p += P("z");
    Polynomial a = coin(rng) ? Polynomial(random_rational(rng, 3))
                             : P("t") + Polynomial(small_int(rng));
    InternalityWitness w;
    try {
      w = almost_internal_witness(p, {"x1"}, "z", {{"y1", a}}, ctx);
    } catch (const Error&) {
      ++rejected;  // P(x, a, Z) has no Z
      continue;
    }
    ++pairs;
    const unsigned deg_z = p.degree_in("z");
    out.require(w.bound <= deg_z, "bound exceeds degree: " + p.to_string());
    for (int s = 0; s < 20; ++s) {
      Rational u = grid[std::uniform_int_distribution<std::size_t>(
          0, grid.size() - 1)(rng)];
      Polynomial pu = p.substitute({{"x1", Polynomial(u)}, {"y1", a}});
      ++samples;
      if (pu.is_zero()) continue;  // R(u) is empty
      unsigned roots = oracle::distinct_root_count(pu, "z");
      out.require(roots <= deg_z && roots <= w.bound,
                  "roots of " + pu.to_string() + " exceed the bound");
    }
  }
  out.require(pairs >= 50, "fewer than 50 pairs");
  out.detail << pairs << " (P, a) pairs, " << samples << " u samples, "
             << rejected << " rejected without Z";
}

// ---------------------------------------------------------------------------
// 7. Pregeometry of linear spans.

unsigned gauss_rank(std::vector<std::vector<long>> rows, long p) {
  unsigned rank = 0;
  if (rows.empty()) return 0;
  for (auto& r : rows) {
    for (auto& x : r) x = ((x % p) + p) % p;
  }
  for (std::size_t c = 0; c < rows[0].size(); ++c) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    long inv = 1;
    while (rows[rank][c] * inv % p != 1) ++inv;
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      long f = rows[r][c] * inv % p;
      for (std::size_t j = c; j < rows[r].size(); ++j) {
        rows[r][j] = ((rows[r][j] - f * rows[rank][j]) % p + p) % p;
      }
    }
    ++rank;
  }
  return rank;
}

std::vector<std::vector<long>> all_vectors(std::size_t dim, long p, bool zero) {
  std::vector<std::vector<long>> out;
  std::vector<long> v(dim, 0);
  if (zero) out.push_back(v);
  for (;;) {
    std::size_t i = 0;
    while (i < dim && ++v[i] == p) v[i++] = 0;
    if (i == dim) break;
    out.push_back(v);
  }
  return out;
}

void pregeometry(Outcome& out) {
  int instances = 0;
  long queries = 0;
  auto check = [&](const std::vector<std::vector<long>>& vs, long p) {
    pregeo::FiniteClosureSystem sys = pregeo::linear_instance(vs, p);
    ++instances;
    out.require(pregeo::check_axioms(sys).all_pass(), "axioms failed");
    std::vector<unsigned> expected(std::size_t(1) << vs.size());
    for (pregeo::Subset b = 0; b <= sys.ground(); ++b) {
      std::vector<std::vector<long>> rows;
      for (auto i : pregeo::members(b)) rows.push_back(vs[i]);
      expected[b] = gauss_rank(rows, p);
      ++queries;
      out.require(pregeo::rank(sys, 0, b) == expected[b], "rank mismatch");
    }
    // Relative rank rk(B|A) = rk(B) - rk(A) for A inside B.
    for (pregeo::Subset b = 0; b <= sys.ground(); b += 7) {
      for (pregeo::Subset a = b;; a = (a - 1) & b) {
        ++queries;
        out.require(pregeo::rank(sys, a, b) == expected[b] - expected[a],
                    "relative rank mismatch");
        if (a == 0) break;
      }
    }
  };
  // Every set of nonzero vectors of F_2^3 (7 points) and F_3^2 (8 points).
  for (auto [dim, p] : {std::pair<std::size_t, long>{3, 2}, {2, 3}}) {
    auto pool = all_vectors(dim, p, false);
    for (pregeo::Subset pick = 1; pick < (pregeo::Subset(1) << pool.size());
         ++pick) {
      std::vector<std::vector<long>> vs;
      for (auto i : pregeo::members(pick)) vs.push_back(pool[i]);
      check(vs, p);
    }
  }
  // Random 8-point lists with repeats and zero over F_2^4 and F_3^3.
  std::mt19937 rng(707);
  for (auto [dim, p] : {std::pair<std::size_t, long>{4, 2}, {3, 3}}) {
    auto pool = all_vectors(dim, p, true);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    for (int trial = 0; trial < 40; ++trial) {
      std::vector<std::vector<long>> vs;
      for (int j = 0; j < 8; ++j) vs.push_back(pool[pick(rng)]);
      check(vs, p);
    }
  }
  out.detail << instances << " instances, " << queries << " rank queries";
}

// ---------------------------------------------------------------------------
// 8. Normal forms against the sampling oracle.

std::vector<std::string> field_free(const Formula& f, const EngineContext& ctx) {
  std::vector<std::string> out;
  for (const auto& v : free_vars(f)) {
    if (!ctx.is_transcendental(v)) out.push_back(v);
  }
  return out;
}

void corpus_preservation(Outcome& out) {
  auto corpus = load_corpus();
  std::size_t assignments = 0;
  std::size_t disagreements = 0;
  std::uint32_t seed = 800;
  for (const auto& text : corpus) {
    ParsedFormula parsed = parse(text);
    EngineContext ctx;
    ctx.transcendentals = parsed.transcendentals;
    PairNormalForm nf = normalize(parsed.formula, ctx);
    auto points = oracle::generate_assignments(field_free(parsed.formula, ctx),
                                               100, ctx, seed++);
    oracle::SampleReport r =
        oracle::sample_check(to_formula(nf), parsed.formula, points, ctx);
    out.require(r.total == 100, "assignment count: " + text);
    assignments += r.total;
    disagreements += r.disagreements.size();
    out.require(r.disagreements.empty(), "disagreement: " + text);
  }
  out.require(corpus.size() >= 40, "corpus has fewer than 40 formulas");
  out.detail << corpus.size() << " formulas, " << assignments
             << " assignments, " << disagreements << " disagreements";
}

// ---------------------------------------------------------------------------
// 9. Determinism and round trip.

struct Run {
  int code;
  std::string out;
};

Run in_process(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"pairdim"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str()};
}

#ifdef PAIRDIM_CLI
std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return out + "'";
}

std::optional<Run> subprocess(const std::vector<std::string>& args) {
  std::string command = shell_quote(PAIRDIM_CLI);
  for (const auto& a : args) command += " " + shell_quote(a);
  command += " 2>/dev/null";
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return std::nullopt;
  std::string text;
  char buffer[4096];
  std::size_t n;
  while ((n = fread(buffer, 1, sizeof buffer, pipe)) > 0) text.append(buffer, n);
  int status = pclose(pipe);
  return Run{WIFEXITED(status) ? WEXITSTATUS(status) : -1, text};
}
#endif

void determinism(Outcome& out) {
  auto corpus = load_corpus();
  int certificates = 0;
  int external = 0;
  int round_trips = 0;
  for (const auto& text : corpus) {
    ParsedFormula parsed = parse(text);
    EngineContext ctx;
    ctx.transcendentals = parsed.transcendentals;
    std::vector<std::vector<std::string>> commands{
        {"parse", text}, {"normalize", text}, {"check", text}, {"dim", text}};
    if (field_free(parsed.formula, ctx).size() == 1) {
      commands.push_back({"dichotomy", text});
    }
    for (const auto& args : commands) {
      Run a = in_process(args);
      Run b = in_process(args);
      ++certificates;
      out.require(a.code == b.code && a.out == b.out,
                  "repeat differs: " + args[0] + " " + text);
#ifdef PAIRDIM_CLI
      if (args[0] == "normalize" || args[0] == "dim") {
        auto c = subprocess(args);
        ++external;
        out.require(c && c->code == a.code && c->out == a.out,
                    "subprocess differs: " + args[0] + " " + text);
      }
#endif
    }
    std::string printed = print_with_header(parsed.formula, parsed.transcendentals);
    ParsedFormula again = parse(printed);
    ++round_trips;
    out.require(print_with_header(again.formula, again.transcendentals) == printed &&
                    again.transcendentals == parsed.transcendentals &&
                    alpha_equivalent(again.formula, parsed.formula),
                "round trip: " + text);
  }
  out.detail << certificates << " certificates repeated, " << external
             << " compared with the executable, " << round_trips
             << " parse/print round trips";
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<void(Outcome&)> run;
  };
  const std::vector<Criterion> criteria{
      {1, "QE agrees with the gcd oracle", qe_oracle},
      {2, "anchor dimensions of K^n and k^n", anchors},
      {3, "dichotomy totality", dichotomy_totality},
      {4, "dimension laws", dimension_laws},
      {5, "small-fiber formula soundness", psi_star},
      {6, "almost-internality witness bound", witness_bound},
      {7, "pregeometry of linear spans", pregeometry},
      {8, "normal forms preserve semantics", corpus_preservation},
      {9, "determinism and round trip", determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome out;
    auto start = std::chrono::steady_clock::now();
    try {
      c.run(out);
    } catch (const std::exception& e) {
      out.fail(std::string("exception: ") + e.what());
    }
    double seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    std::cout << (out.pass ? "[PASS] " : "[FAIL] ") << c.id << ". " << c.name
              << ": " << out.detail.str() << " (" << std::fixed
              << std::setprecision(1) << seconds << "s)\n";
    for (const auto& f : out.failures) std::cout << "       " << f << "\n";
    failed += !out.pass;
  }
  std::cout << (failed == 0 ? "all criteria pass" : "some criteria fail")
            << " (" << criteria.size() - failed << "/" << criteria.size()
            << ")\n";
  return failed == 0 ? 0 : 1;
}
