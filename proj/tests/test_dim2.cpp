#include "doctest.h"
#include "pairdim/dim2.hpp"
#include "pairdim/error.hpp"
#include "pairdim/oracle.hpp"
#include "pairdim/pairnf.hpp"
#include "support.hpp"

using namespace pairdim;
using pairdim::testing::F;
using pairdim::testing::P;

namespace {

EngineContext with_t() {
  EngineContext ctx;
  ctx.transcendentals = {"t"};
  return ctx;
}

bool holds_at(const Formula& f, const std::map<std::string, Polynomial>& at,
              const EngineContext& ctx) {
  return decide_pair_sentence(substitute(f, at), ctx);
}

int dim_of(const std::string& text, const std::vector<std::string>& vars) {
  ParsedFormula parsed = parse(text);
  EngineContext ctx;
  ctx.transcendentals = parsed.transcendentals;
  return dim(normalize(parsed.formula, ctx), vars, ctx).dimension;
}

Label label_of(const std::string& text) {
  ParsedFormula parsed = parse(text);
  EngineContext ctx;
  ctx.transcendentals = parsed.transcendentals;
  return dichotomy(normalize(parsed.formula, ctx), "z", ctx).label;
}

VerySpecialFormula vs(std::vector<std::string> us, std::vector<std::string> eqs,
                      const std::string& ineq = "1") {
  VerySpecialFormula v;
  v.u_vars = std::move(us);
  for (const auto& e : eqs) v.eqs.push_back(P(e));
  v.ineq = P(ineq);
  return v;
}

}  // namespace

TEST_CASE("dimension arithmetic") {
  CHECK(dim_add(1, kNegInf) == kNegInf);
  CHECK(dim_add(kNegInf, 0) == kNegInf);
  CHECK(dim_add(2, 1) == 3);
  CHECK(dim_max(kNegInf, 0) == 0);
  CHECK(dim_to_string(kNegInf) == "neg_inf");
  CHECK(dim_to_string(2) == "2");
}

TEST_CASE("decide_pair_sentence examples") {
  EngineContext ctx = with_t();
  CHECK_FALSE(decide_pair_sentence(F("#trans t. exists u in U. u*t = 1"), ctx));
  CHECK(decide_pair_sentence(F("exists u in U. u^2 = 2"), ctx));
  CHECK_FALSE(decide_pair_sentence(F("#trans t. exists u in U. u = t"), ctx));
  CHECK(decide_pair_sentence(F("#trans t. exists w. exists u in U. w = u + t"),
                             ctx));
  CHECK(decide_pair_sentence(F("#trans t. ~U(t)"), ctx));
  CHECK_THROWS_AS(decide_pair_sentence(F("U(z)"), ctx), Error);
}

TEST_CASE("fiber_dim0_formula examples") {
  EngineContext ctx;
  Formula graph = fiber_dim0_formula(vs({"u"}, {"z - u*y"}), "z");
  CHECK(holds_at(graph, {{"y", Polynomial(1)}}, ctx));
  CHECK(holds_at(graph, {{"y", Polynomial(0)}}, ctx));

  Formula all = fiber_dim0_formula(vs({"u"}, {"u"}, "z*u + 1"), "z");
  CHECK_FALSE(decide_pair_sentence(all, ctx));

  Formula point = fiber_dim0_formula(vs({}, {"z"}), "z");
  CHECK(decide_pair_sentence(point, ctx));
}

TEST_CASE("fiber_cofinite_formula examples") {
  EngineContext ctx;
  CHECK(decide_pair_sentence(
      fiber_cofinite_formula(vs({"u"}, {"u"}, "z*u + 1"), "z"), ctx));
  CHECK_FALSE(decide_pair_sentence(
      fiber_cofinite_formula(vs({"u"}, {"z - u"}), "z"), ctx));
  CHECK(decide_pair_sentence(
      fiber_cofinite_formula(vs({"u"}, {"u*z"}, "z - 1"), "z"), ctx));
}

TEST_CASE("fiber_nonempty_formula examples") {
  EngineContext ctx;
  CHECK(is_truth(fiber_nonempty_formula(vs({"u"}, {"z - u"}), "z", ctx)));
  CHECK(is_falsity(fiber_nonempty_formula(vs({}, {"1"}), "z", ctx)));
  Formula inv = fiber_nonempty_formula(vs({"u"}, {"y*z - 1"}), "z", ctx);
  CHECK(print(inv) == "y != 0");
}

TEST_CASE("set_small_formula examples") {
  EngineContext ctx;
  auto small_of = [&](const std::string& text) {
    return decide_pair_sentence(set_small_formula(normalize(F(text), ctx), "z", ctx),
                                ctx);
  };
  CHECK(small_of("U(z)"));
  CHECK_FALSE(small_of("~U(z)"));
  CHECK_FALSE(small_of("exists u in U. u*z = 0 & z != 1"));
  CHECK(small_of("z^2 = 2"));
  CHECK(small_of("1 = 0"));
}

TEST_CASE("dichotomy examples") {
  CHECK(label_of("U(z)") == Label::Small);
  CHECK(label_of("z != 0") == Label::CoSmall);
  CHECK(label_of("exists u in U. z^2 = u") == Label::Small);
  CHECK(label_of("~U(z)") == Label::CoSmall);
  CHECK(label_of("#trans t. exists u in U. z = u + t") == Label::Small);
  CHECK(label_of("#trans t. ~(exists u in U. z = u*t)") == Label::CoSmall);
  CHECK(std::string(to_string(Label::Small)) == "Small");
}

TEST_CASE("dimension of reference sets") {
  for (int n = 1; n <= 3; ++n) {
    std::vector<std::string> all{"y1", "y2", "y3"};
    std::vector<std::string> vars(all.begin(), all.begin() + n);
    CHECK(dim_of("0 = 0", vars) == n);
    std::string small = "U(y1)";
    for (int i = 2; i <= n; ++i) small += " & U(y" + std::to_string(i) + ")";
    CHECK(dim_of(small, vars) == 0);
    CHECK(dim_of("1 = 0", vars) == kNegInf);
  }
  CHECK(dim_of("#trans t. z = t*y", {"y", "z"}) == 1);
  CHECK(dim_of("#trans t. exists u in U. z = u*t", {"z"}) == 0);
  CHECK(dim_of("~U(z)", {"z"}) == 1);
  CHECK(dim_of("U(x) | U(y)", {"x", "y"}) == 1);
  CHECK(dim_of("U(x) & y^2 = x", {"x", "y"}) == 0);
  CHECK(dim_of("x*y = 1", {"x", "y"}) == 1);
  CHECK(dim_of("x = 0 & y = 0", {"x", "y"}) == 0);
  CHECK(dim_of("U(x) & ~U(y)", {"x", "y"}) == 1);
  CHECK(dim_of("exists u in U. x*u = y & ~U(y)", {"x", "y"}) == 1);
  CHECK(dim_of("x^2 = 0 & ~U(x)", {"x"}) == kNegInf);
  CHECK(dim_of("exists u in U. x = u + 1 & ~U(x)", {"x"}) == kNegInf);
  CHECK(dim_of("exists u in U. x = u + 1 & x != 1", {"x"}) == 0);
}

TEST_CASE("dimension certificate records the peeled coordinate") {
  EngineContext ctx = with_t();
  auto cert = dim(normalize(F("#trans t. z = t*y"), ctx), {"y", "z"}, ctx);
  CHECK(cert.method == "fiber");
  CHECK(cert.variable == "z");
  REQUIRE(cert.parts.count("smallNonempty"));
  CHECK(cert.parts.at("smallNonempty").dimension == 1);
  REQUIRE(cert.parts.count("coSmall"));
  CHECK(cert.parts.at("coSmall").dimension == kNegInf);
  REQUIRE(cert.co_small_formula);
  REQUIRE(cert.empty_formula);
}

TEST_CASE("dim rejects variables outside the ambient space") {
  EngineContext ctx;
  CHECK_THROWS_AS(dim(normalize(F("x = y"), ctx), {"x"}, ctx), Error);
}

TEST_CASE("almost_internal_witness examples") {
  EngineContext ctx = with_t();
  auto w = almost_internal_witness(P("z - x1*y1"), {"x1"}, "z",
                                   {{"y1", P("t")}}, ctx);
  CHECK(w.bound == 1);
  CHECK(print(w.relation) == "-t*x1 + z = 0");
  CHECK(print(w.image) == "exists x1 in U. -t*x1 + z = 0");

  auto sq = almost_internal_witness(P("z^2 - x1"), {"x1"}, "z", {}, ctx);
  CHECK(sq.bound == 2);
  CHECK(print(sq.relation) == "z^2 - x1 = 0");

  auto pow = almost_internal_witness(P("z^3"), {}, "z", {}, ctx);
  CHECK(pow.bound == 3);
  CHECK(print(pow.relation) == "z^3 = 0");

  CHECK_THROWS_AS(almost_internal_witness(P("0"), {}, "z", {}, ctx), Error);
  CHECK_THROWS_AS(almost_internal_witness(P("x1"), {"x1"}, "z", {}, ctx),
                  Error);
}

TEST_CASE("witness images have dimension at most zero") {
  EngineContext ctx = with_t();
  for (const auto& text : {"z - x1*y1", "z^2 - x1", "x1*z^2 - y1", "z^3 - x1*z + y1",
                           "x1*z - 1"}) {
    auto w = almost_internal_witness(P(text), {"x1"}, "z", {{"y1", P("t + 1")}},
                                     ctx);
    int d = dim(normalize(w.image, ctx), {"z"}, ctx).dimension;
    CHECK_MESSAGE(d <= 0, text);
  }
}

TEST_CASE("dichotomy agrees with dimension in one variable") {
  EngineContext ctx = with_t();
  for (const auto& text :
       {"U(z)", "~U(z)", "z = t", "exists u in U. z = u + t", "z^2 = t",
        "exists u in U. z*u = 1 & z != 2", "U(z) | z = t", "~U(z) & z != 0"}) {
    PairNormalForm nf = normalize(F(std::string("#trans t. ") + text), ctx);
    Label label = dichotomy(nf, "z", ctx).label;
    int d = dim(nf, {"z"}, ctx).dimension;
    CHECK_MESSAGE((label == Label::Small) == (d <= 0), text);
    Label co = dichotomy(complement(nf, ctx), "z", ctx).label;
    CHECK_MESSAGE(co != label, text);
  }
}
