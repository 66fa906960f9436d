#include <sstream>

#include "pairdim/formula.hpp"

namespace pairdim {

namespace {

// The grammar has no division, so rational coefficients are cleared by a
// positive common denominator before printing.
std::string print_atom(const Atom& a) {
  if (a.kind == AtomKind::InU) return "U(" + a.var + ")";
  Polynomial p = a.poly;
  if (!p.is_integral()) {
    mpz_class den = 1;
    for (const auto& [m, c] : p.terms()) {
      mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
    }
    p = p.scaled(Rational(den));
  }
  return p.to_string() + (a.kind == AtomKind::Eq ? " = 0" : " != 0");
}

void print_rec(const Formula& f, std::ostream& os);

void print_child(const Formula& c, bool parens, std::ostream& os) {
  if (parens) os << "(";
  print_rec(c, os);
  if (parens) os << ")";
}

void print_rec(const Formula& f, std::ostream& os) {
  switch (f.kind()) {
    case Connective::Atom:
      os << print_atom(f.atom());
      return;
    case Connective::Not: {
      const Formula& b = f.body();
      os << "~";
      bool bare = b.is_atom() && b.atom().kind == AtomKind::InU;
      print_child(b, !bare, os);
      return;
    }
    case Connective::And:
    case Connective::Or: {
      bool conj = f.kind() == Connective::And;
      const char* sep = conj ? " & " : " | ";
      bool first = true;
      for (const auto& c : f.children()) {
        if (!first) os << sep;
        first = false;
        bool parens = c.is_quantifier() || (conj && c.kind() == Connective::Or);
        print_child(c, parens, os);
      }
      return;
    }
    case Connective::Exists:
    case Connective::Forall:
      os << (f.kind() == Connective::Exists ? "exists " : "forall ")
         << f.bound().name;
      if (f.bound().sort == Sort::Small) os << " in U";
      os << ". ";
      print_rec(f.body(), os);
      return;
  }
}

}  // namespace

std::string print(const Formula& f) {
  std::ostringstream os;
  print_rec(f, os);
  return os.str();
}

std::string print_with_header(const Formula& f,
                              const std::vector<std::string>& transcendentals) {
  if (transcendentals.empty()) return print(f);
  std::string out = "#trans ";
  for (std::size_t i = 0; i < transcendentals.size(); ++i) {
    if (i > 0) out += ", ";
    out += transcendentals[i];
  }
  return out + ". " + print(f);
}

}  // namespace pairdim
