#include <cctype>
#include <optional>
#include <set>

#include "pairdim/error.hpp"
#include "pairdim/formula.hpp"

namespace pairdim {

namespace {

enum class Tok {
  Ident,
  Int,
  Plus,
  Minus,
  Star,
  Caret,
  Eq,
  Neq,
  Tilde,
  Amp,
  Bar,
  Arrow,
  LParen,
  RParen,
  Dot,
  Comma,
  Hash,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (std::isalpha(c) || c == '_') {
      while (i < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) {
        ++i;
      }
      out.push_back({Tok::Ident, s.substr(start, i - start), start});
      continue;
    }
    if (std::isdigit(c)) {
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
        ++i;
      }
      out.push_back({Tok::Int, s.substr(start, i - start), start});
      continue;
    }
    auto two = s.substr(i, 2);
    if (two == "!=") {
      out.push_back({Tok::Neq, two, start});
      i += 2;
      continue;
    }
    if (two == "->") {
      out.push_back({Tok::Arrow, two, start});
      i += 2;
      continue;
    }
    Tok kind;
    switch (c) {
      case '+': kind = Tok::Plus; break;
      case '-': kind = Tok::Minus; break;
      case '*': kind = Tok::Star; break;
      case '^': kind = Tok::Caret; break;
      case '=': kind = Tok::Eq; break;
      case '~': kind = Tok::Tilde; break;
      case '&': kind = Tok::Amp; break;
      case '|': kind = Tok::Bar; break;
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      case '.': kind = Tok::Dot; break;
      case ',': kind = Tok::Comma; break;
      case '#': kind = Tok::Hash; break;
      default:
        throw SyntaxError(start, std::string("unexpected character '") +
                                     s[i] + "'");
    }
    out.push_back({kind, std::string(1, s[i]), start});
    ++i;
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

const std::set<std::string>& keywords() {
  static const std::set<std::string> k{"exists", "forall", "in", "U"};
  return k;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(tokenize(text)) {}

  ParsedFormula parse_document() {
    ParsedFormula out;
    if (peek().kind == Tok::Hash) {
      advance();
      const Token& kw = expect(Tok::Ident, "'trans' after '#'");
      if (kw.text != "trans") throw SyntaxError(kw.pos, "unknown directive #" + kw.text);
      for (;;) {
        std::string name = identifier("transcendental constant name");
        for (const auto& t : out.transcendentals) {
          if (t == name) {
            throw SyntaxError(prev().pos, "constant " + name + " declared twice");
          }
        }
        out.transcendentals.push_back(name);
        if (peek().kind == Tok::Comma) {
          advance();
          continue;
        }
        expect(Tok::Dot, "'.' ending the #trans directive");
        break;
      }
    }
    constants_.insert(out.transcendentals.begin(), out.transcendentals.end());
    out.formula = parse_formula();
    expect(Tok::End, "end of input");
    return out;
  }

  Polynomial parse_polynomial_document() {
    Polynomial p = parse_term();
    expect(Tok::End, "end of input");
    return p;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& prev() const { return toks_[pos_ - 1]; }
  const Token& advance() { return toks_[pos_++]; }

  const Token& expect(Tok kind, const std::string& what) {
    if (peek().kind != kind) {
      throw SyntaxError(peek().pos, "expected " + what + describe_found());
    }
    return advance();
  }

  std::string describe_found() const {
    if (peek().kind == Tok::End) return ", found end of input";
    return ", found '" + peek().text + "'";
  }

  bool at_keyword(const char* kw) const {
    return peek().kind == Tok::Ident && peek().text == kw;
  }

  std::string identifier(const std::string& what) {
    const Token& t = expect(Tok::Ident, what);
    if (keywords().count(t.text)) {
      throw SyntaxError(t.pos, "keyword '" + t.text + "' used as " + what);
    }
    return t.text;
  }

  // implication := disjunction ('->' implication)?
  Formula parse_formula() {
    Formula lhs = parse_disjunction();
    if (peek().kind == Tok::Arrow) {
      advance();
      Formula rhs = parse_formula();
      return Formula::disjunction({Formula::negation(lhs), rhs});
    }
    return lhs;
  }

  Formula parse_disjunction() {
    std::vector<Formula> parts{parse_conjunction()};
    while (peek().kind == Tok::Bar) {
      advance();
      parts.push_back(parse_conjunction());
    }
    return Formula::disjunction(std::move(parts));
  }

  Formula parse_conjunction() {
    std::vector<Formula> parts{parse_unary()};
    while (peek().kind == Tok::Amp) {
      advance();
      parts.push_back(parse_unary());
    }
    return Formula::conjunction(std::move(parts));
  }

  Formula parse_unary() {
    if (peek().kind == Tok::Tilde) {
      advance();
      return Formula::negation(parse_unary());
    }
    if (at_keyword("exists") || at_keyword("forall")) return parse_quantifier();
    return parse_primary();
  }

  Formula parse_quantifier() {
    bool existential = advance().text == "exists";
    std::vector<std::string> names;
    for (;;) {
      std::string name = identifier("bound variable");
      if (constants_.count(name)) {
        throw SyntaxError(prev().pos, "cannot bind declared constant " + name);
      }
      names.push_back(name);
      if (peek().kind != Tok::Comma) break;
      advance();
    }
    Sort sort = Sort::Field;
    if (at_keyword("in")) {
      advance();
      const Token& u = expect(Tok::Ident, "'U' after 'in'");
      if (u.text != "U") throw SyntaxError(u.pos, "expected 'U' after 'in'");
      sort = Sort::Small;
    }
    expect(Tok::Dot, "'.' after quantifier prefix");
    Formula body = parse_formula();
    for (auto it = names.rbegin(); it != names.rend(); ++it) {
      Var v{*it, sort};
      body = existential ? Formula::exists(v, body) : Formula::forall(v, body);
    }
    return body;
  }

  Formula parse_primary() {
    if (at_keyword("U")) {
      advance();
      expect(Tok::LParen, "'(' after U");
      std::size_t arg_pos = peek().pos;
      Polynomial arg = parse_term();
      expect(Tok::RParen, "')' closing U(...)");
      auto vs = arg.variables();
      if (vs.size() != 1 || arg != Polynomial::variable(*vs.begin())) {
        throw Error(ErrorKind::Sort,
                    "U applies to variables only, got U(" + arg.to_string() +
                        ") at position " + std::to_string(arg_pos));
      }
      return Formula::in_u(*vs.begin());
    }
    if (peek().kind == Tok::LParen) {
      // Either a parenthesized formula or a comparison whose left term starts
      // with '('. Try the comparison first.
      std::size_t saved = pos_;
      try {
        return parse_comparison();
      } catch (const SyntaxError&) {
        pos_ = saved;
      }
      advance();
      Formula inner = parse_formula();
      expect(Tok::RParen, "')'");
      return inner;
    }
    return parse_comparison();
  }

  Formula parse_comparison() {
    Polynomial lhs = parse_term();
    AtomKind kind;
    if (peek().kind == Tok::Eq) {
      kind = AtomKind::Eq;
    } else if (peek().kind == Tok::Neq) {
      kind = AtomKind::Neq;
    } else {
      throw SyntaxError(peek().pos, "expected '=' or '!='" + describe_found());
    }
    advance();
    Polynomial rhs = parse_term();
    return Formula::atom(Atom{kind, lhs - rhs, {}});
  }

  Polynomial parse_term() {
    Polynomial acc;
    bool negate = false;
    if (peek().kind == Tok::Minus) {
      advance();
      negate = true;
    } else if (peek().kind == Tok::Plus) {
      advance();
    }
    acc = parse_product();
    if (negate) acc = -acc;
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      bool minus = advance().kind == Tok::Minus;
      Polynomial rhs = parse_product();
      acc = minus ? acc - rhs : acc + rhs;
    }
    return acc;
  }

  Polynomial parse_product() {
    Polynomial acc = parse_power();
    while (peek().kind == Tok::Star) {
      advance();
      acc = acc * parse_power();
    }
    return acc;
  }

  Polynomial parse_power() {
    Polynomial base = parse_atom_term();
    if (peek().kind == Tok::Caret) {
      advance();
      const Token& e = expect(Tok::Int, "integer exponent");
      if (e.text.size() > 6) throw SyntaxError(e.pos, "exponent too large");
      base = base.pow(static_cast<unsigned>(std::stoul(e.text)));
    }
    return base;
  }

  Polynomial parse_atom_term() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Int: {
        advance();
        return Polynomial(Rational(mpz_class(t.text)));
      }
      case Tok::Ident: {
        if (keywords().count(t.text)) {
          throw SyntaxError(t.pos, "unexpected keyword '" + t.text + "'");
        }
        advance();
        return Polynomial::variable(t.text);
      }
      case Tok::LParen: {
        advance();
        Polynomial inner = parse_term();
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::Minus: {
        advance();
        return -parse_power();
      }
      default:
        throw SyntaxError(t.pos, "expected a term" + describe_found());
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::set<std::string> constants_;
};

}  // namespace

ParsedFormula parse(const std::string& text) {
  Parser parser(text);
  ParsedFormula out = parser.parse_document();
  std::set<std::string> reserved(out.transcendentals.begin(),
                                 out.transcendentals.end());
  out.formula = rename_apart(out.formula, reserved);
  return out;
}

Polynomial parse_polynomial(const std::string& text) {
  Parser parser(text);
  return parser.parse_polynomial_document();
}

}  // namespace pairdim
