#include "pairdim/poly.hpp"

#include <algorithm>
#include <sstream>

#include "pairdim/error.hpp"

namespace pairdim {

// ---------------------------------------------------------------------------
// Monomial

Monomial::Monomial(std::vector<Factor> factors) {
  std::sort(factors.begin(), factors.end(),
            [](const Factor& a, const Factor& b) { return a.first > b.first; });
  for (auto& f : factors) {
    if (f.second == 0) continue;
    if (!factors_.empty() && factors_.back().first == f.first) {
      factors_.back().second += f.second;
    } else {
      factors_.push_back(std::move(f));
    }
  }
}

Monomial Monomial::variable(const std::string& name, unsigned exponent) {
  if (exponent == 0) return Monomial();
  return Monomial({{name, exponent}});
}

unsigned Monomial::total_degree() const {
  unsigned d = 0;
  for (const auto& f : factors_) d += f.second;
  return d;
}

unsigned Monomial::degree_in(std::string_view var) const {
  for (const auto& f : factors_) {
    if (f.first == var) return f.second;
  }
  return 0;
}

Monomial Monomial::without(std::string_view var) const {
  Monomial m;
  for (const auto& f : factors_) {
    if (f.first != var) m.factors_.push_back(f);
  }
  return m;
}

bool Monomial::divides(const Monomial& other) const {
  for (const auto& f : factors_) {
    if (other.degree_in(f.first) < f.second) return false;
  }
  return true;
}

Monomial Monomial::quotient_of(const Monomial& other) const {
  std::vector<Factor> out;
  for (const auto& f : other.factors_) {
    unsigned e = f.second - degree_in(f.first);
    if (e > 0) out.emplace_back(f.first, e);
  }
  Monomial m;
  m.factors_ = std::move(out);
  return m;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial m;
  auto i = a.factors_.begin();
  auto j = b.factors_.begin();
  while (i != a.factors_.end() || j != b.factors_.end()) {
    if (j == b.factors_.end() ||
        (i != a.factors_.end() && i->first > j->first)) {
      m.factors_.push_back(*i++);
    } else if (i == a.factors_.end() || j->first > i->first) {
      m.factors_.push_back(*j++);
    } else {
      m.factors_.emplace_back(i->first, i->second + j->second);
      ++i;
      ++j;
    }
  }
  return m;
}

int compare_monomials(const Monomial& a, const Monomial& b) {
  unsigned da = a.total_degree();
  unsigned db = b.total_degree();
  if (da != db) return da > db ? 1 : -1;
  const auto& fa = a.factors();
  const auto& fb = b.factors();
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < fa.size() && j < fb.size()) {
    if (fa[i].first == fb[j].first) {
      if (fa[i].second != fb[j].second) {
        return fa[i].second > fb[j].second ? 1 : -1;
      }
      ++i;
      ++j;
    } else {
      return fa[i].first > fb[j].first ? 1 : -1;
    }
  }
  if (i < fa.size()) return 1;
  if (j < fb.size()) return -1;
  return 0;
}

// ---------------------------------------------------------------------------
// Polynomial

Polynomial::Polynomial(long constant) {
  if (constant != 0) terms_.emplace(Monomial(), Rational(constant));
}

Polynomial::Polynomial(const Rational& constant) {
  if (constant != 0) terms_.emplace(Monomial(), constant);
}

Polynomial::Polynomial(Terms terms) {
  for (auto& [m, c] : terms) {
    if (c != 0) terms_.emplace(m, c);
  }
}

Polynomial Polynomial::variable(const std::string& name) {
  return monomial(Monomial::variable(name), Rational(1));
}

Polynomial Polynomial::monomial(const Monomial& m, const Rational& c) {
  Polynomial p;
  if (c != 0) p.terms_.emplace(m, c);
  return p;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

bool Polynomial::is_constant() const {
  return terms_.empty() ||
         (terms_.size() == 1 && terms_.begin()->first.is_one());
}

Rational Polynomial::constant_term() const {
  auto it = terms_.find(Monomial());
  return it == terms_.end() ? Rational(0) : it->second;
}

const Monomial& Polynomial::leading_monomial() const {
  if (terms_.empty()) {
    throw Error(ErrorKind::ZeroPolynomial, "leading term of zero polynomial");
  }
  return terms_.begin()->first;
}

const Rational& Polynomial::leading_rational() const {
  if (terms_.empty()) {
    throw Error(ErrorKind::ZeroPolynomial, "leading term of zero polynomial");
  }
  return terms_.begin()->second;
}

unsigned Polynomial::total_degree() const {
  return terms_.empty() ? 0 : terms_.begin()->first.total_degree();
}

unsigned Polynomial::degree_in(std::string_view var) const {
  unsigned d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.degree_in(var));
  return d;
}

bool Polynomial::contains(std::string_view var) const {
  for (const auto& [m, c] : terms_) {
    if (m.degree_in(var) > 0) return true;
  }
  return false;
}

std::set<std::string> Polynomial::variables() const {
  std::set<std::string> out;
  for (const auto& [m, c] : terms_) {
    for (const auto& f : m.factors()) out.insert(f.first);
  }
  return out;
}

Polynomial Polynomial::leading_coefficient(const std::string& var) const {
  unsigned d = degree_in(var);
  Polynomial out;
  for (const auto& [m, c] : terms_) {
    if (m.degree_in(var) == d) out.add_term(m.without(var), c);
  }
  return out;
}

Polynomial Polynomial::reductum(const std::string& var) const {
  unsigned d = degree_in(var);
  Polynomial out;
  for (const auto& [m, c] : terms_) {
    if (m.degree_in(var) != d) out.add_term(m, c);
  }
  return out;
}

Polynomial Polynomial::pow(unsigned exponent) const {
  Polynomial result(1);
  Polynomial base = *this;
  while (exponent > 0) {
    if (exponent & 1U) result = result * base;
    exponent >>= 1U;
    if (exponent > 0) base = base * base;
  }
  return result;
}

Polynomial Polynomial::scaled(const Rational& factor) const {
  Polynomial out;
  if (factor == 0) return out;
  for (const auto& [m, c] : terms_) out.terms_.emplace(m, c * factor);
  return out;
}

Polynomial Polynomial::evaluate(
    const std::map<std::string, Rational>& assignment) const {
  Polynomial out;
  for (const auto& [m, c] : terms_) {
    Rational coeff = c;
    std::vector<Monomial::Factor> rest;
    for (const auto& f : m.factors()) {
      auto it = assignment.find(f.first);
      if (it == assignment.end()) {
        rest.push_back(f);
      } else {
        Rational v;
        mpz_class num;
        mpz_class den;
        mpz_pow_ui(num.get_mpz_t(), it->second.get_num_mpz_t(), f.second);
        mpz_pow_ui(den.get_mpz_t(), it->second.get_den_mpz_t(), f.second);
        v = Rational(num, den);
        v.canonicalize();
        coeff *= v;
      }
    }
    out.add_term(Monomial(std::move(rest)), coeff);
  }
  return out;
}

Polynomial Polynomial::substitute(
    const std::map<std::string, Polynomial>& sigma) const {
  Polynomial out;
  for (const auto& [m, c] : terms_) {
    Polynomial term = Polynomial(c);
    std::vector<Monomial::Factor> rest;
    for (const auto& f : m.factors()) {
      auto it = sigma.find(f.first);
      if (it == sigma.end()) {
        rest.push_back(f);
      } else {
        term = term * it->second.pow(f.second);
      }
    }
    term = term * monomial(Monomial(std::move(rest)), Rational(1));
    out += term;
  }
  return out;
}

namespace {

unsigned long residue(const Rational& c, unsigned long p) {
  mpz_class modulus(p);
  mpz_class num = c.get_num() % modulus;
  if (num < 0) num += modulus;
  mpz_class den = c.get_den() % modulus;
  if (den == 0) {
    throw Error(ErrorKind::InvalidArgument,
                "coefficient denominator vanishes modulo " + std::to_string(p));
  }
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), modulus.get_mpz_t());
  mpz_class r = (num * inv) % modulus;
  return r.get_ui();
}

}  // namespace

Polynomial Polynomial::reduce(Characteristic characteristic) const {
  if (characteristic.is_zero()) return *this;
  unsigned long p = characteristic.value();
  Polynomial out;
  for (const auto& [m, c] : terms_) {
    unsigned long r = residue(c, p);
    if (r != 0) out.terms_.emplace(m, Rational(r));
  }
  return out;
}

Polynomial Polynomial::canonical(Characteristic characteristic) const {
  if (characteristic.is_zero()) {
    if (terms_.empty()) return *this;
    mpz_class den_lcm = 1;
    mpz_class num_gcd = 0;
    for (const auto& [m, c] : terms_) {
      mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(),
              c.get_den_mpz_t());
      mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num_mpz_t());
    }
    Rational factor(den_lcm, num_gcd);
    factor.canonicalize();
    if (leading_rational() < 0) factor = -factor;
    return scaled(factor);
  }
  Polynomial r = reduce(characteristic);
  if (r.is_zero()) return r;
  unsigned long p = characteristic.value();
  mpz_class lc = r.leading_rational().get_num();
  mpz_class inv;
  mpz_class modulus(p);
  mpz_invert(inv.get_mpz_t(), lc.get_mpz_t(), modulus.get_mpz_t());
  return r.scaled(Rational(inv)).reduce(characteristic);
}

bool Polynomial::is_integral() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const auto& t) { return t.second.get_den() == 1; });
}

std::string rational_to_string(const Rational& r) { return r.get_str(); }

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Rational mag = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    bool unit = (mag == 1);
    if (m.is_one()) {
      os << rational_to_string(mag);
      continue;
    }
    if (!unit) os << rational_to_string(mag) << "*";
    // Factors print in ascending name order.
    const auto& fs = m.factors();
    for (auto it = fs.rbegin(); it != fs.rend(); ++it) {
      if (it != fs.rbegin()) os << "*";
      os << it->first;
      if (it->second > 1) os << "^" << it->second;
    }
  }
  return os.str();
}

Polynomial Polynomial::operator-() const {
  Polynomial out;
  for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
  return out;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  Polynomial out = a;
  for (const auto& [m, c] : b.terms_) out.add_term(m, c);
  return out;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  Polynomial out = a;
  for (const auto& [m, c] : b.terms_) out.add_term(m, -c);
  return out;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial out;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) out.add_term(ma * mb, ca * cb);
  }
  return out;
}

bool operator==(const Polynomial& a, const Polynomial& b) {
  return a.terms_ == b.terms_;
}

std::strong_ordering operator<=>(const Polynomial& a, const Polynomial& b) {
  auto i = a.terms_.begin();
  auto j = b.terms_.begin();
  for (; i != a.terms_.end() && j != b.terms_.end(); ++i, ++j) {
    int cm = compare_monomials(i->first, j->first);
    if (cm != 0) return cm > 0 ? std::strong_ordering::greater
                               : std::strong_ordering::less;
    int cc = cmp(i->second, j->second);
    if (cc != 0) return cc > 0 ? std::strong_ordering::greater
                               : std::strong_ordering::less;
  }
  if (i != a.terms_.end()) return std::strong_ordering::greater;
  if (j != b.terms_.end()) return std::strong_ordering::less;
  return std::strong_ordering::equal;
}

// ---------------------------------------------------------------------------
// Operations

Polynomial arith(const Polynomial& p, const Polynomial& q, ArithOp op) {
  switch (op) {
    case ArithOp::Add:
      return p + q;
    case ArithOp::Sub:
      return p - q;
    case ArithOp::Mul:
      return p * q;
  }
  return {};
}

std::vector<Polynomial> coeffs_in(const Polynomial& p, const std::string& var) {
  if (p.is_zero()) return {};
  std::vector<Polynomial> out(p.degree_in(var) + 1);
  for (const auto& [m, c] : p.terms()) {
    out[m.degree_in(var)] += Polynomial::monomial(m.without(var), c);
  }
  return out;
}

std::optional<Polynomial> exact_divide(const Polynomial& p,
                                       const Polynomial& q) {
  if (q.is_zero()) {
    throw Error(ErrorKind::ZeroPolynomial, "division by the zero polynomial");
  }
  Polynomial rest = p;
  Polynomial quotient;
  const Monomial& lm = q.leading_monomial();
  const Rational& lc = q.leading_rational();
  while (!rest.is_zero()) {
    const Monomial& rm = rest.leading_monomial();
    if (!lm.divides(rm)) return std::nullopt;
    Polynomial t = Polynomial::monomial(lm.quotient_of(rm),
                                        rest.leading_rational() / lc);
    quotient += t;
    rest -= t * q;
  }
  return quotient;
}

Polynomial resultant(const Polynomial& p, const Polynomial& q,
                     const std::string& var) {
  unsigned m = p.degree_in(var);
  unsigned n = q.degree_in(var);
  if (m == 0 || n == 0) {
    throw Error(ErrorKind::ZeroDegree,
                "resultant needs positive degree in " + var);
  }
  std::vector<Polynomial> cp = coeffs_in(p, var);
  std::vector<Polynomial> cq = coeffs_in(q, var);
  const unsigned size = m + n;
  std::vector<std::vector<Polynomial>> rows(size,
                                            std::vector<Polynomial>(size));
  // The m shifted rows of q come first, then the n shifted rows of p.
  for (unsigned r = 0; r < m; ++r) {
    for (unsigned j = 0; j <= n; ++j) rows[r][r + j] = cq[n - j];
  }
  for (unsigned r = 0; r < n; ++r) {
    for (unsigned j = 0; j <= m; ++j) rows[m + r][r + j] = cp[m - j];
  }
  // Bareiss fraction-free elimination.
  Polynomial prev(1);
  bool negate = false;
  for (unsigned k = 0; k + 1 < size; ++k) {
    if (rows[k][k].is_zero()) {
      unsigned swap_with = k + 1;
      while (swap_with < size && rows[swap_with][k].is_zero()) ++swap_with;
      if (swap_with == size) return Polynomial();
      std::swap(rows[k], rows[swap_with]);
      negate = !negate;
    }
    for (unsigned i = k + 1; i < size; ++i) {
      for (unsigned j = k + 1; j < size; ++j) {
        Polynomial num = rows[i][j] * rows[k][k] - rows[i][k] * rows[k][j];
        auto quotient = exact_divide(num, prev);
        if (!quotient) {
          throw Error(ErrorKind::InternalInconsistency,
                      "Bareiss step is not exact");
        }
        rows[i][j] = std::move(*quotient);
      }
      rows[i][k] = Polynomial();
    }
    prev = rows[k][k];
  }
  Polynomial det = rows[size - 1][size - 1];
  return negate ? -det : det;
}

PseudoDivision pseudo_divide(const Polynomial& p, const Polynomial& q,
                             const std::string& var) {
  unsigned dq = q.degree_in(var);
  if (q.is_zero() || dq == 0) {
    throw Error(ErrorKind::ZeroDegree,
                "pseudo-division needs a divisor of positive degree in " + var);
  }
  Polynomial lc = q.leading_coefficient(var);
  PseudoDivision out;
  out.remainder = p;
  Polynomial xvar = Polynomial::variable(var);
  if (lc.is_constant()) {
    Rational inv = 1 / lc.constant_term();
    while (!out.remainder.is_zero() && out.remainder.degree_in(var) >= dq) {
      unsigned dr = out.remainder.degree_in(var);
      Polynomial t = out.remainder.leading_coefficient(var).scaled(inv) *
                     xvar.pow(dr - dq);
      out.quotient += t;
      out.remainder -= t * q;
    }
    return out;
  }
  while (!out.remainder.is_zero() && out.remainder.degree_in(var) >= dq) {
    unsigned dr = out.remainder.degree_in(var);
    Polynomial t = out.remainder.leading_coefficient(var) * xvar.pow(dr - dq);
    out.remainder = lc * out.remainder - t * q;
    out.quotient = lc * out.quotient + t;
    ++out.power;
  }
  return out;
}

namespace {

void require_univariate(const Polynomial& p, const std::string& var) {
  for (const auto& v : p.variables()) {
    if (v != var) {
      throw Error(ErrorKind::NotUnivariate,
                  "polynomial " + p.to_string() + " mentions " + v +
                      " besides " + var);
    }
  }
}

Polynomial monic(const Polynomial& p) {
  if (p.is_zero()) return p;
  return p.scaled(1 / p.leading_rational());
}

}  // namespace

Polynomial gcd_univariate(const Polynomial& p, const Polynomial& q,
                          const std::string& var) {
  require_univariate(p, var);
  require_univariate(q, var);
  Polynomial a = p;
  Polynomial b = q;
  while (!b.is_zero()) {
    Polynomial r = a;
    unsigned db = b.degree_in(var);
    Polynomial xvar = Polynomial::variable(var);
    while (!r.is_zero() && r.degree_in(var) >= db) {
      Polynomial t = Polynomial(r.leading_rational() / b.leading_rational()) *
                     xvar.pow(r.degree_in(var) - db);
      r -= t * b;
    }
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a);
}

}  // namespace pairdim
