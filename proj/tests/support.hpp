#pragma once

#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "pairdim/formula.hpp"
#include "pairdim/poly.hpp"

namespace pairdim::testing {

inline Polynomial P(const std::string& text) { return parse_polynomial(text); }

inline Formula F(const std::string& text) { return parse(text).formula; }

// Random polynomial in `vars` with small integer coefficients.
inline Polynomial random_poly(std::mt19937& rng,
                              const std::vector<std::string>& vars,
                              unsigned max_degree, unsigned max_terms,
                              int coeff_bound = 3) {
  std::uniform_int_distribution<int> coeff(-coeff_bound, coeff_bound);
  std::uniform_int_distribution<unsigned> deg(0, max_degree);
  std::uniform_int_distribution<unsigned> nterms(1, max_terms);
  Polynomial p;
  unsigned n = nterms(rng);
  for (unsigned i = 0; i < n; ++i) {
    std::vector<Monomial::Factor> fs;
    unsigned budget = deg(rng);
    for (const auto& v : vars) {
      if (budget == 0) break;
      std::uniform_int_distribution<unsigned> e(0, budget);
      unsigned k = e(rng);
      budget -= k;
      if (k > 0) fs.emplace_back(v, k);
    }
    p += Polynomial::monomial(Monomial(fs), Rational(coeff(rng)));
  }
  return p;
}

inline Rational random_rational(std::mt19937& rng, int bound = 5) {
  std::uniform_int_distribution<int> num(-bound, bound);
  std::uniform_int_distribution<int> den(1, 3);
  Rational r(num(rng), den(rng));
  r.canonicalize();
  return r;
}

// Formulas of the fixture corpus, one per non-comment line.
inline std::vector<std::string> load_corpus() {
  std::ifstream in(std::string(PAIRDIM_FIXTURES) + "/corpus.txt");
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '%') continue;
    out.push_back(line);
  }
  return out;
}

}  // namespace pairdim::testing
