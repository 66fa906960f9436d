#pragma once

#include <random>
#include <string>
#include <vector>

#include "pairdim/poly.hpp"

namespace pairdim::testing {

// Random formula text over a few field variables, drawn from the fragment
// the normalizer accepts: ring literals, U literals and (negated) small
// existentials with one small variable.
class SetGenerator {
 public:
  SetGenerator(std::uint32_t seed, std::vector<std::string> vars,
               std::vector<std::string> trans = {})
      : rng_(seed), vars_(std::move(vars)), trans_(std::move(trans)) {}

  std::string literal() {
    switch (pick(6)) {
      case 0:
        return ring_poly() + " = 0";
      case 1:
        return ring_poly() + " != 0";
      case 2:
        return "U(" + var() + ")";
      case 3:
        return "~U(" + var() + ")";
      case 4:
        return special();
      default:
        return "~(" + special() + ")";
    }
  }

  std::string clause(int max_literals = 3) {
    int n = 1 + pick(max_literals);
    std::string out;
    for (int i = 0; i < n; ++i) {
      if (i > 0) out += " & ";
      out += literal();
    }
    return out;
  }

  std::string formula(int max_clauses = 2, int max_literals = 3) {
    int n = 1 + pick(max_clauses);
    std::string out;
    for (int i = 0; i < n; ++i) {
      if (i > 0) out += " | ";
      out += "(" + clause(max_literals) + ")";
    }
    return header() + out;
  }

  std::string header() const {
    if (trans_.empty()) return "";
    std::string h = "#trans ";
    for (std::size_t i = 0; i < trans_.size(); ++i) {
      if (i > 0) h += ", ";
      h += trans_[i];
    }
    return h + ". ";
  }

  std::string var() { return vars_[pick(static_cast<int>(vars_.size()))]; }

  std::string constant() {
    static const char* values[] = {"0", "1", "-1", "2", "3"};
    return values[pick(5)];
  }

  std::string scalar() {
    if (!trans_.empty() && pick(3) == 0) {
      return trans_[pick(static_cast<int>(trans_.size()))];
    }
    return constant();
  }

  // Sparse polynomial of degree at most 2 in one or two variables.
  std::string ring_poly() {
    std::string a = var();
    std::string b = var();
    switch (pick(5)) {
      case 0:
        return a + " - " + scalar();
      case 1:
        return a + "*" + b + " - " + constant();
      case 2:
        return a + "^2 - " + scalar();
      case 3:
        return a + " - " + b + " - " + scalar();
      default:
        return a + "^2 + " + b + " + " + constant();
    }
  }

  std::string special() {
    std::string a = var();
    std::string b = var();
    std::string c = scalar();
    std::string body;
    switch (pick(6)) {
      case 0:
        body = a + " = u + " + c;
        break;
      case 1:
        body = a + " = u*" + (c == "0" ? "2" : c);
        break;
      case 2:
        body = a + "^2 = u";
        break;
      case 3:
        body = a + " = u*" + b;
        break;
      case 4:
        body = a + " - " + b + " = u";
        break;
      default:
        body = a + "*u = 1 & " + b + " != u";
        break;
    }
    return "exists u in U. " + body;
  }

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  std::mt19937& rng() { return rng_; }

 private:
  std::mt19937 rng_;
  std::vector<std::string> vars_;
  std::vector<std::string> trans_;
};

}  // namespace pairdim::testing
