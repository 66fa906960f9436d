#include "pairdim/pregeo.hpp"

#include <map>

#include "pairdim/error.hpp"

namespace pairdim::pregeo {

FiniteClosureSystem::FiniteClosureSystem(
    std::vector<std::string> labels,
    const std::function<Subset(Subset)>& closure, std::size_t max_ground)
    : labels_(std::move(labels)) {
  if (labels_.empty()) {
    throw Error(ErrorKind::InvalidArgument, "ground set is empty");
  }
  if (labels_.size() > max_ground) {
    throw Error(ErrorKind::TooLarge,
                "ground set has " + std::to_string(labels_.size()) +
                    " points; exhaustive checks allow at most " +
                    std::to_string(max_ground));
  }
  Subset full = ground();
  table_.resize(std::size_t(1) << labels_.size());
  for (Subset a = 0; a <= full; ++a) {
    Subset c = closure(a);
    if (c & ~full) {
      throw Error(ErrorKind::InvalidArgument,
                  "closure leaves the ground set");
    }
    table_[a] = c;
  }
}

bool FiniteClosureSystem::is_pregeometry() const {
  if (!pregeometry_) pregeometry_ = check_axioms(*this).all_pass();
  return *pregeometry_;
}

bool AxiomReport::all_pass() const {
  return extensive.pass && monotone.pass && idempotent.pass &&
         finite_character.pass && exchange.pass;
}

namespace {

AxiomResult failure(AxiomWitness w) { return AxiomResult{false, w}; }

}  // namespace

AxiomReport check_axioms(const FiniteClosureSystem& sys) {
  AxiomReport r;
  const Subset full = sys.ground();
  const std::size_t n = sys.size();
  for (Subset a = 0; a <= full; ++a) {
    Subset ca = sys.closure(a);
    if (r.extensive.pass && (a & ~ca)) {
      r.extensive = failure(AxiomWitness{a, ca, {}, {}});
    }
    if (r.idempotent.pass && sys.closure(ca) != ca) {
      r.idempotent = failure(AxiomWitness{a, ca, {}, {}});
    }
    for (std::size_t x = 0; x < n; ++x) {
      if (sys.contains(a, x)) continue;
      Subset ax = a | (Subset(1) << x);
      Subset cax = sys.closure(ax);
      // Single-point steps suffice: inclusions are chains of them.
      if (r.monotone.pass && (ca & ~cax)) {
        r.monotone = failure(AxiomWitness{a, ax, x, {}});
      }
      if (!r.exchange.pass) continue;
      for (std::size_t y = 0; y < n; ++y) {
        if (y == x || !sys.contains(cax, y) || sys.contains(ca, y)) continue;
        Subset ay = a | (Subset(1) << y);
        if (!sys.contains(sys.closure(ay), x)) {
          r.exchange = failure(AxiomWitness{a, ay, x, y});
          break;
        }
      }
    }
  }
  // Every subset of a finite carrier is finite, so finite character holds.
  r.finite_character.pass = true;
  return r;
}

namespace {

void require_pregeometry(const FiniteClosureSystem& sys, Subset a, Subset b) {
  if ((a & ~b) || (b & ~sys.ground())) {
    throw Error(ErrorKind::InvalidArgument,
                "rank query needs A within B within the ground set");
  }
  if (!sys.is_pregeometry()) {
    throw Error(ErrorKind::NotPregeometry,
                "closure operator fails the pregeometry axioms");
  }
}

std::vector<std::size_t> greedy(const FiniteClosureSystem& sys, Subset a,
                                Subset b,
                                const std::vector<std::size_t>& order) {
  std::vector<std::size_t> added;
  Subset cur = a;
  for (std::size_t x : order) {
    if (!sys.contains(b, x) || sys.contains(sys.closure(cur), x)) continue;
    cur |= Subset(1) << x;
    added.push_back(x);
  }
  return added;
}

std::vector<std::size_t> index_order(std::size_t n) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  return order;
}

}  // namespace

unsigned rank(const FiniteClosureSystem& sys, Subset a, Subset b) {
  return rank(sys, a, b, index_order(sys.size()));
}

unsigned rank(const FiniteClosureSystem& sys, Subset a, Subset b,
              const std::vector<std::size_t>& order) {
  require_pregeometry(sys, a, b);
  return static_cast<unsigned>(greedy(sys, a, b, order).size());
}

std::vector<std::size_t> greedy_basis(const FiniteClosureSystem& sys, Subset a,
                                      Subset b) {
  require_pregeometry(sys, a, b);
  return greedy(sys, a, b, index_order(sys.size()));
}

// ---------------------------------------------------------------------------
// Instances

namespace {

bool is_prime(unsigned long p) {
  if (p < 2) return false;
  for (unsigned long d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

unsigned long inverse_mod(unsigned long a, unsigned long p) {
  unsigned long r = 1;
  unsigned long e = p - 2;
  a %= p;
  while (e > 0) {
    if (e & 1U) r = r * a % p;
    a = a * a % p;
    e >>= 1U;
  }
  return r;
}

// Row-reduced basis of the span of some rows mod p.
class Span {
 public:
  Span(std::size_t dim, unsigned long p) : dim_(dim), p_(p) {}

  // Reduces v against the basis; true if it becomes zero.
  bool reduce(std::vector<unsigned long>& v) const {
    for (const auto& [pivot, row] : rows_) {
      unsigned long f = v[pivot];
      if (f == 0) continue;
      for (std::size_t j = 0; j < dim_; ++j) {
        v[j] = (v[j] + (p_ - f) * row[j]) % p_;
      }
    }
    for (unsigned long x : v) {
      if (x != 0) return false;
    }
    return true;
  }

  void add(std::vector<unsigned long> v) {
    if (reduce(v)) return;
    std::size_t pivot = 0;
    while (v[pivot] == 0) ++pivot;
    unsigned long inv = inverse_mod(v[pivot], p_);
    for (auto& x : v) x = x * inv % p_;
    for (auto& [q, row] : rows_) {
      unsigned long f = row[pivot];
      if (f == 0) continue;
      for (std::size_t j = 0; j < dim_; ++j) {
        row[j] = (row[j] + (p_ - f) * v[j]) % p_;
      }
    }
    rows_.emplace(pivot, std::move(v));
  }

 private:
  std::size_t dim_;
  unsigned long p_;
  std::map<std::size_t, std::vector<unsigned long>> rows_;
};

}  // namespace

FiniteClosureSystem linear_instance(
    const std::vector<std::vector<long>>& vectors, unsigned long prime) {
  if (!is_prime(prime)) {
    throw Error(ErrorKind::InvalidArgument,
                "modulus " + std::to_string(prime) + " is not prime");
  }
  if (vectors.empty()) {
    throw Error(ErrorKind::InvalidArgument, "ground set is empty");
  }
  const std::size_t dim = vectors[0].size();
  std::vector<std::vector<unsigned long>> reduced;
  std::vector<std::string> labels;
  for (const auto& v : vectors) {
    if (v.size() != dim) {
      throw Error(ErrorKind::DimensionMismatch,
                  "vectors of length " + std::to_string(dim) + " and " +
                      std::to_string(v.size()));
    }
    std::vector<unsigned long> r;
    std::string label = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
      long m = v[i] % static_cast<long>(prime);
      if (m < 0) m += static_cast<long>(prime);
      r.push_back(static_cast<unsigned long>(m));
      label += (i > 0 ? "," : "") + std::to_string(m);
    }
    reduced.push_back(std::move(r));
    labels.push_back(label + ")");
  }
  auto closure = [&](Subset a) {
    Span span(dim, prime);
    for (std::size_t i = 0; i < reduced.size(); ++i) {
      if ((a >> i) & 1U) span.add(reduced[i]);
    }
    Subset out = 0;
    for (std::size_t i = 0; i < reduced.size(); ++i) {
      std::vector<unsigned long> v = reduced[i];
      if (span.reduce(v)) out |= Subset(1) << i;
    }
    return out;
  };
  return FiniteClosureSystem(std::move(labels), closure);
}

FiniteClosureSystem identity_instance(std::size_t n) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  return FiniteClosureSystem(std::move(labels), [](Subset a) { return a; });
}

FiniteClosureSystem explicit_instance(
    std::vector<std::string> labels,
    const std::vector<std::pair<Subset, Subset>>& table) {
  std::map<Subset, Subset> lookup;
  for (const auto& [from, to] : table) {
    auto [it, fresh] = lookup.emplace(from, to);
    if (!fresh && it->second != to) {
      throw Error(ErrorKind::InvalidArgument,
                  "closure table lists a subset twice with different values");
    }
  }
  return FiniteClosureSystem(std::move(labels), [&](Subset a) {
    auto it = lookup.find(a);
    return it == lookup.end() ? a : it->second;
  });
}

std::vector<std::size_t> members(Subset s) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; s != 0; ++i, s >>= 1U) {
    if (s & 1U) out.push_back(i);
  }
  return out;
}

std::string format_subset(const FiniteClosureSystem& sys, Subset s) {
  std::string out = "{";
  bool first = true;
  for (std::size_t i : members(s)) {
    if (!first) out += ", ";
    out += sys.labels()[i];
    first = false;
  }
  return out + "}";
}

}  // namespace pairdim::pregeo
