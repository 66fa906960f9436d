#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

// Closure operators on finite carriers, where every axiom can be checked by
// enumerating subsets.
namespace pairdim::pregeo {

// Subsets of the ground set as bitmasks; bit i is point i.
using Subset = std::uint32_t;

constexpr std::size_t kMaxGround = 12;

class FiniteClosureSystem {
 public:
  // Tabulates `closure` on every subset. Throws TooLarge past
  // `max_ground` points and InvalidArgument for an empty ground set or a
  // closure leaving the ground set.
  FiniteClosureSystem(std::vector<std::string> labels,
                      const std::function<Subset(Subset)>& closure,
                      std::size_t max_ground = kMaxGround);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  Subset ground() const { return (Subset(1) << size()) - 1; }
  Subset closure(Subset a) const { return table_.at(a); }
  bool contains(Subset a, std::size_t point) const {
    return (a >> point) & 1U;
  }
  // check_axioms(*this).all_pass(), computed once.
  bool is_pregeometry() const;

 private:
  std::vector<std::string> labels_;
  std::vector<Subset> table_;
  mutable std::optional<bool> pregeometry_;
};

// A counterexample: the subsets and points involved, by role.
struct AxiomWitness {
  Subset set = 0;
  Subset other = 0;
  std::optional<std::size_t> a;
  std::optional<std::size_t> b;
};

struct AxiomResult {
  bool pass = true;
  std::optional<AxiomWitness> witness;
};

struct AxiomReport {
  AxiomResult extensive;
  AxiomResult monotone;
  AxiomResult idempotent;
  AxiomResult finite_character;
  AxiomResult exchange;

  bool all_pass() const;
};

AxiomReport check_axioms(const FiniteClosureSystem& sys);

// rk(B|A): greedy extension of A by the points of B outside the current
// closure, in index order or in `order`. Throws NotPregeometry unless the
// axioms hold and InvalidArgument unless A is a subset of B.
unsigned rank(const FiniteClosureSystem& sys, Subset a, Subset b);
unsigned rank(const FiniteClosureSystem& sys, Subset a, Subset b,
              const std::vector<std::size_t>& order);
// The points added by the greedy pass.
std::vector<std::size_t> greedy_basis(const FiniteClosureSystem& sys, Subset a,
                                      Subset b);

// Points are coordinate tuples over F_p; the closure of A is its linear
// span intersected with the ground set. Throws DimensionMismatch for
// tuples of different lengths and InvalidArgument for a non-prime modulus.
FiniteClosureSystem linear_instance(
    const std::vector<std::vector<long>>& vectors, unsigned long prime);

FiniteClosureSystem identity_instance(std::size_t n);

// Closure given by a table; subsets without an entry close to themselves.
FiniteClosureSystem explicit_instance(
    std::vector<std::string> labels,
    const std::vector<std::pair<Subset, Subset>>& table);

std::vector<std::size_t> members(Subset s);
std::string format_subset(const FiniteClosureSystem& sys, Subset s);

}  // namespace pairdim::pregeo
