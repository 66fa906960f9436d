#pragma once

#include <string>
#include <vector>

#include "pairdim/context.hpp"
#include "pairdim/formula.hpp"

namespace pairdim {

// Clauses of a quantifier-free formula equivalent to exists v. (clause) over
// every algebraically closed field of the context's characteristic. The
// clause holds eq/neq literals only.
std::vector<Clause> eliminate_one_clauses(const std::string& v,
                                          const Clause& clause,
                                          const EngineContext& ctx);
Formula eliminate_one(const std::string& v, const Clause& clause,
                      const EngineContext& ctx);

// Quantifier elimination for ring-language formulas. Quantifier-free input
// is returned unchanged.
Formula qe(const Formula& f, const EngineContext& ctx);

// Truth of a ring-language sentence whose only free names are declared
// transcendental constants.
bool decide_sentence(const Formula& f, const EngineContext& ctx);

// Truth of a quantifier-free formula over the transcendentals: an atom is
// zero iff its polynomial vanishes identically in the characteristic.
bool eval_over_transcendentals(const Formula& f, const EngineContext& ctx);

// Canonical atom: scalar-normalized polynomial, constants folded.
Formula canonical_atom(AtomKind kind, const Polynomial& p, Characteristic ch);

// Drops duplicate literals, clauses with contradictory or false literals, and
// clauses subsumed by others. Deterministic output order.
std::vector<Clause> tidy_clauses(std::vector<Clause> clauses,
                                 Characteristic ch);

}  // namespace pairdim
