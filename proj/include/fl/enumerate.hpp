#pragma once

// Exhaustive enumeration of small automata satisfying the EF or AF
// equations, used by the invariant suites and the conjecture harness.

#include <vector>

#include "fl/automaton.hpp"

namespace fl {

// All semilattice tables (commutative idempotent monoids) on n states
// with the unit normalized to state 0, up to isomorphism (permutations
// fixing the unit).  Returned as full plus tables.
std::vector<std::vector<std::vector<int>>> enumerate_semilattice_tables(int n);

enum class LetterLaws {
    EF,  // a(ax) = ax and ax <= x
    AF,  // a(ax) = ax, positivity, p <= ap on the core, a.0 = a.bottom,
         // and p <= q <= ap implies ap = aq on the core
};

// Connected automata over `alphabet` with 1..max_states states passing the
// requested equation set, up to isomorphism.  Deterministic order.
std::vector<ForestAutomaton> enumerate_equation_automata(int max_states,
                                                         const Alphabet& alphabet,
                                                         LetterLaws laws);

}  // namespace fl
