#pragma once

// Forest automata: finite monoids (Q,+,0) equipped with a total letter
// action Sigma x Q -> Q.  A forest evaluates bottom-up: the empty forest to
// 0, a tree a(s) to a . s^A, and a concatenation to the monoid sum of its
// trees' values.  A language is an automaton plus a set of final states.
//
// Also here: the line-oriented text format shared by the CLI and fixtures,
// congruences/quotients, direct and Moore products, powerset automata,
// minimization and isomorphism testing.

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fl/forest.hpp"

namespace fl {

// Raised when tables fail the monoid axioms or shape checks.
class AutomatonError : public std::runtime_error {
public:
    explicit AutomatonError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when an enumeration guard (congruence lattice, decompose input
// size) is exceeded.
class SizeGuardError : public std::runtime_error {
public:
    explicit SizeGuardError(const std::string& what) : std::runtime_error(what) {}
};

class ForestAutomaton;
using AutomatonPtr = std::shared_ptr<const ForestAutomaton>;

class ForestAutomaton {
public:
    // Validates shapes and the monoid axioms eagerly; throws AutomatonError
    // naming the first violated axiom with a witnessing triple.
    // State names must be nonempty, whitespace-free and pairwise distinct.
    ForestAutomaton(std::string name, Alphabet alphabet, std::vector<std::string> state_names,
                    int zero, std::vector<std::vector<int>> plus,
                    std::vector<std::vector<int>> action);

    const std::string& name() const { return name_; }
    const Alphabet& alphabet() const { return alphabet_; }
    int num_states() const { return static_cast<int>(state_names_.size()); }
    int zero() const { return zero_; }
    const std::string& state_name(int q) const { return state_names_.at(q); }
    const std::vector<std::string>& state_names() const { return state_names_; }
    std::optional<int> state_index(std::string_view name) const;

    int plus(int p, int q) const { return plus_[p][q]; }
    int action(int letter, int q) const { return action_[letter][q]; }

    // Monoid sum of a list of states, folded left-to-right from 0.
    int sum(const std::vector<int>& states) const;

    // True iff alphabets, zero and both tables coincide (state names may
    // differ); weaker than equality, stronger than isomorphism.
    bool same_tables(const ForestAutomaton& other) const;

private:
    std::string name_;
    Alphabet alphabet_;
    std::vector<std::string> state_names_;
    int zero_;
    std::vector<std::vector<int>> plus_;    // plus_[p][q]
    std::vector<std::vector<int>> action_;  // action_[letter][q]
};

// An automaton together with final states: the language it recognizes.
struct RecognizedLanguage {
    AutomatonPtr automaton;
    std::vector<int> finals;  // sorted, duplicate-free state indices

    RecognizedLanguage() = default;
    RecognizedLanguage(AutomatonPtr a, std::vector<int> f);
    bool is_final(int q) const;
};

// --- Evaluation ---------------------------------------------------------

int evaluate(const ForestAutomaton& a, const Forest& forest);
int evaluate(const ForestAutomaton& a, const Tree& tree);
bool member(const RecognizedLanguage& lang, const Forest& forest);

// --- Congruences ---------------------------------------------------------

// A partition of an automaton's states, stored as a normalized class map:
// class ids are assigned 0,1,... in order of each class's least state.
class Congruence {
public:
    Congruence() = default;
    // Normalizes an arbitrary class map (values need not be contiguous).
    explicit Congruence(const std::vector<int>& class_of);

    int num_states() const { return static_cast<int>(class_of_.size()); }
    int num_classes() const { return num_classes_; }
    int class_of(int q) const { return class_of_.at(q); }
    const std::vector<int>& class_map() const { return class_of_; }
    // Classes in id order; members ascending.
    std::vector<std::vector<int>> blocks() const;

    bool is_identity() const { return num_classes_ == num_states(); }
    bool is_total() const { return num_classes_ == 1; }

    // Refinement order: true iff every block of *this is contained in a
    // block of `coarser`.
    bool refines(const Congruence& coarser) const;
    // Meet in the partition lattice (intersection of the relations).
    Congruence meet(const Congruence& other) const;

    bool operator==(const Congruence& other) const { return class_of_ == other.class_of_; }
    bool operator<(const Congruence& other) const { return class_of_ < other.class_of_; }

private:
    std::vector<int> class_of_;
    int num_classes_ = 0;
};

// True iff the partition is compatible with both tables: p ~ q implies
// p+r ~ q+r, r+p ~ r+q and a.p ~ a.q for all r, a.
bool is_congruence(const ForestAutomaton& a, const Congruence& theta);

// Least congruence merging the given state pairs (union-find plus a
// translation-closure worklist).
Congruence congruence_from_pairs(const ForestAutomaton& a,
                                 const std::vector<std::pair<int, int>>& pairs);

// All congruences of `a`.  Throws SizeGuardError when num_states exceeds
// `max_states` (the lattice can be exponential).  Result is sorted by
// (num_classes descending, class map) so identity comes first and the total
// congruence last; always contains both.
std::vector<Congruence> enumerate_congruences(const ForestAutomaton& a, int max_states = 10);

// --- Constructions -------------------------------------------------------

// Smallest subautomaton: the closure of {0} under + and all letter actions.
// State order is inherited from `a`.
ForestAutomaton connected_part(const ForestAutomaton& a);
RecognizedLanguage connected_part(const RecognizedLanguage& lang);

// Letter renaming: same carrier; the new action of target letter d is the
// action of h(d).  `h` maps each target letter index to a letter of `a`.
ForestAutomaton rename(const ForestAutomaton& a, const Alphabet& target, const std::vector<int>& h);

// Componentwise product over a shared alphabet.  State (q1,...,qk) has
// index in mixed radix with the first factor most significant, and name
// "(n1|...|nk)".
ForestAutomaton direct_product(const std::vector<AutomatonPtr>& factors);
ForestAutomaton direct_product(const ForestAutomaton& a, const ForestAutomaton& b);

// A control function for moore_product: a total table
// control[letter of A][state of A] -> letter of B.
struct ControlFunction {
    std::vector<std::vector<int>> table;
};

// Moore product A x_alpha B over Sigma_A: carrier Q_A x Q_B with
// componentwise + and 0, and a.(p,q) = (a.p, alpha(a, a.p).q) -- the
// control sees the updated left state.  State (p,q) has index
// p*|Q_B| + q and name "(np|nq)".
ForestAutomaton moore_product(const ForestAutomaton& a, const ForestAutomaton& b,
                              const ControlFunction& alpha);

// Quotient by a congruence (validated).  Block k keeps the name of its
// least member when singleton and "{n1,n2,...}" otherwise.
ForestAutomaton quotient(const ForestAutomaton& a, const Congruence& theta);

// Checks that `map` (state of a -> state of b) is a monoid-and-action
// homomorphism: map[0_a] = 0_b, map[p+q] = map[p]+map[q],
// map[a.q] = a.map[q].  Alphabets must coincide.
bool is_homomorphism(const ForestAutomaton& a, const ForestAutomaton& b,
                     const std::vector<int>& map);

// Subautomaton induced by a subset of states; the subset must contain 0 and
// be closed under + and actions (checked).  Order inherited from `a`.
ForestAutomaton subautomaton(const ForestAutomaton& a, const std::vector<int>& states);

// All state subsets that induce subautomata, each sorted ascending; the
// list is ordered lexicographically.  Guarded like enumerate_congruences.
std::vector<std::vector<int>> enumerate_subautomata(const ForestAutomaton& a, int max_states = 12);

// The powerset automaton over a set H of symbols: carrier = all subsets of
// H (subset S has index = bitmask over H, name "{h1,h2,...}"), union as +,
// empty set as 0, and h.S = {h} union S.
ForestAutomaton build_powerset_automaton(const Alphabet& h);

// One-state automaton over `alphabet`.
ForestAutomaton trivial_automaton(const Alphabet& alphabet, const std::string& name = "trivial");

// --- Minimization and isomorphism ---------------------------------------

// Connected part followed by the coarsest final-set-saturating congruence
// (partition refinement with two-sided sum splitters).  The result
// recognizes the same language with the least number of states.
RecognizedLanguage minimize(const RecognizedLanguage& lang);

// Isomorphism over a shared alphabet (letters map identically): a bijection
// of states preserving zero and both tables.  Returns the state map a -> b,
// or nullopt.  Throws AutomatonError if the alphabets differ.
std::optional<std::vector<int>> is_isomorphic(const ForestAutomaton& a, const ForestAutomaton& b);
// Additionally requires finals to map onto finals.
std::optional<std::vector<int>> is_isomorphic(const RecognizedLanguage& a,
                                              const RecognizedLanguage& b);

// --- Text format ---------------------------------------------------------
//
//   automaton <name>
//   alphabet: <sym> ...
//   states: <q> ...
//   zero: <q>
//   plus: <q> <q> -> <q>          (one line per state pair, all required)
//   action: <sym> <q> -> <q>      (one line per letter/state, all required)
//   finals: <q> ...               (optional; may list zero states)
//
// '#' starts a comment; blank lines are ignored.  The loader rejects
// missing, duplicate or unknown entries and validates the monoid axioms.

struct AutomatonFile {
    AutomatonPtr automaton;
    std::optional<std::vector<int>> finals;  // present iff a finals: line was
};

AutomatonFile parse_automaton_text(std::string_view text);
std::string render_automaton_text(const ForestAutomaton& a,
                                  const std::optional<std::vector<int>>& finals = std::nullopt);

// Control table text: one "<sym> <state> -> <target-sym>" line per
// letter/state of `a`, comments and blanks as above.
ControlFunction parse_control_text(std::string_view text, const ForestAutomaton& a,
                                   const Alphabet& target);
std::string render_control_text(const ControlFunction& alpha, const ForestAutomaton& a,
                                const Alphabet& target);

}  // namespace fl
