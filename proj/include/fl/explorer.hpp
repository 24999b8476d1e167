#pragma once

// Bounded enumeration of Moore pseudovariety closures up to isomorphism,
// with replayable derivation traces, plus the experiment harnesses for the
// two AF conjectures.

#include <stdexcept>
#include <string>
#include <vector>

#include "fl/automaton.hpp"
#include "fl/certificate.hpp"
#include "fl/varieties.hpp"

namespace fl {

class ExplorerError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ClosureConfig {
    std::vector<ForestAutomaton> generators;
    int max_states = 4;
    // Renaming targets; when empty, defaults to the generators' alphabets
    // plus the binary alphabet.
    std::vector<Alphabet> target_alphabets;
    int max_rounds = 8;
};

struct ClosureEntry {
    std::string name;       // canonical name, "m<index>"
    AutomatonPtr automaton;
    // Derivation from the generators; build_certificate replays it to an
    // automaton isomorphic to the stored one.  Subautomaton steps appear
    // as Divide nodes (a subautomaton restricts to the same reachable
    // part, so the division pairing certifies it).
    CertificatePtr trace;
};

struct ClosureResult {
    std::vector<ClosureEntry> entries;
    bool saturated = false;  // fixpoint reached within max_rounds
    int rounds = 0;          // rounds actually run
};

// Iterated closure under renamings onto the target alphabets, connected
// parts, subautomata, quotients, and Moore products, seeded with the
// generators and discarding results exceeding max_states (Moore products
// are cut to their connected part before the full table is built).  The
// Moore control space is enumerated exhaustively: |Sigma_B|^(|Sigma_A|*|Q_A|)
// tables per ordered pair, so keep alphabets and bounds small.
// Deterministic: identical configs yield identical results.
ClosureResult closure_explore(const ClosureConfig& cfg);

// True iff some stored entry is isomorphic to `a` (alphabets must match
// for a hit; mismatching entries are skipped).
const ClosureEntry* find_isomorphic(const ClosureResult& result, const ForestAutomaton& a);

// Index lines: "MEMBER <name> states=<n> trace=<name>.cert".
std::string render_closure_index(const ClosureResult& result);

// --- Conjecture harnesses -------------------------------------------------

// Necessity violations are counterexamples to the (proved) propositions and
// are expected to be absent; the sufficiency direction is report-only.
struct ConjectureAViolation {
    std::string member_name;
    AutomatonPtr automaton;
    EquationId equation = EquationId::SEMILATTICE;
    std::string witness;
};

struct ConjectureACandidate {
    std::string name;        // canonical candidate name from the enumeration
    AutomatonPtr automaton;  // connected, passes check_af_necessary
    bool in_closure = false;
    std::string member_name;  // matching closure member when in_closure
};

struct ConjectureAReport {
    int bound = 0;
    ClosureResult closure;  // bounded closure of {AF} over the binary alphabet
    std::vector<ConjectureAViolation> violations;
    std::vector<ConjectureACandidate> candidates;
};

ConjectureAReport conjecture_a_experiment(int bound, int max_rounds = 12);

// Record lines: COUNTEREXAMPLE for necessity violations, then MEMBER or
// INCONCLUSIVE per equation-passing candidate.
std::string render_conjecture_a(const ConjectureAReport& report);

struct ConjectureBEntry {
    std::string name;        // closure member the analysis came from
    AutomatonPtr automaton;  // its connected part (nontrivial)
    bool reducible = false;  // subdirectly reducible
    Congruence monolith;     // least nontrivial congruence (irreducible case)
    bool ladder = false;     // monolith classified as a ladder congruence
    std::string violation;   // ladder clause violated, when not a ladder
    // Search outcome for "A is a quotient of A/Theta x_alpha AF": a control
    // function making the division check pass, when one exists.
    bool alpha_found = false;
    CertificatePtr reconstruction;
    bool counterexample = false;  // neither reducible nor ladder monolith
};

struct ConjectureBReport {
    int bound = 0;
    ClosureResult closure;
    std::vector<ConjectureBEntry> entries;
    bool any_counterexample = false;
};

ConjectureBReport conjecture_b_experiment(int bound, int max_rounds = 12);

std::string render_conjecture_b(const ConjectureBReport& report);

}  // namespace fl
