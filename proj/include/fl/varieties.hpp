#pragma once

// Equational property checks, the decision procedure for definability in
// the EF fragment (with constructive certificates following the inductive
// decomposition), and the necessary conditions for the AF fragment
// including ladder congruences.
//
// Throughout, the semilattice order is x <= y iff x = x+y; the bottom
// element is the sum of all states and the additive unit is the top.

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fl/automaton.hpp"
#include "fl/certificate.hpp"

namespace fl {

// Precondition violations and internal inconsistencies (a property the
// decomposition relies on failed its runtime re-check).
class VarietyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class EquationId {
    SEMILATTICE,        // x+y = y+x and x+x = x
    LETTER_IDEMPOTENT,  // a(ax) = ax
    EF_DECREASING,      // ax <= x
    POSITIVE,           // only the empty forest evaluates to the unit
    CORE_INCREASING,    // p <= ap on the core (nonunit states)
    ZERO_ACTION,        // a.0 = a.bottom
    CORE_IMPLICATION,   // p <= q <= ap implies ap = aq (p, q in the core)
};

const std::vector<EquationId>& all_equations();
const std::vector<EquationId>& ef_equations();  // the three EF conditions
const std::vector<EquationId>& af_equations();  // the six AF conditions

std::string equation_name(EquationId id);
std::optional<EquationId> equation_from_name(std::string_view name);

struct EquationVerdict {
    EquationId id = EquationId::SEMILATTICE;
    enum class Status { Pass, Fail, NotApplicable } status = Status::Pass;
    // key=value witness tokens naming concrete letters/states, re-checkable
    // against the tables; empty for passes.
    std::string witness;
};

struct EquationReport {
    bool used_connected_part = false;  // input was cut down to its connected part
    bool trivial = false;              // the connected part has one state
    std::vector<EquationVerdict> verdicts;

    bool all_pass() const;
    const EquationVerdict* find(EquationId id) const;
};

// Checks the requested equations on the connected part of `a`.  Requesting
// a CORE_* equation on a non-positive automaton adds a POSITIVE failure and
// marks the CORE_* verdicts not-applicable.
EquationReport check_equations(const ForestAutomaton& a, const std::vector<EquationId>& which);

// Line-oriented records: "EQUATION <name> <PASS|FAIL|NOT_APPLICABLE> [witness...]".
std::string render_equation_report(const EquationReport& report);

struct EfDecision {
    bool definable = false;
    RecognizedLanguage minimal;  // the minimized input, on which equations ran
    EquationReport report;
};

// A language is EF-definable iff its minimal automaton passes SEMILATTICE,
// LETTER_IDEMPOTENT and EF_DECREASING.
EfDecision decide_ef_definable(const RecognizedLanguage& lang);

// All minimal nonbottom elements of a connected semilattice automaton with
// at least two states (bottom = sum of all states).
std::vector<int> semilattice_atoms(const ForestAutomaton& a);

// The partition merging {bottom, p} for an atom p, singletons elsewhere.
// Throws VarietyError (internal inconsistency) if it fails the congruence
// re-check, which would contradict the decomposition argument.
Congruence atom_congruence(const ForestAutomaton& a, int p);

// Two nontrivial congruences meeting in the identity, least pair in
// enumeration order, if any.
std::optional<std::pair<Congruence, Congruence>> is_subdirectly_reducible(
    const ForestAutomaton& a, int max_states = 10);

// Constructive membership certificate for a connected automaton passing
// the three EF equations.  The result is verified before being returned;
// a verification failure is reported as an internal inconsistency.
CertificatePtr decompose_ef(const ForestAutomaton& a);

// The automaton tracking the set of states visited during evaluation:
// carrier = all subsets of a's states (bitmask indices), union as +, empty
// set as 0, and action a.H = H + {a . sum(H)}.  Size-guarded.
ForestAutomaton visited_set_automaton(const ForestAutomaton& a);

struct LadderEntry {
    Congruence theta;
    bool ladder = false;
    std::string violation;  // the violated clause, for non-ladders
};

struct LadderReport {
    std::vector<LadderEntry> entries;  // every congruence except the identity
};

// Classifies every non-identity congruence of `a`: a ladder congruence has
// only classes of size <= 2, and for every two-element class C = {p < q}
// and letter a, either p is not in the image of a, or every class D != C
// with a.D inside C maps as: singleton {r} with ar = p, or D = {r < s}
// with ar = p and as = q.
LadderReport find_ladder_congruences(const ForestAutomaton& a, int max_states = 10);

// The full conjunction of the AF necessary conditions on the connected
// part: SEMILATTICE, LETTER_IDEMPOTENT, POSITIVE, CORE_INCREASING,
// ZERO_ACTION, CORE_IMPLICATION.
EquationReport check_af_necessary(const ForestAutomaton& a);

}  // namespace fl
