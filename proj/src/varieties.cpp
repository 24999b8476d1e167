#include "fl/varieties.hpp"

#include <algorithm>
#include <cctype>
#include <memory>
#include <numeric>
#include <sstream>

#include "fl/fixtures.hpp"

namespace fl {

namespace {

// x <= y in the semilattice order (bottom least, the unit on top).
bool state_leq(const ForestAutomaton& a, int x, int y) {
    return a.plus(x, y) == x;
}

int bottom_state(const ForestAutomaton& a) {
    std::vector<int> all(a.num_states());
    std::iota(all.begin(), all.end(), 0);
    return a.sum(all);
}

std::vector<int> core_states(const ForestAutomaton& a) {
    std::vector<int> core;
    for (int q = 0; q < a.num_states(); ++q) {
        if (q != a.zero()) core.push_back(q);
    }
    return core;
}

// Each checker returns a witness string on failure, nothing on success.

std::optional<std::string> semilattice_witness(const ForestAutomaton& a) {
    const int n = a.num_states();
    for (int x = 0; x < n; ++x) {
        if (a.plus(x, x) != x) return "x=" + a.state_name(x);
    }
    for (int x = 0; x < n; ++x) {
        for (int y = x + 1; y < n; ++y) {
            if (a.plus(x, y) != a.plus(y, x)) {
                return "x=" + a.state_name(x) + " y=" + a.state_name(y);
            }
        }
    }
    return std::nullopt;
}

std::optional<std::string> letter_idempotent_witness(const ForestAutomaton& a) {
    for (int l = 0; l < a.alphabet().size(); ++l) {
        for (int x = 0; x < a.num_states(); ++x) {
            const int ax = a.action(l, x);
            if (a.action(l, ax) != ax) {
                return "a=" + a.alphabet().symbol(l) + " x=" + a.state_name(x);
            }
        }
    }
    return std::nullopt;
}

std::optional<std::string> ef_decreasing_witness(const ForestAutomaton& a) {
    for (int l = 0; l < a.alphabet().size(); ++l) {
        for (int x = 0; x < a.num_states(); ++x) {
            const int ax = a.action(l, x);
            if (a.plus(ax, x) != ax) {
                return "a=" + a.alphabet().symbol(l) + " x=" + a.state_name(x);
            }
        }
    }
    return std::nullopt;
}

std::optional<std::string> positive_witness(const ForestAutomaton& a) {
    for (int l = 0; l < a.alphabet().size(); ++l) {
        for (int q = 0; q < a.num_states(); ++q) {
            if (a.action(l, q) == a.zero()) {
                return "a=" + a.alphabet().symbol(l) + " q=" + a.state_name(q);
            }
        }
    }
    for (int p = 0; p < a.num_states(); ++p) {
        for (int q = 0; q < a.num_states(); ++q) {
            if (p == a.zero() && q == a.zero()) continue;
            if (a.plus(p, q) == a.zero()) {
                return "p=" + a.state_name(p) + " q=" + a.state_name(q);
            }
        }
    }
    return std::nullopt;
}

std::optional<std::string> core_increasing_witness(const ForestAutomaton& a) {
    const std::vector<int> core = core_states(a);
    for (int l = 0; l < a.alphabet().size(); ++l) {
        for (int p : core) {
            if (a.plus(p, a.action(l, p)) != p) {
                return "a=" + a.alphabet().symbol(l) + " p=" + a.state_name(p);
            }
        }
    }
    return std::nullopt;
}

std::optional<std::string> zero_action_witness(const ForestAutomaton& a) {
    const int bot = bottom_state(a);
    for (int l = 0; l < a.alphabet().size(); ++l) {
        if (a.action(l, a.zero()) != a.action(l, bot)) {
            return "a=" + a.alphabet().symbol(l);
        }
    }
    return std::nullopt;
}

std::optional<std::string> core_implication_witness(const ForestAutomaton& a) {
    const std::vector<int> core = core_states(a);
    for (int l = 0; l < a.alphabet().size(); ++l) {
        for (int p : core) {
            const int ap = a.action(l, p);
            for (int q : core) {
                if (!state_leq(a, p, q) || !state_leq(a, q, ap)) continue;
                if (ap != a.action(l, q)) {
                    return "a=" + a.alphabet().symbol(l) + " p=" + a.state_name(p) +
                           " q=" + a.state_name(q);
                }
            }
        }
    }
    return std::nullopt;
}

const char* status_text(EquationVerdict::Status s) {
    switch (s) {
        case EquationVerdict::Status::Pass: return "PASS";
        case EquationVerdict::Status::Fail: return "FAIL";
        case EquationVerdict::Status::NotApplicable: return "NOT_APPLICABLE";
    }
    return "?";
}

std::string braced_names(const ForestAutomaton& a, const std::vector<int>& states) {
    std::string out = "{";
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (i > 0) out += ",";
        out += a.state_name(states[i]);
    }
    out += "}";
    return out;
}

}  // namespace

const std::vector<EquationId>& all_equations() {
    static const std::vector<EquationId> eqs = {
        EquationId::SEMILATTICE,     EquationId::LETTER_IDEMPOTENT,
        EquationId::EF_DECREASING,   EquationId::POSITIVE,
        EquationId::CORE_INCREASING, EquationId::ZERO_ACTION,
        EquationId::CORE_IMPLICATION,
    };
    return eqs;
}

const std::vector<EquationId>& ef_equations() {
    static const std::vector<EquationId> eqs = {
        EquationId::SEMILATTICE,
        EquationId::LETTER_IDEMPOTENT,
        EquationId::EF_DECREASING,
    };
    return eqs;
}

const std::vector<EquationId>& af_equations() {
    static const std::vector<EquationId> eqs = {
        EquationId::SEMILATTICE,     EquationId::LETTER_IDEMPOTENT,
        EquationId::POSITIVE,        EquationId::CORE_INCREASING,
        EquationId::ZERO_ACTION,     EquationId::CORE_IMPLICATION,
    };
    return eqs;
}

std::string equation_name(EquationId id) {
    switch (id) {
        case EquationId::SEMILATTICE: return "SEMILATTICE";
        case EquationId::LETTER_IDEMPOTENT: return "LETTER_IDEMPOTENT";
        case EquationId::EF_DECREASING: return "EF_DECREASING";
        case EquationId::POSITIVE: return "POSITIVE";
        case EquationId::CORE_INCREASING: return "CORE_INCREASING";
        case EquationId::ZERO_ACTION: return "ZERO_ACTION";
        case EquationId::CORE_IMPLICATION: return "CORE_IMPLICATION";
    }
    throw VarietyError("unknown equation id");
}

std::optional<EquationId> equation_from_name(std::string_view name) {
    std::string upper(name);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    for (EquationId id : all_equations()) {
        if (equation_name(id) == upper) return id;
    }
    return std::nullopt;
}

bool EquationReport::all_pass() const {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const EquationVerdict& v) {
        return v.status == EquationVerdict::Status::Pass;
    });
}

const EquationVerdict* EquationReport::find(EquationId id) const {
    for (const EquationVerdict& v : verdicts) {
        if (v.id == id) return &v;
    }
    return nullptr;
}

EquationReport check_equations(const ForestAutomaton& input, const std::vector<EquationId>& which) {
    const ForestAutomaton a = connected_part(input);
    EquationReport report;
    report.used_connected_part = a.num_states() != input.num_states();
    report.trivial = a.num_states() == 1;

    // The CORE_* equations presuppose positivity; on a non-positive
    // automaton they are reported not-applicable alongside the POSITIVE
    // failure itself.
    std::optional<std::string> positive_fail;
    bool positive_checked = false;
    auto positive = [&]() -> const std::optional<std::string>& {
        if (!positive_checked) {
            positive_fail = positive_witness(a);
            positive_checked = true;
        }
        return positive_fail;
    };

    for (EquationId id : which) {
        EquationVerdict v;
        v.id = id;
        std::optional<std::string> witness;
        bool applicable = true;
        switch (id) {
            case EquationId::SEMILATTICE:
                witness = semilattice_witness(a);
                break;
            case EquationId::LETTER_IDEMPOTENT:
                witness = letter_idempotent_witness(a);
                break;
            case EquationId::EF_DECREASING:
                witness = ef_decreasing_witness(a);
                break;
            case EquationId::POSITIVE:
                witness = positive();
                break;
            case EquationId::CORE_INCREASING:
                if (positive()) applicable = false;
                else witness = core_increasing_witness(a);
                break;
            case EquationId::ZERO_ACTION:
                witness = zero_action_witness(a);
                break;
            case EquationId::CORE_IMPLICATION:
                if (positive()) applicable = false;
                else witness = core_implication_witness(a);
                break;
        }
        if (!applicable) {
            v.status = EquationVerdict::Status::NotApplicable;
        } else {
            v.status = witness ? EquationVerdict::Status::Fail : EquationVerdict::Status::Pass;
            v.witness = witness.value_or("");
        }
        report.verdicts.push_back(std::move(v));
    }

    const bool has_positive_verdict = report.find(EquationId::POSITIVE) != nullptr;
    auto first_na = std::find_if(report.verdicts.begin(), report.verdicts.end(),
                                 [](const EquationVerdict& v) {
                                     return v.status == EquationVerdict::Status::NotApplicable;
                                 });
    if (first_na != report.verdicts.end() && !has_positive_verdict) {
        EquationVerdict pos;
        pos.id = EquationId::POSITIVE;
        pos.status = EquationVerdict::Status::Fail;
        pos.witness = *positive_fail;
        report.verdicts.insert(first_na, std::move(pos));
    }
    return report;
}

std::string render_equation_report(const EquationReport& report) {
    std::ostringstream out;
    for (const EquationVerdict& v : report.verdicts) {
        out << "EQUATION " << equation_name(v.id) << " " << status_text(v.status);
        if (!v.witness.empty()) out << " " << v.witness;
        out << "\n";
    }
    return out.str();
}

EfDecision decide_ef_definable(const RecognizedLanguage& lang) {
    EfDecision decision;
    decision.minimal = minimize(lang);
    decision.report = check_equations(*decision.minimal.automaton, ef_equations());
    decision.definable = decision.report.all_pass();
    return decision;
}

std::vector<int> semilattice_atoms(const ForestAutomaton& a) {
    if (connected_part(a).num_states() != a.num_states()) {
        throw VarietyError("semilattice_atoms requires a connected automaton");
    }
    if (auto w = semilattice_witness(a)) {
        throw VarietyError("semilattice_atoms requires a semilattice automaton (violated at " +
                           *w + ")");
    }
    if (a.num_states() < 2) {
        throw VarietyError("semilattice_atoms requires at least two states");
    }
    const int n = a.num_states();
    const int bot = bottom_state(a);
    std::vector<int> atoms;
    for (int x = 0; x < n; ++x) {
        if (x == bot) continue;
        bool minimal = true;
        for (int y = 0; y < n && minimal; ++y) {
            if (y == bot || y == x) continue;
            if (state_leq(a, y, x)) minimal = false;
        }
        if (minimal) atoms.push_back(x);
    }
    return atoms;
}

Congruence atom_congruence(const ForestAutomaton& a, int p) {
    if (auto w = letter_idempotent_witness(a)) {
        throw VarietyError("atom_congruence requires a letter-idempotent automaton (violated at " +
                           *w + ")");
    }
    if (auto w = ef_decreasing_witness(a)) {
        throw VarietyError("atom_congruence requires decreasing letter actions (violated at " +
                           *w + ")");
    }
    const std::vector<int> atoms = semilattice_atoms(a);
    if (std::find(atoms.begin(), atoms.end(), p) == atoms.end()) {
        throw VarietyError("atom_congruence: state " +
                           (p >= 0 && p < a.num_states() ? a.state_name(p) : std::to_string(p)) +
                           " is not an atom");
    }
    const int bot = bottom_state(a);
    std::vector<int> class_of(a.num_states());
    std::iota(class_of.begin(), class_of.end(), 0);
    class_of[std::max(bot, p)] = std::min(bot, p);
    Congruence theta(class_of);
    if (!is_congruence(a, theta)) {
        throw VarietyError("internal inconsistency: merging the bottom with atom " +
                           a.state_name(p) + " is not a congruence");
    }
    return theta;
}

std::optional<std::pair<Congruence, Congruence>> is_subdirectly_reducible(
    const ForestAutomaton& a, int max_states) {
    std::vector<Congruence> nontrivial;
    for (const Congruence& theta : enumerate_congruences(a, max_states)) {
        if (!theta.is_identity()) nontrivial.push_back(theta);
    }
    for (std::size_t i = 0; i < nontrivial.size(); ++i) {
        for (std::size_t j = i + 1; j < nontrivial.size(); ++j) {
            if (nontrivial[i].meet(nontrivial[j]).is_identity()) {
                return std::make_pair(nontrivial[i], nontrivial[j]);
            }
        }
    }
    return std::nullopt;
}

ForestAutomaton visited_set_automaton(const ForestAutomaton& a) {
    const int n = a.num_states();
    if (n > 8) {
        throw SizeGuardError("size guard exceeded: the visited-set automaton over " +
                             std::to_string(n) + " states would have 2^" + std::to_string(n) +
                             " states");
    }
    const int size = 1 << n;
    std::vector<std::string> names(size);
    for (int mask = 0; mask < size; ++mask) {
        std::string name = "{";
        bool first = true;
        for (int q = 0; q < n; ++q) {
            if (!(mask >> q & 1)) continue;
            if (!first) name += ",";
            first = false;
            name += a.state_name(q);
        }
        name += "}";
        names[mask] = std::move(name);
    }
    std::vector<std::vector<int>> plus(size, std::vector<int>(size));
    for (int x = 0; x < size; ++x) {
        for (int y = 0; y < size; ++y) plus[x][y] = x | y;
    }
    std::vector<std::vector<int>> action(a.alphabet().size(), std::vector<int>(size));
    for (int l = 0; l < a.alphabet().size(); ++l) {
        for (int mask = 0; mask < size; ++mask) {
            std::vector<int> members;
            for (int q = 0; q < n; ++q) {
                if (mask >> q & 1) members.push_back(q);
            }
            action[l][mask] = mask | (1 << a.action(l, a.sum(members)));
        }
    }
    return ForestAutomaton("P(" + a.name() + ")", a.alphabet(), names, 0, plus, action);
}

namespace {

AutomatonPtr copy_of(const ForestAutomaton& a) {
    return std::make_shared<const ForestAutomaton>(a);
}

CertificatePtr decompose_rec(const ForestAutomaton& a) {
    const int n = a.num_states();
    const Alphabet& sigma = a.alphabet();

    if (n == 1) {
        // Any one-state automaton divides the total quotient of BaseEF
        // renamed onto its alphabet (every letter to the identity letter).
        std::vector<int> to_identity(sigma.size(), 0);
        CertificatePtr collapsed = cert_quotient(
            {{"0", "1"}}, cert_rename(sigma, to_identity, cert_base_ef()));
        return cert_divide(copy_of(a), collapsed);
    }

    if (n == 2) {
        // A two-state automaton satisfying the EF equations is a renaming
        // of BaseEF: letters fixing the unit act as the identity letter,
        // the rest as the absorbing letter.
        const int top = a.zero();
        std::vector<int> map(sigma.size());
        for (int l = 0; l < sigma.size(); ++l) {
            map[l] = a.action(l, top) == top ? 0 : 1;
        }
        const bool identity_map =
            sigma.symbols() == binary_alphabet().symbols() && map[0] == 0 && map[1] == 1;
        CertificatePtr inner =
            identity_map ? cert_base_ef() : cert_rename(sigma, map, cert_base_ef());
        return cert_divide(copy_of(a), inner);
    }

    const std::vector<int> atoms = semilattice_atoms(a);
    if (atoms.size() >= 2) {
        // Subdirectly reducible: A embeds into the product of the two
        // atom quotients, whose merged classes meet in the identity.
        const ForestAutomaton ap = quotient(a, atom_congruence(a, atoms[0]));
        const ForestAutomaton aq = quotient(a, atom_congruence(a, atoms[1]));
        CertificatePtr inner = cert_direct_product({decompose_rec(ap), decompose_rec(aq)});
        return cert_divide(copy_of(a), inner);
    }

    // Exactly one atom p: A divides P(A') x_alpha Aux where A' merges
    // {bottom, p} and P(A') tracks the set of visited A'-states.
    const int p = atoms[0];
    const Congruence theta = atom_congruence(a, p);
    const ForestAutomaton aprime = quotient(a, theta);
    const int np = aprime.num_states();

    // P(A') itself divides A' x_alpha (E_0 x ... x E_{n'-1}) where E_h
    // flags whether state h was ever entered.
    CertificatePtr cprime = decompose_rec(aprime);
    const ForestAutomaton pa = visited_set_automaton(aprime);

    std::vector<std::string> delta_symbols(np);
    for (int h = 0; h < np; ++h) delta_symbols[h] = "s" + std::to_string(h);
    const Alphabet delta(delta_symbols);

    std::vector<CertificatePtr> factors;
    factors.reserve(np);
    for (int h = 0; h < np; ++h) {
        std::vector<int> hit(np, 0);
        hit[h] = 1;
        factors.push_back(cert_rename(delta, hit, cert_base_ef()));
    }
    ControlFunction alpha0;
    alpha0.table.assign(sigma.size(), std::vector<int>(np));
    for (int l = 0; l < sigma.size(); ++l) {
        for (int state = 0; state < np; ++state) alpha0.table[l][state] = state;
    }
    CertificatePtr pa_cert = cert_divide(
        copy_of(pa), cert_moore(cprime, cert_direct_product(std::move(factors)), alpha0));

    // The auxiliary three-state automaton over {l,o,e,s} arises as a
    // quotient of B x_alpha BaseEF where B renames {l,e} to the identity
    // letter and {o,s} to the absorbing one.
    const Alphabet loes = loes_alphabet();
    CertificatePtr b_cert = cert_rename(loes, {0, 1, 0, 1}, cert_base_ef());
    ControlFunction alpha_b;
    alpha_b.table = {{0, 0}, {1, 1}, {1, 0}, {0, 0}};
    CertificatePtr aux_cert = cert_quotient({{"(0|0)"}, {"(0|1)", "(1|1)"}, {"(1|0)"}},
                                            cert_moore(b_cert, cert_base_ef(), alpha_b));

    // The four-case control: from the visited set H decide whether the
    // collapsed class is ambiguous and, if so, which auxiliary letter
    // resolves the original value.
    const auto blocks = theta.blocks();
    const int q0 = bottom_state(a);
    int bot_prime = -1;
    std::vector<int> rep(np);
    for (int j = 0; j < np; ++j) {
        if (blocks[j].size() == 2) {
            bot_prime = j;
            rep[j] = q0;
        } else {
            rep[j] = blocks[j][0];
        }
    }
    const int num_masks = 1 << np;
    ControlFunction alpha4;
    alpha4.table.assign(sigma.size(), std::vector<int>(num_masks));
    for (int l = 0; l < sigma.size(); ++l) {
        for (int mask = 0; mask < num_masks; ++mask) {
            std::vector<int> members;
            for (int j = 0; j < np; ++j) {
                if (mask >> j & 1) members.push_back(j);
            }
            int choice = 0;  // 'l': the class is unambiguous, keep the state
            if (aprime.sum(members) == bot_prime) {
                if (a.action(l, p) == q0) {
                    choice = 1;  // 'o': the letter collapses the atom
                } else {
                    std::vector<int> others;
                    for (int j : members) {
                        if (j != bot_prime) others.push_back(rep[j]);
                    }
                    const int az = a.action(l, a.sum(others));
                    if (az == p) choice = 3;       // 's': the visited rest lands on the atom
                    else if (az == q0) choice = 2; // 'e': the visited rest falls to the bottom
                }
            }
            alpha4.table[l][mask] = choice;
        }
    }
    return cert_divide(copy_of(a), cert_moore(pa_cert, aux_cert, alpha4));
}

}  // namespace

CertificatePtr decompose_ef(const ForestAutomaton& a) {
    if (connected_part(a).num_states() != a.num_states()) {
        throw VarietyError("decompose_ef requires a connected automaton");
    }
    const EquationReport report = check_equations(a, ef_equations());
    for (const EquationVerdict& v : report.verdicts) {
        if (v.status != EquationVerdict::Status::Pass) {
            throw VarietyError("decompose_ef precondition failed: " + equation_name(v.id) +
                               " does not hold (" + v.witness + ")");
        }
    }
    CertificatePtr cert = decompose_rec(a);
    const VerificationResult check = verify_certificate(*cert, a);
    if (!check.ok) {
        throw VarietyError("internal inconsistency: the decomposition certificate failed "
                           "verification: " +
                           (check.issues.empty() ? std::string("no detail") : check.issues.front()));
    }
    return cert;
}

namespace {

void classify_ladder(const ForestAutomaton& a, const Congruence& theta, LadderEntry& entry) {
    const auto blocks = theta.blocks();
    for (const auto& block : blocks) {
        if (block.size() > 2) {
            entry.ladder = false;
            entry.violation = "class " + braced_names(a, block) + " has more than two elements";
            return;
        }
    }
    const int num_letters = a.alphabet().size();
    for (std::size_t ci = 0; ci < blocks.size(); ++ci) {
        if (blocks[ci].size() != 2) continue;
        const int x = blocks[ci][0];
        const int y = blocks[ci][1];
        int p, q;
        if (a.plus(x, y) == x) {
            p = x;
            q = y;
        } else if (a.plus(x, y) == y) {
            p = y;
            q = x;
        } else {
            entry.ladder = false;
            entry.violation = "class " + braced_names(a, blocks[ci]) + " is not a chain";
            return;
        }
        for (int l = 0; l < num_letters; ++l) {
            bool p_in_image = false;
            for (int r = 0; r < a.num_states() && !p_in_image; ++r) {
                if (a.action(l, r) == p) p_in_image = true;
            }
            if (!p_in_image) continue;
            for (std::size_t di = 0; di < blocks.size(); ++di) {
                if (di == ci) continue;
                const auto& d = blocks[di];
                const bool maps_into_c = std::all_of(d.begin(), d.end(), [&](int r) {
                    const int ar = a.action(l, r);
                    return ar == p || ar == q;
                });
                if (!maps_into_c) continue;
                if (d.size() == 1) {
                    if (a.action(l, d[0]) != p) {
                        entry.ladder = false;
                        entry.violation = "letter " + a.alphabet().symbol(l) + " maps class " +
                                          braced_names(a, d) + " into " +
                                          braced_names(a, blocks[ci]) + " but " +
                                          a.state_name(d[0]) + " does not go to " +
                                          a.state_name(p);
                        return;
                    }
                } else {
                    int r, s;
                    if (a.plus(d[0], d[1]) == d[0]) {
                        r = d[0];
                        s = d[1];
                    } else if (a.plus(d[0], d[1]) == d[1]) {
                        r = d[1];
                        s = d[0];
                    } else {
                        entry.ladder = false;
                        entry.violation = "class " + braced_names(a, d) + " is not a chain";
                        return;
                    }
                    if (a.action(l, r) != p || a.action(l, s) != q) {
                        entry.ladder = false;
                        entry.violation = "letter " + a.alphabet().symbol(l) + " maps class " +
                                          braced_names(a, d) + " into " +
                                          braced_names(a, blocks[ci]) +
                                          " but not order-preservingly onto it";
                        return;
                    }
                }
            }
        }
    }
    entry.ladder = true;
}

}  // namespace

LadderReport find_ladder_congruences(const ForestAutomaton& a, int max_states) {
    LadderReport report;
    for (const Congruence& theta : enumerate_congruences(a, max_states)) {
        if (theta.is_identity()) continue;
        LadderEntry entry;
        entry.theta = theta;
        classify_ladder(a, theta, entry);
        report.entries.push_back(std::move(entry));
    }
    return report;
}

EquationReport check_af_necessary(const ForestAutomaton& a) {
    return check_equations(a, af_equations());
}

}  // namespace fl
