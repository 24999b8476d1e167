#include "fl/explorer.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <sstream>
#include <utility>

#include "fl/enumerate.hpp"
#include "fl/fixtures.hpp"

namespace fl {

namespace {

// Iso-invariant bucket key: state count plus the sorted multiset of
// per-state profiles (unit flag, self-sum, per-letter fixpoint flags and
// in-degrees, absorption degree).
std::string fingerprint(const ForestAutomaton& a) {
    const int n = a.num_states();
    const int k = a.alphabet().size();
    std::vector<std::vector<int>> profiles(n);
    for (int q = 0; q < n; ++q) {
        auto& p = profiles[q];
        p.push_back(q == a.zero() ? 1 : 0);
        p.push_back(a.plus(q, q) == q ? 1 : 0);
        int absorb = 0;
        for (int r = 0; r < n; ++r) {
            if (a.plus(q, r) == q) ++absorb;
        }
        p.push_back(absorb);
        for (int l = 0; l < k; ++l) {
            p.push_back(a.action(l, q) == q ? 1 : 0);
            int indeg = 0;
            for (int r = 0; r < n; ++r) {
                if (a.action(l, r) == q) ++indeg;
            }
            p.push_back(indeg);
        }
    }
    std::sort(profiles.begin(), profiles.end());
    std::ostringstream out;
    out << n << '/' << k;
    for (const std::string& s : a.alphabet().symbols()) out << ' ' << s;
    for (const auto& p : profiles) {
        out << '|';
        for (int v : p) out << v << ',';
    }
    return out.str();
}

struct ClosureState {
    const ClosureConfig& cfg;
    std::vector<ClosureEntry> entries;
    std::map<std::string, std::vector<int>> buckets;

    explicit ClosureState(const ClosureConfig& c) : cfg(c) {}

    bool known(const ForestAutomaton& a, std::string* hit_name = nullptr) const {
        const auto it = buckets.find(fingerprint(a));
        if (it == buckets.end()) return false;
        for (int idx : it->second) {
            const ForestAutomaton& b = *entries[idx].automaton;
            if (b.alphabet() != a.alphabet()) continue;
            if (is_isomorphic(a, b).has_value()) {
                if (hit_name) *hit_name = entries[idx].name;
                return true;
            }
        }
        return false;
    }

    // Keep-first dedup; returns true when the candidate was new.
    bool add(ForestAutomaton a, CertificatePtr trace) {
        if (known(a)) return false;
        const std::string key = fingerprint(a);
        const int idx = static_cast<int>(entries.size());
        ClosureEntry entry;
        entry.name = "m" + std::to_string(idx);
        entry.automaton = std::make_shared<const ForestAutomaton>(std::move(a));
        entry.trace = std::move(trace);
        entries.push_back(std::move(entry));
        buckets[key].push_back(idx);
        return true;
    }
};

// Connected part of moore_product(a, b, alpha) without building the full
// table; nullopt when it would exceed max_states.  The result is
// isomorphic to connected_part(moore_product(a, b, alpha)).
std::optional<ForestAutomaton> bounded_connected_moore(const ForestAutomaton& a,
                                                       const ForestAutomaton& b,
                                                       const ControlFunction& alpha,
                                                       int max_states) {
    const int nb = b.num_states();
    const int total = a.num_states() * nb;
    const int zero = a.zero() * nb + b.zero();
    std::vector<bool> seen(total, false);
    std::vector<int> members;
    std::vector<int> queue = {zero};
    seen[zero] = true;
    const int k = a.alphabet().size();
    while (!queue.empty()) {
        const int s = queue.back();
        queue.pop_back();
        members.push_back(s);
        if (static_cast<int>(members.size()) > max_states) return std::nullopt;
        const int p = s / nb;
        const int q = s % nb;
        std::vector<int> next;
        for (int l = 0; l < k; ++l) {
            const int p2 = a.action(l, p);
            const int q2 = b.action(alpha.table[l][p2], q);
            next.push_back(p2 * nb + q2);
        }
        for (int other : members) {
            const int op = other / nb;
            const int oq = other % nb;
            next.push_back(a.plus(p, op) * nb + b.plus(q, oq));
            next.push_back(a.plus(op, p) * nb + b.plus(oq, q));
        }
        for (int t : next) {
            if (!seen[t]) {
                seen[t] = true;
                queue.push_back(t);
            }
        }
    }
    std::sort(members.begin(), members.end());
    const int n = static_cast<int>(members.size());
    std::vector<int> index(total, -1);
    for (int i = 0; i < n; ++i) index[members[i]] = i;
    std::vector<std::string> names(n);
    std::vector<std::vector<int>> plus(n, std::vector<int>(n));
    std::vector<std::vector<int>> action(k, std::vector<int>(n));
    for (int i = 0; i < n; ++i) {
        const int p = members[i] / nb;
        const int q = members[i] % nb;
        names[i] = "(" + a.state_name(p) + "|" + b.state_name(q) + ")";
        for (int j = 0; j < n; ++j) {
            const int op = members[j] / nb;
            const int oq = members[j] % nb;
            plus[i][j] = index[a.plus(p, op) * nb + b.plus(q, oq)];
        }
        for (int l = 0; l < k; ++l) {
            const int p2 = a.action(l, p);
            const int q2 = b.action(alpha.table[l][p2], q);
            action[l][i] = index[p2 * nb + q2];
        }
    }
    return ForestAutomaton("c(" + a.name() + "," + b.name() + ")", a.alphabet(), names,
                           index[zero], plus, action);
}

// Advances a mixed-radix counter; false when it wraps to all zeros.
bool advance(std::vector<int>& digits, int radix) {
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
        if (*it + 1 < radix) {
            ++*it;
            return true;
        }
        *it = 0;
    }
    return false;
}

std::vector<std::vector<std::string>> blocks_as_names(const ForestAutomaton& a,
                                                      const Congruence& theta) {
    std::vector<std::vector<std::string>> out;
    for (const auto& block : theta.blocks()) {
        std::vector<std::string> names;
        names.reserve(block.size());
        for (int q : block) names.push_back(a.state_name(q));
        out.push_back(std::move(names));
    }
    return out;
}

void add_unary_results(ClosureState& st, const ClosureEntry& entry,
                       const std::vector<Alphabet>& targets) {
    const ForestAutomaton& a = *entry.automaton;
    const int max_states = st.cfg.max_states;

    // Renamings onto every target alphabet.
    for (const Alphabet& target : targets) {
        std::vector<int> h(target.size(), 0);
        do {
            ForestAutomaton renamed = rename(a, target, h);
            if (renamed.num_states() <= max_states) {
                st.add(std::move(renamed), cert_rename(target, h, entry.trace));
            }
        } while (advance(h, a.alphabet().size()));
    }

    // Connected part.
    ForestAutomaton connected = connected_part(a);
    if (connected.num_states() <= max_states) {
        st.add(std::move(connected), cert_connected(entry.trace));
    }

    // Subautomata (each contains the reachable part, so the division
    // pairing against the parent trace certifies it).
    if (a.num_states() <= 12) {
        for (const std::vector<int>& subset : enumerate_subautomata(a)) {
            if (static_cast<int>(subset.size()) > max_states) continue;
            ForestAutomaton sub = subautomaton(a, subset);
            auto target = std::make_shared<const ForestAutomaton>(sub);
            st.add(std::move(sub), cert_divide(std::move(target), entry.trace));
        }
    }

    // Quotients.
    if (a.num_states() <= 10) {
        for (const Congruence& theta : enumerate_congruences(a)) {
            ForestAutomaton q = quotient(a, theta);
            if (q.num_states() <= max_states) {
                st.add(std::move(q), cert_quotient(blocks_as_names(a, theta), entry.trace));
            }
        }
    }
}

void add_moore_results(ClosureState& st, const ClosureEntry& left, const ClosureEntry& right) {
    const ForestAutomaton& a = *left.automaton;
    const ForestAutomaton& b = *right.automaton;
    const int max_states = st.cfg.max_states;
    const int cells = a.alphabet().size() * a.num_states();
    const int radix = b.alphabet().size();
    std::vector<int> digits(cells, 0);
    do {
        ControlFunction alpha;
        alpha.table.assign(a.alphabet().size(), std::vector<int>(a.num_states()));
        for (int l = 0, c = 0; l < a.alphabet().size(); ++l) {
            for (int q = 0; q < a.num_states(); ++q, ++c) alpha.table[l][q] = digits[c];
        }
        if (a.num_states() * b.num_states() <= max_states) {
            ForestAutomaton product = moore_product(a, b, alpha);
            if (!st.known(product)) {
                st.add(std::move(product), cert_moore(left.trace, right.trace, alpha));
            }
        } else if (auto connected = bounded_connected_moore(a, b, alpha, max_states)) {
            if (!st.known(*connected)) {
                st.add(std::move(*connected),
                       cert_connected(cert_moore(left.trace, right.trace, alpha)));
            }
        }
    } while (advance(digits, radix));
}

}  // namespace

ClosureResult closure_explore(const ClosureConfig& cfg) {
    if (cfg.max_states < 1) throw ExplorerError("closure_explore: max_states must be >= 1");
    if (cfg.max_rounds < 0) throw ExplorerError("closure_explore: max_rounds must be >= 0");

    std::vector<Alphabet> targets = cfg.target_alphabets;
    if (targets.empty()) {
        for (const ForestAutomaton& g : cfg.generators) targets.push_back(g.alphabet());
        targets.push_back(binary_alphabet());
    }
    std::vector<Alphabet> unique_targets;
    for (const Alphabet& t : targets) {
        if (t.size() == 0) throw ExplorerError("closure_explore: empty target alphabet");
        if (std::find(unique_targets.begin(), unique_targets.end(), t) == unique_targets.end()) {
            unique_targets.push_back(t);
        }
    }
    if (unique_targets.empty()) {
        throw ExplorerError("closure_explore: no target alphabets (none given, no generators)");
    }

    ClosureState st(cfg);
    for (const ForestAutomaton& g : cfg.generators) {
        auto stored = std::make_shared<const ForestAutomaton>(g);
        st.add(g, cert_generator(stored));
    }

    ClosureResult result;
    std::size_t frontier_start = 0;
    for (int round = 1; round <= cfg.max_rounds; ++round) {
        const std::size_t snapshot = st.entries.size();
        // Copies below: add() grows st.entries, which may reallocate.
        for (std::size_t i = frontier_start; i < snapshot; ++i) {
            const ClosureEntry entry = st.entries[i];
            add_unary_results(st, entry, unique_targets);
        }
        for (std::size_t i = 0; i < snapshot; ++i) {
            for (std::size_t j = 0; j < snapshot; ++j) {
                if (i < frontier_start && j < frontier_start) continue;
                const ClosureEntry left = st.entries[i];
                const ClosureEntry right = st.entries[j];
                add_moore_results(st, left, right);
            }
        }
        result.rounds = round;
        if (st.entries.size() == snapshot) {
            result.saturated = true;
            break;
        }
        frontier_start = snapshot;
    }
    if (cfg.max_rounds == 0) result.saturated = st.entries.empty();
    result.entries = std::move(st.entries);
    return result;
}

const ClosureEntry* find_isomorphic(const ClosureResult& result, const ForestAutomaton& a) {
    for (const ClosureEntry& entry : result.entries) {
        if (entry.automaton->alphabet() != a.alphabet()) continue;
        if (is_isomorphic(*entry.automaton, a).has_value()) return &entry;
    }
    return nullptr;
}

std::string render_closure_index(const ClosureResult& result) {
    std::ostringstream out;
    for (const ClosureEntry& entry : result.entries) {
        out << "MEMBER " << entry.name << " states=" << entry.automaton->num_states()
            << " trace=" << entry.name << ".cert\n";
    }
    return out.str();
}

namespace {

ClosureResult af_closure(int bound, int max_rounds) {
    ClosureConfig cfg;
    cfg.generators = {af_automaton()};
    cfg.max_states = bound;
    cfg.target_alphabets = {binary_alphabet()};
    cfg.max_rounds = max_rounds;
    return closure_explore(cfg);
}

}  // namespace

ConjectureAReport conjecture_a_experiment(int bound, int max_rounds) {
    ConjectureAReport report;
    report.bound = bound;
    report.closure = af_closure(bound, max_rounds);

    // Necessity: every nontrivial connected closure member satisfies the
    // equations (check_equations itself works on the connected part).
    for (const ClosureEntry& entry : report.closure.entries) {
        const EquationReport eq = check_af_necessary(*entry.automaton);
        if (eq.trivial) continue;
        if (eq.all_pass()) continue;
        for (const EquationVerdict& v : eq.verdicts) {
            if (v.status == EquationVerdict::Status::Fail) {
                report.violations.push_back(
                    {entry.name, entry.automaton, v.id, v.witness});
                break;
            }
        }
    }

    // Sufficiency, report-only: which equation-passing automata show up in
    // the bounded closure?
    for (ForestAutomaton& candidate :
         enumerate_equation_automata(bound, binary_alphabet(), LetterLaws::AF)) {
        ConjectureACandidate c;
        c.name = candidate.name();
        if (const ClosureEntry* hit = find_isomorphic(report.closure, candidate)) {
            c.in_closure = true;
            c.member_name = hit->name;
        }
        c.automaton = std::make_shared<const ForestAutomaton>(std::move(candidate));
        report.candidates.push_back(std::move(c));
    }
    return report;
}

std::string render_conjecture_a(const ConjectureAReport& report) {
    std::ostringstream out;
    for (const ConjectureAViolation& v : report.violations) {
        out << "COUNTEREXAMPLE " << v.member_name << " states=" << v.automaton->num_states()
            << " equation=" << equation_name(v.equation);
        if (!v.witness.empty()) out << " witness=" << v.witness;
        out << "\n";
    }
    for (const ConjectureACandidate& c : report.candidates) {
        if (c.in_closure) {
            out << "MEMBER " << c.name << " states=" << c.automaton->num_states()
                << " trace=" << c.member_name << ".cert\n";
        } else {
            out << "INCONCLUSIVE " << c.name << " states=" << c.automaton->num_states()
                << " bound=" << report.bound << "\n";
        }
    }
    return out.str();
}

namespace {

// The least nontrivial congruence; requires subdirect irreducibility (the
// monolith then exists and refines every other nontrivial congruence).
Congruence monolith_of(const ForestAutomaton& a) {
    std::vector<Congruence> nontrivial;
    for (const Congruence& theta : enumerate_congruences(a)) {
        if (!theta.is_identity()) nontrivial.push_back(theta);
    }
    for (const Congruence& candidate : nontrivial) {
        const bool least = std::all_of(nontrivial.begin(), nontrivial.end(),
                                       [&](const Congruence& other) {
                                           return candidate.refines(other);
                                       });
        if (least) return candidate;
    }
    throw ExplorerError("internal inconsistency: subdirectly irreducible automaton "
                        "without a least nontrivial congruence");
}

// Searches the control-function space for alpha making A a quotient of
// A/Theta x_alpha AF; the division pairing check is exactly the Divide
// node's build-time check.
std::optional<CertificatePtr> search_ladder_reconstruction(const ForestAutomaton& a,
                                                           const Congruence& theta) {
    const ForestAutomaton q = quotient(a, theta);
    const CertificatePtr q_gen = cert_generator(std::make_shared<const ForestAutomaton>(q));
    const CertificatePtr af_gen =
        cert_generator(std::make_shared<const ForestAutomaton>(af_automaton()));
    const auto target = std::make_shared<const ForestAutomaton>(a);
    const int cells = a.alphabet().size() * q.num_states();
    const int radix = af_automaton().alphabet().size();
    std::vector<int> digits(cells, 0);
    do {
        ControlFunction alpha;
        alpha.table.assign(a.alphabet().size(), std::vector<int>(q.num_states()));
        for (int l = 0, c = 0; l < a.alphabet().size(); ++l) {
            for (int s = 0; s < q.num_states(); ++s, ++c) alpha.table[l][s] = digits[c];
        }
        CertificatePtr cert = cert_divide(target, cert_moore(q_gen, af_gen, alpha));
        try {
            build_certificate(*cert);
            return cert;
        } catch (const CertificateError&) {
        }
    } while (advance(digits, radix));
    return std::nullopt;
}

}  // namespace

ConjectureBReport conjecture_b_experiment(int bound, int max_rounds) {
    ConjectureBReport report;
    report.bound = bound;
    report.closure = af_closure(bound, max_rounds);

    std::vector<AutomatonPtr> analyzed;
    for (const ClosureEntry& entry : report.closure.entries) {
        ForestAutomaton connected = connected_part(*entry.automaton);
        if (connected.num_states() <= 1) continue;  // trivial members skipped
        const bool duplicate = std::any_of(analyzed.begin(), analyzed.end(),
                                           [&](const AutomatonPtr& seen) {
                                               return seen->alphabet() == connected.alphabet() &&
                                                      is_isomorphic(*seen, connected).has_value();
                                           });
        if (duplicate) continue;

        ConjectureBEntry record;
        record.name = entry.name;
        record.automaton = std::make_shared<const ForestAutomaton>(std::move(connected));
        analyzed.push_back(record.automaton);
        const ForestAutomaton& c = *record.automaton;

        record.reducible = is_subdirectly_reducible(c).has_value();
        if (!record.reducible) {
            record.monolith = monolith_of(c);
            const LadderReport ladders = find_ladder_congruences(c);
            for (const LadderEntry& le : ladders.entries) {
                if (le.theta == record.monolith) {
                    record.ladder = le.ladder;
                    record.violation = le.violation;
                    break;
                }
            }
            if (record.ladder) {
                if (auto cert = search_ladder_reconstruction(c, record.monolith)) {
                    record.alpha_found = true;
                    record.reconstruction = *cert;
                }
            }
            record.counterexample = !record.ladder;
        }
        if (record.counterexample) report.any_counterexample = true;
        report.entries.push_back(std::move(record));
    }
    return report;
}

namespace {

std::string render_blocks(const ForestAutomaton& a, const Congruence& theta) {
    std::ostringstream out;
    out << "{";
    bool first_block = true;
    for (const auto& block : theta.blocks()) {
        if (!first_block) out << ",";
        first_block = false;
        out << "{";
        bool first = true;
        for (int q : block) {
            if (!first) out << ",";
            first = false;
            out << a.state_name(q);
        }
        out << "}";
    }
    out << "}";
    return out.str();
}

}  // namespace

std::string render_conjecture_b(const ConjectureBReport& report) {
    std::ostringstream out;
    for (const ConjectureBEntry& e : report.entries) {
        if (e.counterexample) {
            out << "COUNTEREXAMPLE " << e.name << " states=" << e.automaton->num_states()
                << " monolith=" << render_blocks(*e.automaton, e.monolith)
                << " violation=" << e.violation << "\n";
        } else if (e.reducible) {
            out << "MEMBER " << e.name << " states=" << e.automaton->num_states()
                << " verdict=subdirectly-reducible trace=" << e.name << ".cert\n";
        } else {
            out << "MEMBER " << e.name << " states=" << e.automaton->num_states()
                << " verdict=ladder-monolith alpha=" << (e.alpha_found ? "found" : "not-found")
                << " trace=" << e.name << ".cert\n";
        }
    }
    return out.str();
}

}  // namespace fl
