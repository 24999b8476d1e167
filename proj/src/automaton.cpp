#include "fl/automaton.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace fl {

namespace {

bool valid_state_name(const std::string& name) {
    if (name.empty()) return false;
    return std::none_of(name.begin(), name.end(),
                        [](unsigned char c) { return std::isspace(c) != 0; });
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) out += sep;
        out += parts[i];
    }
    return out;
}

}  // namespace

ForestAutomaton::ForestAutomaton(std::string name, Alphabet alphabet,
                                 std::vector<std::string> state_names, int zero,
                                 std::vector<std::vector<int>> plus,
                                 std::vector<std::vector<int>> action)
    : name_(std::move(name)),
      alphabet_(std::move(alphabet)),
      state_names_(std::move(state_names)),
      zero_(zero),
      plus_(std::move(plus)),
      action_(std::move(action)) {
    const int n = num_states();
    if (n == 0) throw AutomatonError("automaton '" + name_ + "' has no states");
    for (const auto& s : state_names_) {
        if (!valid_state_name(s))
            throw AutomatonError("automaton '" + name_ + "': invalid state name '" + s + "'");
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (state_names_[i] == state_names_[j])
                throw AutomatonError("automaton '" + name_ + "': duplicate state name '" +
                                     state_names_[i] + "'");
    if (zero_ < 0 || zero_ >= n) throw AutomatonError("automaton '" + name_ + "': zero out of range");
    if (static_cast<int>(plus_.size()) != n)
        throw AutomatonError("automaton '" + name_ + "': plus table has wrong row count");
    for (const auto& row : plus_) {
        if (static_cast<int>(row.size()) != n)
            throw AutomatonError("automaton '" + name_ + "': plus table has wrong column count");
        for (int v : row)
            if (v < 0 || v >= n)
                throw AutomatonError("automaton '" + name_ + "': plus entry out of range");
    }
    if (static_cast<int>(action_.size()) != alphabet_.size())
        throw AutomatonError("automaton '" + name_ + "': action table has wrong letter count");
    for (const auto& row : action_) {
        if (static_cast<int>(row.size()) != n)
            throw AutomatonError("automaton '" + name_ + "': action table has wrong column count");
        for (int v : row)
            if (v < 0 || v >= n)
                throw AutomatonError("automaton '" + name_ + "': action entry out of range");
    }
    // Monoid axioms, checked eagerly so every constructed object is a
    // genuine forest automaton.
    for (int q = 0; q < n; ++q) {
        if (plus_[zero_][q] != q)
            throw AutomatonError("automaton '" + name_ + "': zero is not a left unit: 0+" +
                                 state_names_[q] + " = " + state_names_[plus_[zero_][q]]);
        if (plus_[q][zero_] != q)
            throw AutomatonError("automaton '" + name_ + "': zero is not a right unit: " +
                                 state_names_[q] + "+0 = " + state_names_[plus_[q][zero_]]);
    }
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            for (int r = 0; r < n; ++r)
                if (plus_[plus_[p][q]][r] != plus_[p][plus_[q][r]])
                    throw AutomatonError("automaton '" + name_ + "': plus not associative at (" +
                                         state_names_[p] + "," + state_names_[q] + "," +
                                         state_names_[r] + ")");
}

std::optional<int> ForestAutomaton::state_index(std::string_view name) const {
    for (size_t i = 0; i < state_names_.size(); ++i)
        if (state_names_[i] == name) return static_cast<int>(i);
    return std::nullopt;
}

int ForestAutomaton::sum(const std::vector<int>& states) const {
    int acc = zero_;
    for (int q : states) acc = plus_[acc][q];
    return acc;
}

bool ForestAutomaton::same_tables(const ForestAutomaton& other) const {
    return alphabet_ == other.alphabet_ && zero_ == other.zero_ && plus_ == other.plus_ &&
           action_ == other.action_;
}

RecognizedLanguage::RecognizedLanguage(AutomatonPtr a, std::vector<int> f)
    : automaton(std::move(a)), finals(std::move(f)) {
    if (!automaton) throw AutomatonError("language without automaton");
    std::sort(finals.begin(), finals.end());
    finals.erase(std::unique(finals.begin(), finals.end()), finals.end());
    for (int q : finals)
        if (q < 0 || q >= automaton->num_states())
            throw AutomatonError("final state out of range");
}

bool RecognizedLanguage::is_final(int q) const {
    return std::binary_search(finals.begin(), finals.end(), q);
}

int evaluate(const ForestAutomaton& a, const Tree& tree) {
    return a.action(tree.label, evaluate(a, tree.children));
}

int evaluate(const ForestAutomaton& a, const Forest& forest) {
    int acc = a.zero();
    for (const auto& t : forest.trees) acc = a.plus(acc, evaluate(a, t));
    return acc;
}

bool member(const RecognizedLanguage& lang, const Forest& forest) {
    return lang.is_final(evaluate(*lang.automaton, forest));
}

// --- Congruence ----------------------------------------------------------

Congruence::Congruence(const std::vector<int>& class_of) {
    class_of_.assign(class_of.size(), -1);
    std::map<int, int> remap;
    for (size_t q = 0; q < class_of.size(); ++q) {
        auto [it, inserted] = remap.try_emplace(class_of[q], num_classes_);
        if (inserted) ++num_classes_;
        class_of_[q] = it->second;
    }
}

std::vector<std::vector<int>> Congruence::blocks() const {
    std::vector<std::vector<int>> out(num_classes_);
    for (int q = 0; q < num_states(); ++q) out[class_of_[q]].push_back(q);
    return out;
}

bool Congruence::refines(const Congruence& coarser) const {
    if (num_states() != coarser.num_states()) return false;
    // Blocks refine iff the class map factors through ours.
    std::vector<int> image(num_classes_, -1);
    for (int q = 0; q < num_states(); ++q) {
        int c = class_of_[q];
        if (image[c] == -1)
            image[c] = coarser.class_of_[q];
        else if (image[c] != coarser.class_of_[q])
            return false;
    }
    return true;
}

Congruence Congruence::meet(const Congruence& other) const {
    std::vector<int> combined(class_of_.size());
    std::map<std::pair<int, int>, int> remap;
    for (size_t q = 0; q < class_of_.size(); ++q) {
        auto key = std::make_pair(class_of_[q], other.class_of_[q]);
        auto [it, inserted] = remap.try_emplace(key, static_cast<int>(remap.size()));
        combined[q] = it->second;
    }
    return Congruence(combined);
}

bool is_congruence(const ForestAutomaton& a, const Congruence& theta) {
    const int n = a.num_states();
    if (theta.num_states() != n) return false;
    for (int p = 0; p < n; ++p)
        for (int q = p + 1; q < n; ++q) {
            if (theta.class_of(p) != theta.class_of(q)) continue;
            for (int r = 0; r < n; ++r) {
                if (theta.class_of(a.plus(p, r)) != theta.class_of(a.plus(q, r))) return false;
                if (theta.class_of(a.plus(r, p)) != theta.class_of(a.plus(r, q))) return false;
            }
            for (int l = 0; l < a.alphabet().size(); ++l)
                if (theta.class_of(a.action(l, p)) != theta.class_of(a.action(l, q))) return false;
        }
    return true;
}

namespace {

class UnionFind {
public:
    explicit UnionFind(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
    int find(int x) {
        while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
        return x;
    }
    // Returns true iff the two classes were distinct.
    bool unite(int x, int y) {
        x = find(x);
        y = find(y);
        if (x == y) return false;
        if (x > y) std::swap(x, y);  // keep least representative
        parent_[y] = x;
        return true;
    }

private:
    std::vector<int> parent_;
};

}  // namespace

Congruence congruence_from_pairs(const ForestAutomaton& a,
                                 const std::vector<std::pair<int, int>>& pairs) {
    const int n = a.num_states();
    UnionFind uf(n);
    std::vector<std::pair<int, int>> worklist;
    for (auto [p, q] : pairs) {
        if (p < 0 || p >= n || q < 0 || q >= n) throw AutomatonError("state pair out of range");
        if (uf.unite(p, q)) worklist.emplace_back(p, q);
    }
    // Close under all one-step translations x -> x+r, x -> r+x, x -> a.x.
    while (!worklist.empty()) {
        auto [p, q] = worklist.back();
        worklist.pop_back();
        for (int r = 0; r < n; ++r) {
            if (uf.unite(a.plus(p, r), a.plus(q, r)))
                worklist.emplace_back(a.plus(p, r), a.plus(q, r));
            if (uf.unite(a.plus(r, p), a.plus(r, q)))
                worklist.emplace_back(a.plus(r, p), a.plus(r, q));
        }
        for (int l = 0; l < a.alphabet().size(); ++l)
            if (uf.unite(a.action(l, p), a.action(l, q)))
                worklist.emplace_back(a.action(l, p), a.action(l, q));
    }
    std::vector<int> class_of(n);
    for (int q = 0; q < n; ++q) class_of[q] = uf.find(q);
    return Congruence(class_of);
}

std::vector<Congruence> enumerate_congruences(const ForestAutomaton& a, int max_states) {
    const int n = a.num_states();
    if (n > max_states)
        throw SizeGuardError("congruence enumeration guard: " + std::to_string(n) + " states > " +
                             std::to_string(max_states));
    std::set<std::vector<int>> seen;
    std::vector<Congruence> all;
    auto add = [&](const Congruence& c) {
        if (seen.insert(c.class_map()).second) {
            all.push_back(c);
            return true;
        }
        return false;
    };
    std::vector<int> identity(n);
    std::iota(identity.begin(), identity.end(), 0);
    add(Congruence(identity));
    // Principal congruences generate the lattice under join.
    std::vector<Congruence> principals;
    for (int p = 0; p < n; ++p)
        for (int q = p + 1; q < n; ++q) {
            Congruence c = congruence_from_pairs(a, {{p, q}});
            principals.push_back(c);
            add(c);
        }
    // Join closure: the join of two congruences is the congruence generated
    // by merging along both class maps.
    bool grew = true;
    while (grew) {
        grew = false;
        const auto snapshot = all;
        for (const auto& x : snapshot)
            for (const auto& p : principals) {
                if (p.refines(x)) continue;
                std::vector<std::pair<int, int>> gen;
                for (const auto& block : x.blocks())
                    for (size_t i = 1; i < block.size(); ++i) gen.emplace_back(block[0], block[i]);
                for (const auto& block : p.blocks())
                    for (size_t i = 1; i < block.size(); ++i) gen.emplace_back(block[0], block[i]);
                if (add(congruence_from_pairs(a, gen))) grew = true;
            }
    }
    std::sort(all.begin(), all.end(), [](const Congruence& x, const Congruence& y) {
        if (x.num_classes() != y.num_classes()) return x.num_classes() > y.num_classes();
        return x.class_map() < y.class_map();
    });
    return all;
}

// --- Constructions -------------------------------------------------------

ForestAutomaton connected_part(const ForestAutomaton& a) {
    const int n = a.num_states();
    std::vector<bool> in(n, false);
    in[a.zero()] = true;
    bool grew = true;
    while (grew) {
        grew = false;
        for (int p = 0; p < n; ++p) {
            if (!in[p]) continue;
            for (int q = 0; q < n; ++q) {
                if (!in[q]) continue;
                if (!in[a.plus(p, q)]) {
                    in[a.plus(p, q)] = true;
                    grew = true;
                }
            }
            for (int l = 0; l < a.alphabet().size(); ++l)
                if (!in[a.action(l, p)]) {
                    in[a.action(l, p)] = true;
                    grew = true;
                }
        }
    }
    std::vector<int> states;
    for (int q = 0; q < n; ++q)
        if (in[q]) states.push_back(q);
    if (static_cast<int>(states.size()) == n) return a;
    return subautomaton(a, states);
}

RecognizedLanguage connected_part(const RecognizedLanguage& lang) {
    const auto& a = *lang.automaton;
    auto conn = std::make_shared<ForestAutomaton>(connected_part(a));
    std::vector<int> finals;
    for (int q = 0; q < conn->num_states(); ++q) {
        int original = *a.state_index(conn->state_name(q));
        if (lang.is_final(original)) finals.push_back(q);
    }
    return RecognizedLanguage(conn, finals);
}

ForestAutomaton rename(const ForestAutomaton& a, const Alphabet& target,
                       const std::vector<int>& h) {
    if (static_cast<int>(h.size()) != target.size())
        throw AutomatonError("rename: letter map must be total on the target alphabet");
    std::vector<std::vector<int>> action(target.size());
    for (int d = 0; d < target.size(); ++d) {
        if (h[d] < 0 || h[d] >= a.alphabet().size())
            throw AutomatonError("rename: letter map image out of range");
        action[d].resize(a.num_states());
        for (int q = 0; q < a.num_states(); ++q) action[d][q] = a.action(h[d], q);
    }
    std::vector<std::vector<int>> plus(a.num_states());
    for (int p = 0; p < a.num_states(); ++p) {
        plus[p].resize(a.num_states());
        for (int q = 0; q < a.num_states(); ++q) plus[p][q] = a.plus(p, q);
    }
    return ForestAutomaton("rn(" + a.name() + ")", target, a.state_names(), a.zero(),
                           std::move(plus), std::move(action));
}

ForestAutomaton direct_product(const std::vector<AutomatonPtr>& factors) {
    if (factors.empty()) throw AutomatonError("direct product needs at least one factor");
    for (const auto& f : factors)
        if (f->alphabet() != factors[0]->alphabet())
            throw AutomatonError("direct product: alphabet mismatch between factors");
    const int k = static_cast<int>(factors.size());
    int n = 1;
    for (const auto& f : factors) n *= f->num_states();
    // Mixed radix with the first factor most significant.
    auto decode = [&](int idx) {
        std::vector<int> comps(k);
        for (int i = k - 1; i >= 0; --i) {
            comps[i] = idx % factors[i]->num_states();
            idx /= factors[i]->num_states();
        }
        return comps;
    };
    auto encode = [&](const std::vector<int>& comps) {
        int idx = 0;
        for (int i = 0; i < k; ++i) idx = idx * factors[i]->num_states() + comps[i];
        return idx;
    };
    std::vector<std::string> names(n);
    std::vector<std::string> factor_names;
    for (int idx = 0; idx < n; ++idx) {
        auto comps = decode(idx);
        std::vector<std::string> parts;
        for (int i = 0; i < k; ++i) parts.push_back(factors[i]->state_name(comps[i]));
        names[idx] = "(" + join(parts, "|") + ")";
    }
    std::vector<int> zero_comps(k);
    for (int i = 0; i < k; ++i) zero_comps[i] = factors[i]->zero();
    std::vector<std::vector<int>> plus(n, std::vector<int>(n));
    for (int p = 0; p < n; ++p) {
        auto pc = decode(p);
        for (int q = 0; q < n; ++q) {
            auto qc = decode(q);
            std::vector<int> rc(k);
            for (int i = 0; i < k; ++i) rc[i] = factors[i]->plus(pc[i], qc[i]);
            plus[p][q] = encode(rc);
        }
    }
    const Alphabet& sigma = factors[0]->alphabet();
    std::vector<std::vector<int>> action(sigma.size(), std::vector<int>(n));
    for (int l = 0; l < sigma.size(); ++l)
        for (int q = 0; q < n; ++q) {
            auto qc = decode(q);
            std::vector<int> rc(k);
            for (int i = 0; i < k; ++i) rc[i] = factors[i]->action(l, qc[i]);
            action[l][q] = encode(rc);
        }
    std::vector<std::string> fnames;
    for (const auto& f : factors) fnames.push_back(f->name());
    return ForestAutomaton("prod(" + join(fnames, ",") + ")", sigma, std::move(names),
                           encode(zero_comps), std::move(plus), std::move(action));
}

ForestAutomaton direct_product(const ForestAutomaton& a, const ForestAutomaton& b) {
    return direct_product(std::vector<AutomatonPtr>{std::make_shared<ForestAutomaton>(a),
                                                    std::make_shared<ForestAutomaton>(b)});
}

ForestAutomaton moore_product(const ForestAutomaton& a, const ForestAutomaton& b,
                              const ControlFunction& alpha) {
    const int na = a.num_states(), nb = b.num_states();
    if (static_cast<int>(alpha.table.size()) != a.alphabet().size())
        throw AutomatonError("moore product: control table must cover every letter");
    for (const auto& row : alpha.table) {
        if (static_cast<int>(row.size()) != na)
            throw AutomatonError("moore product: control table must cover every left state");
        for (int d : row)
            if (d < 0 || d >= b.alphabet().size())
                throw AutomatonError("moore product: control value is not a right-factor letter");
    }
    const int n = na * nb;
    std::vector<std::string> names(n);
    for (int p = 0; p < na; ++p)
        for (int q = 0; q < nb; ++q)
            names[p * nb + q] = "(" + a.state_name(p) + "|" + b.state_name(q) + ")";
    std::vector<std::vector<int>> plus(n, std::vector<int>(n));
    for (int p1 = 0; p1 < na; ++p1)
        for (int q1 = 0; q1 < nb; ++q1)
            for (int p2 = 0; p2 < na; ++p2)
                for (int q2 = 0; q2 < nb; ++q2)
                    plus[p1 * nb + q1][p2 * nb + q2] = a.plus(p1, p2) * nb + b.plus(q1, q2);
    std::vector<std::vector<int>> action(a.alphabet().size(), std::vector<int>(n));
    for (int l = 0; l < a.alphabet().size(); ++l)
        for (int p = 0; p < na; ++p) {
            // The control letter is chosen at the updated left state.
            const int p2 = a.action(l, p);
            const int d = alpha.table[l][p2];
            for (int q = 0; q < nb; ++q) action[l][p * nb + q] = p2 * nb + b.action(d, q);
        }
    return ForestAutomaton("moore(" + a.name() + "," + b.name() + ")", a.alphabet(),
                           std::move(names), a.zero() * nb + b.zero(), std::move(plus),
                           std::move(action));
}

ForestAutomaton quotient(const ForestAutomaton& a, const Congruence& theta) {
    if (!is_congruence(a, theta))
        throw AutomatonError("quotient: partition is not a congruence of '" + a.name() + "'");
    const auto blocks = theta.blocks();
    const int n = theta.num_classes();
    std::vector<std::string> names(n);
    bool collision = false;
    std::set<std::string> used;
    for (int c = 0; c < n; ++c) {
        if (blocks[c].size() == 1) {
            names[c] = a.state_name(blocks[c][0]);
        } else {
            std::vector<std::string> parts;
            for (int q : blocks[c]) parts.push_back(a.state_name(q));
            names[c] = "{" + join(parts, ",") + "}";
        }
        if (!used.insert(names[c]).second) collision = true;
    }
    if (collision)
        for (int c = 0; c < n; ++c) names[c] = "c" + std::to_string(c);
    std::vector<std::vector<int>> plus(n, std::vector<int>(n));
    for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) plus[c][d] = theta.class_of(a.plus(blocks[c][0], blocks[d][0]));
    std::vector<std::vector<int>> action(a.alphabet().size(), std::vector<int>(n));
    for (int l = 0; l < a.alphabet().size(); ++l)
        for (int c = 0; c < n; ++c) action[l][c] = theta.class_of(a.action(l, blocks[c][0]));
    return ForestAutomaton("quot(" + a.name() + ")", a.alphabet(), std::move(names),
                           theta.class_of(a.zero()), std::move(plus), std::move(action));
}

bool is_homomorphism(const ForestAutomaton& a, const ForestAutomaton& b,
                     const std::vector<int>& map) {
    if (a.alphabet() != b.alphabet()) return false;
    if (static_cast<int>(map.size()) != a.num_states()) return false;
    for (int v : map)
        if (v < 0 || v >= b.num_states()) return false;
    if (map[a.zero()] != b.zero()) return false;
    for (int p = 0; p < a.num_states(); ++p)
        for (int q = 0; q < a.num_states(); ++q)
            if (map[a.plus(p, q)] != b.plus(map[p], map[q])) return false;
    for (int l = 0; l < a.alphabet().size(); ++l)
        for (int q = 0; q < a.num_states(); ++q)
            if (map[a.action(l, q)] != b.action(l, map[q])) return false;
    return true;
}

ForestAutomaton subautomaton(const ForestAutomaton& a, const std::vector<int>& states) {
    std::vector<int> sorted = states;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    const int n = static_cast<int>(sorted.size());
    std::vector<int> newindex(a.num_states(), -1);
    for (int i = 0; i < n; ++i) {
        if (sorted[i] < 0 || sorted[i] >= a.num_states())
            throw AutomatonError("subautomaton: state out of range");
        newindex[sorted[i]] = i;
    }
    if (newindex[a.zero()] == -1) throw AutomatonError("subautomaton: subset must contain zero");
    for (int p : sorted)
        for (int q : sorted)
            if (newindex[a.plus(p, q)] == -1)
                throw AutomatonError("subautomaton: subset not closed under plus (" +
                                     a.state_name(p) + "+" + a.state_name(q) + ")");
    for (int l = 0; l < a.alphabet().size(); ++l)
        for (int q : sorted)
            if (newindex[a.action(l, q)] == -1)
                throw AutomatonError("subautomaton: subset not closed under action " +
                                     a.alphabet().symbol(l));
    std::vector<std::string> names(n);
    for (int i = 0; i < n; ++i) names[i] = a.state_name(sorted[i]);
    std::vector<std::vector<int>> plus(n, std::vector<int>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) plus[i][j] = newindex[a.plus(sorted[i], sorted[j])];
    std::vector<std::vector<int>> action(a.alphabet().size(), std::vector<int>(n));
    for (int l = 0; l < a.alphabet().size(); ++l)
        for (int i = 0; i < n; ++i) action[l][i] = newindex[a.action(l, sorted[i])];
    return ForestAutomaton("sub(" + a.name() + ")", a.alphabet(), std::move(names),
                           newindex[a.zero()], std::move(plus), std::move(action));
}

std::vector<std::vector<int>> enumerate_subautomata(const ForestAutomaton& a, int max_states) {
    const int n = a.num_states();
    if (n > max_states)
        throw SizeGuardError("subautomaton enumeration guard: " + std::to_string(n) +
                             " states > " + std::to_string(max_states));
    std::vector<std::vector<int>> out;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (!(mask & (1u << a.zero()))) continue;
        bool closed = true;
        for (int p = 0; p < n && closed; ++p) {
            if (!(mask & (1u << p))) continue;
            for (int q = 0; q < n && closed; ++q) {
                if (!(mask & (1u << q))) continue;
                if (!(mask & (1u << a.plus(p, q)))) closed = false;
            }
            for (int l = 0; l < a.alphabet().size() && closed; ++l)
                if (!(mask & (1u << a.action(l, p)))) closed = false;
        }
        if (!closed) continue;
        std::vector<int> states;
        for (int q = 0; q < n; ++q)
            if (mask & (1u << q)) states.push_back(q);
        out.push_back(std::move(states));
    }
    return out;
}

ForestAutomaton build_powerset_automaton(const Alphabet& h) {
    const int k = h.size();
    if (k > 10) throw SizeGuardError("powerset automaton guard: " + std::to_string(k) + " symbols");
    const int n = 1 << k;
    std::vector<std::string> names(n);
    for (int mask = 0; mask < n; ++mask) {
        std::vector<std::string> parts;
        for (int i = 0; i < k; ++i)
            if (mask & (1 << i)) parts.push_back(h.symbol(i));
        names[mask] = "{" + join(parts, ",") + "}";
    }
    std::vector<std::vector<int>> plus(n, std::vector<int>(n));
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) plus[p][q] = p | q;
    std::vector<std::vector<int>> action(k, std::vector<int>(n));
    for (int i = 0; i < k; ++i)
        for (int q = 0; q < n; ++q) action[i][q] = q | (1 << i);
    return ForestAutomaton("powerset", h, std::move(names), 0, std::move(plus), std::move(action));
}

ForestAutomaton trivial_automaton(const Alphabet& alphabet, const std::string& name) {
    return ForestAutomaton(name, alphabet, {"q0"}, 0, {{0}},
                           std::vector<std::vector<int>>(alphabet.size(), {0}));
}

// --- Minimization --------------------------------------------------------

RecognizedLanguage minimize(const RecognizedLanguage& lang) {
    RecognizedLanguage conn = connected_part(lang);
    const auto& a = *conn.automaton;
    const int n = a.num_states();
    // Coarsest congruence saturating the final set, by partition refinement
    // with both-sided sum splitters (the monoid need not be commutative).
    std::vector<int> cls(n);
    for (int q = 0; q < n; ++q) cls[q] = conn.is_final(q) ? 1 : 0;
    for (;;) {
        std::map<std::vector<int>, int> sig_ids;
        std::vector<int> next(n);
        for (int q = 0; q < n; ++q) {
            std::vector<int> sig;
            sig.push_back(cls[q]);
            for (int r = 0; r < n; ++r) {
                sig.push_back(cls[a.plus(q, r)]);
                sig.push_back(cls[a.plus(r, q)]);
            }
            for (int l = 0; l < a.alphabet().size(); ++l) sig.push_back(cls[a.action(l, q)]);
            auto [it, inserted] = sig_ids.try_emplace(std::move(sig), static_cast<int>(sig_ids.size()));
            next[q] = it->second;
        }
        const bool changed = Congruence(next).class_map() != Congruence(cls).class_map();
        cls = std::move(next);
        if (!changed) break;
    }
    Congruence theta(cls);
    auto quot = std::make_shared<ForestAutomaton>(quotient(a, theta));
    std::vector<int> finals;
    for (int f : conn.finals) finals.push_back(theta.class_of(f));
    std::sort(finals.begin(), finals.end());
    finals.erase(std::unique(finals.begin(), finals.end()), finals.end());
    return RecognizedLanguage(quot, finals);
}

// --- Isomorphism ---------------------------------------------------------

namespace {

// Iterated invariant coloring (zero flagged, optional final flag), refined
// by the tables.  Both automata share one signature-to-id table per round so
// colors are comparable across them; used only to prune the backtracking
// search.
std::pair<std::vector<int>, std::vector<int>> iso_colors(const ForestAutomaton& a,
                                                         const ForestAutomaton& b,
                                                         const std::vector<bool>& aflag,
                                                         const std::vector<bool>& bflag) {
    const int n = a.num_states();
    auto initial = [](const ForestAutomaton& x, const std::vector<bool>& flag) {
        std::vector<int> color(x.num_states());
        for (int q = 0; q < x.num_states(); ++q)
            color[q] = (q == x.zero() ? 2 : 0) + (flag[q] ? 1 : 0);
        return color;
    };
    std::vector<int> ca = initial(a, aflag), cb = initial(b, bflag);
    auto signature = [](const ForestAutomaton& x, const std::vector<int>& color, int q) {
        std::vector<int> sig;
        sig.push_back(color[q]);
        std::vector<int> sums;
        const int n = x.num_states();
        for (int r = 0; r < n; ++r) {
            sums.push_back((color[x.plus(q, r)] * (n + 1) + color[r]) * 2);
            sums.push_back((color[x.plus(r, q)] * (n + 1) + color[r]) * 2 + 1);
        }
        std::sort(sums.begin(), sums.end());
        sig.insert(sig.end(), sums.begin(), sums.end());
        for (int l = 0; l < x.alphabet().size(); ++l) sig.push_back(color[x.action(l, q)]);
        return sig;
    };
    for (int round = 0; round < n; ++round) {
        std::map<std::vector<int>, int> ids;
        auto lookup = [&](std::vector<int> sig) {
            auto [it, inserted] = ids.try_emplace(std::move(sig), static_cast<int>(ids.size()));
            return it->second;
        };
        std::vector<int> na(n), nb(n);
        for (int q = 0; q < n; ++q) na[q] = lookup(signature(a, ca, q));
        for (int q = 0; q < n; ++q) nb[q] = lookup(signature(b, cb, q));
        if (na == ca && nb == cb) break;
        ca = std::move(na);
        cb = std::move(nb);
    }
    return {ca, cb};
}

std::optional<std::vector<int>> find_isomorphism(const ForestAutomaton& a, const ForestAutomaton& b,
                                                 const std::vector<bool>& aflag,
                                                 const std::vector<bool>& bflag) {
    if (a.alphabet() != b.alphabet())
        throw AutomatonError("isomorphism test requires a shared alphabet");
    const int n = a.num_states();
    if (n != b.num_states()) return std::nullopt;
    auto [ca, cb] = iso_colors(a, b, aflag, bflag);
    {
        auto sa = ca, sb = cb;
        std::sort(sa.begin(), sa.end());
        std::sort(sb.begin(), sb.end());
        if (sa != sb) return std::nullopt;
    }
    std::vector<int> map(n, -1);
    std::vector<bool> used(n, false);
    // Assign images in state order; prune with colors and local table checks.
    auto consistent = [&](int q, int img) {
        if (ca[q] != cb[img]) return false;
        if ((q == a.zero()) != (img == b.zero())) return false;
        return aflag[q] == bflag[img];
    };
    std::function<bool(int)> assign = [&](int q) -> bool {
        if (q == n) {
            // Full verification of the candidate bijection.
            if (map[a.zero()] != b.zero()) return false;
            for (int p = 0; p < n; ++p)
                for (int r = 0; r < n; ++r)
                    if (map[a.plus(p, r)] != b.plus(map[p], map[r])) return false;
            for (int l = 0; l < a.alphabet().size(); ++l)
                for (int p = 0; p < n; ++p)
                    if (map[a.action(l, p)] != b.action(l, map[p])) return false;
            return true;
        }
        for (int img = 0; img < n; ++img) {
            if (used[img] || !consistent(q, img)) continue;
            map[q] = img;
            used[img] = true;
            bool ok = true;
            // Partial checks against already-assigned states.
            for (int p = 0; p <= q && ok; ++p) {
                int s1 = a.plus(p, q), s2 = a.plus(q, p);
                if (s1 <= q && map[s1] != b.plus(map[p], map[q])) ok = false;
                if (ok && s2 <= q && map[s2] != b.plus(map[q], map[p])) ok = false;
            }
            for (int l = 0; l < a.alphabet().size() && ok; ++l) {
                int t = a.action(l, q);
                if (t <= q && map[t] != b.action(l, map[q])) ok = false;
            }
            if (ok && assign(q + 1)) return true;
            used[img] = false;
            map[q] = -1;
        }
        return false;
    };
    if (assign(0)) return map;
    return std::nullopt;
}

}  // namespace

std::optional<std::vector<int>> is_isomorphic(const ForestAutomaton& a, const ForestAutomaton& b) {
    std::vector<bool> aflag(a.num_states(), false), bflag(b.num_states(), false);
    return find_isomorphism(a, b, aflag, bflag);
}

std::optional<std::vector<int>> is_isomorphic(const RecognizedLanguage& a,
                                              const RecognizedLanguage& b) {
    std::vector<bool> aflag(a.automaton->num_states(), false);
    std::vector<bool> bflag(b.automaton->num_states(), false);
    for (int f : a.finals) aflag[f] = true;
    for (int f : b.finals) bflag[f] = true;
    return find_isomorphism(*a.automaton, *b.automaton, aflag, bflag);
}

// --- Text format ---------------------------------------------------------

namespace {

std::vector<std::string> tokenize_line(const std::string& line) {
    std::string stripped = line.substr(0, line.find('#'));
    std::istringstream in(stripped);
    std::vector<std::string> tokens;
    std::string tok;
    while (in >> tok) tokens.push_back(tok);
    return tokens;
}

std::vector<std::vector<std::string>> significant_lines(std::string_view text) {
    std::vector<std::vector<std::string>> out;
    std::string current;
    std::istringstream in{std::string(text)};
    while (std::getline(in, current)) {
        auto tokens = tokenize_line(current);
        if (!tokens.empty()) out.push_back(std::move(tokens));
    }
    return out;
}

}  // namespace

AutomatonFile parse_automaton_text(std::string_view text) {
    auto lines = significant_lines(text);
    size_t i = 0;
    auto expect_header = [&](const std::string& keyword) -> std::vector<std::string> {
        if (i >= lines.size() || lines[i][0] != keyword)
            throw ParseError("automaton file: expected '" + keyword + "' line");
        return lines[i++];
    };
    auto header = expect_header("automaton");
    if (header.size() != 2) throw ParseError("automaton file: 'automaton' line needs one name");
    std::string name = header[1];
    auto alpha_line = expect_header("alphabet:");
    Alphabet alphabet(std::vector<std::string>(alpha_line.begin() + 1, alpha_line.end()));
    auto states_line = expect_header("states:");
    std::vector<std::string> state_names(states_line.begin() + 1, states_line.end());
    if (state_names.empty()) throw ParseError("automaton file: no states");
    auto state_index = [&](const std::string& s) -> int {
        for (size_t k = 0; k < state_names.size(); ++k)
            if (state_names[k] == s) return static_cast<int>(k);
        throw ParseError("automaton file: unknown state '" + s + "'");
    };
    auto zero_line = expect_header("zero:");
    if (zero_line.size() != 2) throw ParseError("automaton file: 'zero:' line needs one state");
    int zero = state_index(zero_line[1]);
    const int n = static_cast<int>(state_names.size());
    std::vector<std::vector<int>> plus(n, std::vector<int>(n, -1));
    std::vector<std::vector<int>> action(alphabet.size(), std::vector<int>(n, -1));
    std::optional<std::vector<int>> finals;
    for (; i < lines.size(); ++i) {
        const auto& t = lines[i];
        if (t[0] == "plus:") {
            if (t.size() != 5 || t[3] != "->")
                throw ParseError("automaton file: malformed plus line (want 'plus: p q -> r')");
            int p = state_index(t[1]), q = state_index(t[2]), r = state_index(t[4]);
            if (plus[p][q] != -1)
                throw ParseError("automaton file: duplicate plus entry for (" + t[1] + "," + t[2] +
                                 ")");
            plus[p][q] = r;
        } else if (t[0] == "action:") {
            if (t.size() != 5 || t[3] != "->")
                throw ParseError("automaton file: malformed action line (want 'action: a q -> r')");
            auto l = alphabet.index_of(t[1]);
            if (!l) throw ParseError("automaton file: unknown letter '" + t[1] + "'");
            int q = state_index(t[2]), r = state_index(t[4]);
            if (action[*l][q] != -1)
                throw ParseError("automaton file: duplicate action entry for (" + t[1] + "," +
                                 t[2] + ")");
            action[*l][q] = r;
        } else if (t[0] == "finals:") {
            if (finals) throw ParseError("automaton file: duplicate finals line");
            finals.emplace();
            for (size_t k = 1; k < t.size(); ++k) finals->push_back(state_index(t[k]));
        } else {
            throw ParseError("automaton file: unexpected line starting with '" + t[0] + "'");
        }
    }
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            if (plus[p][q] == -1)
                throw ParseError("automaton file: missing plus entry for (" + state_names[p] + "," +
                                 state_names[q] + ")");
    for (int l = 0; l < alphabet.size(); ++l)
        for (int q = 0; q < n; ++q)
            if (action[l][q] == -1)
                throw ParseError("automaton file: missing action entry for (" +
                                 alphabet.symbol(l) + "," + state_names[q] + ")");
    AutomatonFile out;
    out.automaton = std::make_shared<ForestAutomaton>(std::move(name), std::move(alphabet),
                                                      std::move(state_names), zero, std::move(plus),
                                                      std::move(action));
    if (finals) {
        std::sort(finals->begin(), finals->end());
        finals->erase(std::unique(finals->begin(), finals->end()), finals->end());
    }
    out.finals = std::move(finals);
    return out;
}

std::string render_automaton_text(const ForestAutomaton& a,
                                  const std::optional<std::vector<int>>& finals) {
    std::ostringstream out;
    std::string name = a.name();
    std::replace_if(
        name.begin(), name.end(), [](unsigned char c) { return std::isspace(c) != 0; }, '_');
    out << "automaton " << name << "\n";
    out << "alphabet:";
    for (const auto& s : a.alphabet().symbols()) out << ' ' << s;
    out << "\nstates:";
    for (const auto& s : a.state_names()) out << ' ' << s;
    out << "\nzero: " << a.state_name(a.zero()) << "\n";
    for (int p = 0; p < a.num_states(); ++p)
        for (int q = 0; q < a.num_states(); ++q)
            out << "plus: " << a.state_name(p) << ' ' << a.state_name(q) << " -> "
                << a.state_name(a.plus(p, q)) << "\n";
    for (int l = 0; l < a.alphabet().size(); ++l)
        for (int q = 0; q < a.num_states(); ++q)
            out << "action: " << a.alphabet().symbol(l) << ' ' << a.state_name(q) << " -> "
                << a.state_name(a.action(l, q)) << "\n";
    if (finals) {
        std::vector<int> f = *finals;
        std::sort(f.begin(), f.end());
        out << "finals:";
        for (int q : f) out << ' ' << a.state_name(q);
        out << "\n";
    }
    return out.str();
}

ControlFunction parse_control_text(std::string_view text, const ForestAutomaton& a,
                                   const Alphabet& target) {
    ControlFunction alpha;
    alpha.table.assign(a.alphabet().size(), std::vector<int>(a.num_states(), -1));
    for (const auto& t : significant_lines(text)) {
        if (t.size() != 4 || t[2] != "->")
            throw ParseError("control file: malformed line (want '<letter> <state> -> <letter>')");
        auto l = a.alphabet().index_of(t[0]);
        if (!l) throw ParseError("control file: unknown letter '" + t[0] + "'");
        auto q = a.state_index(t[1]);
        if (!q) throw ParseError("control file: unknown state '" + t[1] + "'");
        auto d = target.index_of(t[3]);
        if (!d) throw ParseError("control file: unknown target letter '" + t[3] + "'");
        if (alpha.table[*l][*q] != -1)
            throw ParseError("control file: duplicate entry for (" + t[0] + "," + t[1] + ")");
        alpha.table[*l][*q] = *d;
    }
    for (int l = 0; l < a.alphabet().size(); ++l)
        for (int q = 0; q < a.num_states(); ++q)
            if (alpha.table[l][q] == -1)
                throw ParseError("control file: missing entry for (" + a.alphabet().symbol(l) +
                                 "," + a.state_name(q) + ")");
    return alpha;
}

std::string render_control_text(const ControlFunction& alpha, const ForestAutomaton& a,
                                const Alphabet& target) {
    std::ostringstream out;
    for (int l = 0; l < a.alphabet().size(); ++l)
        for (int q = 0; q < a.num_states(); ++q)
            out << a.alphabet().symbol(l) << ' ' << a.state_name(q) << " -> "
                << target.symbol(alpha.table.at(l).at(q)) << "\n";
    return out.str();
}

}  // namespace fl
