#include "fl/enumerate.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace fl {

namespace {

using Table = std::vector<std::vector<int>>;

// Checks every fully-assigned associativity instance touching the table
// (entries of -1 are still open).
bool partially_associative(const Table& t, int n) {
    for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) {
            const int xy = t[x][y];
            if (xy < 0) continue;
            for (int z = 0; z < n; ++z) {
                const int yz = t[y][z];
                if (yz < 0) continue;
                const int left = t[xy][z];
                const int right = t[x][yz];
                if (left >= 0 && right >= 0 && left != right) return false;
            }
        }
    }
    return true;
}

// Lexicographically least relabeling of the table over permutations that
// fix the unit state 0.
std::vector<int> canonical_form(const Table& t, int n) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> best;
    do {
        std::vector<int> flat;
        flat.reserve(n * n);
        std::vector<int> inverse(n);
        for (int i = 0; i < n; ++i) inverse[perm[i]] = i;
        for (int x = 0; x < n; ++x) {
            for (int y = 0; y < n; ++y) flat.push_back(perm[t[inverse[x]][inverse[y]]]);
        }
        if (best.empty() || flat < best) best = std::move(flat);
    } while (std::next_permutation(perm.begin() + 1, perm.end()));
    return best;
}

void search_tables(Table& t, int n, const std::vector<std::pair<int, int>>& slots,
                   std::size_t next, std::vector<Table>& out) {
    if (next == slots.size()) {
        std::vector<int> flat;
        flat.reserve(n * n);
        for (int x = 0; x < n; ++x) {
            for (int y = 0; y < n; ++y) flat.push_back(t[x][y]);
        }
        if (flat == canonical_form(t, n)) out.push_back(t);
        return;
    }
    const auto [x, y] = slots[next];
    for (int v = 0; v < n; ++v) {
        t[x][y] = v;
        t[y][x] = v;
        if (partially_associative(t, n)) search_tables(t, n, slots, next + 1, out);
    }
    t[x][y] = -1;
    t[y][x] = -1;
}

bool leq(const Table& plus, int x, int y) { return plus[x][y] == x; }

// Per-letter action candidates compatible with the law set on a fixed
// semilattice.
std::vector<std::vector<int>> action_candidates(const Table& plus, int n, LetterLaws laws) {
    int bot = 0;
    for (int q = 1; q < n; ++q) bot = plus[bot][q];

    std::vector<std::vector<int>> out;
    std::vector<int> f(n, 0);
    auto admissible_value = [&](int x, int v) {
        if (laws == LetterLaws::EF) {
            return leq(plus, v, x);  // ax <= x
        }
        if (v == 0) return false;                       // positivity
        if (x != 0 && !leq(plus, x, v)) return false;   // p <= ap on the core
        return true;
    };
    auto emit = [&]() {
        for (int x = 0; x < n; ++x) {
            if (f[f[x]] != f[x]) return;  // letter idempotence
        }
        if (laws == LetterLaws::AF) {
            if (f[0] != f[bot]) return;  // a.0 = a.bottom
            for (int p = 1; p < n; ++p) {
                for (int q = 1; q < n; ++q) {
                    if (leq(plus, p, q) && leq(plus, q, f[p]) && f[p] != f[q]) return;
                }
            }
        }
        out.push_back(f);
    };
    auto rec = [&](auto&& self, int x) -> void {
        if (x == n) {
            emit();
            return;
        }
        for (int v = 0; v < n; ++v) {
            if (!admissible_value(x, v)) continue;
            f[x] = v;
            self(self, x + 1);
        }
    };
    rec(rec, 0);
    return out;
}

}  // namespace

std::vector<std::vector<std::vector<int>>> enumerate_semilattice_tables(int n) {
    Table t(n, std::vector<int>(n, -1));
    for (int x = 0; x < n; ++x) {
        t[0][x] = x;  // unit
        t[x][0] = x;
        t[x][x] = x;  // idempotent
    }
    std::vector<std::pair<int, int>> slots;
    for (int x = 1; x < n; ++x) {
        for (int y = x + 1; y < n; ++y) slots.emplace_back(x, y);
    }
    std::vector<Table> out;
    search_tables(t, n, slots, 0, out);
    return out;
}

std::vector<ForestAutomaton> enumerate_equation_automata(int max_states,
                                                         const Alphabet& alphabet,
                                                         LetterLaws laws) {
    std::vector<ForestAutomaton> kept;
    const int num_letters = alphabet.size();
    for (int n = 1; n <= max_states; ++n) {
        std::vector<std::string> names(n);
        for (int q = 0; q < n; ++q) names[q] = std::to_string(q);
        std::vector<ForestAutomaton> kept_n;
        for (const Table& plus : enumerate_semilattice_tables(n)) {
            const auto pool = action_candidates(plus, n, laws);
            if (pool.empty()) continue;
            std::vector<std::size_t> pick(num_letters, 0);
            while (true) {
                std::vector<std::vector<int>> action(num_letters);
                for (int l = 0; l < num_letters; ++l) action[l] = pool[pick[l]];
                ForestAutomaton a("m" + std::to_string(n) + "_" + std::to_string(kept_n.size()),
                                  alphabet, names, 0, plus, action);
                if (connected_part(a).num_states() == n) {
                    const bool duplicate =
                        std::any_of(kept_n.begin(), kept_n.end(), [&](const ForestAutomaton& b) {
                            return is_isomorphic(a, b).has_value();
                        });
                    if (!duplicate) kept_n.push_back(std::move(a));
                }
                int l = num_letters - 1;
                while (l >= 0 && pick[l] + 1 == pool.size()) {
                    pick[l] = 0;
                    --l;
                }
                if (l < 0) break;
                ++pick[l];
            }
        }
        for (auto& a : kept_n) kept.push_back(std::move(a));
    }
    return kept;
}

}  // namespace fl
