#pragma once

// Unranked, sibling-ordered forests over a finite alphabet, plus the text
// grammar used by all tools:
//
//   forest := "()" | tree ("+" tree)*
//   tree   := symbol | symbol "(" forest ")"
//   symbol := [A-Za-z0-9_]+
//
// Whitespace is permitted between tokens.  "a", "a()" and "a(())" denote the
// same singleton tree with no children.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fl {

// Raised on malformed text input (forest, automaton, formula, certificate).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// A finite, ordered alphabet.  Symbol order is declaration order and is
// significant: family bindings, control tables and serialized automata all
// iterate letters in this order.
class Alphabet {
public:
    Alphabet() = default;
    explicit Alphabet(std::vector<std::string> symbols);

    int size() const { return static_cast<int>(symbols_.size()); }
    const std::string& symbol(int i) const { return symbols_.at(i); }
    const std::vector<std::string>& symbols() const { return symbols_; }
    std::optional<int> index_of(std::string_view symbol) const;
    bool contains(std::string_view symbol) const { return index_of(symbol).has_value(); }

    bool operator==(const Alphabet& other) const { return symbols_ == other.symbols_; }
    bool operator!=(const Alphabet& other) const { return !(*this == other); }

    // True iff `token` is a well-formed symbol ([A-Za-z0-9_]+).
    static bool valid_symbol(std::string_view token);

private:
    std::vector<std::string> symbols_;
};

struct Tree;

// A forest is a (possibly empty) ordered sequence of trees.
struct Forest {
    std::vector<Tree> trees;

    bool empty() const { return trees.empty(); }
    int size() const { return static_cast<int>(trees.size()); }
    bool operator==(const Forest& other) const;
};

// A tree is a root label (index into the alphabet) over a forest of children.
struct Tree {
    int label = 0;
    Forest children;

    bool operator==(const Tree& other) const {
        return label == other.label && children == other.children;
    }
};

inline bool Forest::operator==(const Forest& other) const { return trees == other.trees; }

// Horizontal concatenation: s + t is the forest listing s's trees then t's.
Forest concat(const Forest& s, const Forest& t);
inline Forest operator+(const Forest& s, const Forest& t) { return concat(s, t); }

// Depth of the empty forest is 0; a leaf tree has depth 1.
int depth(const Forest& forest);
int depth(const Tree& tree);

// Total number of nodes.
int node_count(const Forest& forest);

// Parses `text` against `alphabet`.  Throws ParseError with the offending
// position on syntax errors, and names the symbol on alphabet misses.
Forest parse_forest(std::string_view text, const Alphabet& alphabet);

// Renders in the canonical form parsed back by parse_forest: the empty
// forest is "()", childless trees print without parentheses, siblings are
// joined by "+" with no whitespace.  parse_forest(render_forest(s)) == s.
std::string render_forest(const Forest& forest, const Alphabet& alphabet);
std::string render_tree(const Tree& tree, const Alphabet& alphabet);

// Applies a literal relabeling h (source letter index -> target letter
// index) to every node.  `h` must be total on the source alphabet.
Forest relabel(const Forest& forest, const std::vector<int>& h);

// Deterministic pseudo-random forest generator used by the property-test
// harnesses.  The same (alphabet size, max_depth, max_arity, seed) always
// yields the same forest on every platform.  Node count is bounded by
// max_arity^max_depth; depth(result) <= max_depth.
Forest random_forest(const Alphabet& alphabet, int max_depth, int max_arity, std::uint64_t seed);

// Splittable counter-based PRNG (splitmix64).  Exposed so tests can derive
// independent streams from one seed.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();
    // Uniform value in [0, bound), bound >= 1.
    std::uint64_t next_below(std::uint64_t bound);

private:
    std::uint64_t state_;
};

}  // namespace fl
