#include "fl/forest.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace fl {

namespace {

bool symbol_char(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
}

}  // namespace

bool Alphabet::valid_symbol(std::string_view token) {
    if (token.empty()) return false;
    return std::all_of(token.begin(), token.end(), symbol_char);
}

Alphabet::Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
    if (symbols_.empty()) throw ParseError("alphabet must be nonempty");
    for (const auto& s : symbols_) {
        if (!valid_symbol(s))
            throw ParseError("invalid alphabet symbol '" + s + "' (expected [A-Za-z0-9_]+)");
    }
    for (size_t i = 0; i < symbols_.size(); ++i)
        for (size_t j = i + 1; j < symbols_.size(); ++j)
            if (symbols_[i] == symbols_[j])
                throw ParseError("duplicate alphabet symbol '" + symbols_[i] + "'");
}

std::optional<int> Alphabet::index_of(std::string_view symbol) const {
    for (size_t i = 0; i < symbols_.size(); ++i)
        if (symbols_[i] == symbol) return static_cast<int>(i);
    return std::nullopt;
}

Forest concat(const Forest& s, const Forest& t) {
    Forest out = s;
    out.trees.insert(out.trees.end(), t.trees.begin(), t.trees.end());
    return out;
}

int depth(const Tree& tree) { return 1 + depth(tree.children); }

int depth(const Forest& forest) {
    int d = 0;
    for (const auto& t : forest.trees) d = std::max(d, depth(t));
    return d;
}

int node_count(const Forest& forest) {
    int n = 0;
    for (const auto& t : forest.trees) n += 1 + node_count(t.children);
    return n;
}

namespace {

// Recursive-descent parser over a raw character cursor; positions in error
// messages are 0-based byte offsets into the input.
class ForestParser {
public:
    ForestParser(std::string_view text, const Alphabet& alphabet)
        : text_(text), alphabet_(alphabet) {}

    Forest parse() {
        skip_ws();
        Forest f = parse_forest();
        skip_ws();
        if (pos_ != text_.size())
            throw ParseError("syntax error at position " + std::to_string(pos_) +
                             ": unexpected trailing input");
        return f;
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool at(char c) const { return pos_ < text_.size() && text_[pos_] == c; }

    Forest parse_forest() {
        // "()" is the empty forest; it is also accepted as an empty child
        // list, so "a(())" == "a()" == "a".
        if (at('(')) {
            size_t mark = pos_;
            ++pos_;
            skip_ws();
            if (at(')')) {
                ++pos_;
                return Forest{};
            }
            // Not "()": a forest cannot otherwise start with '('.
            throw ParseError("syntax error at position " + std::to_string(mark) +
                             ": expected \"()\" or a tree");
        }
        Forest f;
        f.trees.push_back(parse_tree());
        skip_ws();
        while (at('+')) {
            ++pos_;
            skip_ws();
            f.trees.push_back(parse_tree());
            skip_ws();
        }
        return f;
    }

    Tree parse_tree() {
        size_t start = pos_;
        std::string sym;
        while (pos_ < text_.size() && symbol_char(text_[pos_])) sym.push_back(text_[pos_++]);
        if (sym.empty())
            throw ParseError("syntax error at position " + std::to_string(start) +
                             ": expected a symbol");
        auto idx = alphabet_.index_of(sym);
        if (!idx) {
            std::ostringstream msg;
            msg << "unknown symbol '" << sym << "' at position " << start << " (alphabet:";
            for (const auto& s : alphabet_.symbols()) msg << ' ' << s;
            msg << ")";
            throw ParseError(msg.str());
        }
        Tree t;
        t.label = *idx;
        skip_ws();
        if (at('(')) {
            ++pos_;
            skip_ws();
            if (at(')')) {
                ++pos_;  // "a()" -- no children
            } else {
                t.children = parse_forest();
                skip_ws();
                if (!at(')'))
                    throw ParseError("syntax error at position " + std::to_string(pos_) +
                                     ": expected ')'");
                ++pos_;
            }
        }
        return t;
    }

    std::string_view text_;
    const Alphabet& alphabet_;
    size_t pos_ = 0;
};

}  // namespace

Forest parse_forest(std::string_view text, const Alphabet& alphabet) {
    return ForestParser(text, alphabet).parse();
}

std::string render_tree(const Tree& tree, const Alphabet& alphabet) {
    std::string out = alphabet.symbol(tree.label);
    if (!tree.children.empty()) {
        out += '(';
        out += render_forest(tree.children, alphabet);
        out += ')';
    }
    return out;
}

std::string render_forest(const Forest& forest, const Alphabet& alphabet) {
    if (forest.empty()) return "()";
    std::string out;
    for (size_t i = 0; i < forest.trees.size(); ++i) {
        if (i > 0) out += '+';
        out += render_tree(forest.trees[i], alphabet);
    }
    return out;
}

Forest relabel(const Forest& forest, const std::vector<int>& h) {
    Forest out;
    out.trees.reserve(forest.trees.size());
    for (const auto& t : forest.trees) {
        Tree u;
        u.label = h.at(static_cast<size_t>(t.label));
        u.children = relabel(t.children, h);
        out.trees.push_back(std::move(u));
    }
    return out;
}

std::uint64_t SplitMix64::next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t SplitMix64::next_below(std::uint64_t bound) {
    // Modulo bias is irrelevant for test-data generation.
    return next() % bound;
}

namespace {

Forest random_forest_at(const Alphabet& alphabet, int depth_left, int max_arity, SplitMix64& rng) {
    Forest f;
    if (depth_left <= 0) return f;
    // Arity 0 (the empty forest) is a deliberate outcome so empty children
    // and the empty forest itself stay well-represented in test corpora.
    int arity = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(max_arity) + 1));
    for (int i = 0; i < arity; ++i) {
        Tree t;
        t.label = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(alphabet.size())));
        t.children = random_forest_at(alphabet, depth_left - 1, max_arity, rng);
        f.trees.push_back(std::move(t));
    }
    return f;
}

}  // namespace

Forest random_forest(const Alphabet& alphabet, int max_depth, int max_arity, std::uint64_t seed) {
    SplitMix64 rng(seed);
    return random_forest_at(alphabet, max_depth, max_arity, rng);
}

}  // namespace fl
