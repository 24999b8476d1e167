#include "fl/logic.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

#include "fl/fixtures.hpp"

namespace fl {

// --- Constructors --------------------------------------------------------

ForestFormulaPtr ff_top() {
    auto f = std::make_shared<ForestFormula>();
    f->kind = ForestFormula::Kind::Top;
    return f;
}

ForestFormulaPtr ff_bot() {
    auto f = std::make_shared<ForestFormula>();
    f->kind = ForestFormula::Kind::Bot;
    return f;
}

ForestFormulaPtr ff_not(ForestFormulaPtr x) {
    auto f = std::make_shared<ForestFormula>();
    f->kind = ForestFormula::Kind::Not;
    f->left = std::move(x);
    return f;
}

ForestFormulaPtr ff_and(ForestFormulaPtr l, ForestFormulaPtr r) {
    auto f = std::make_shared<ForestFormula>();
    f->kind = ForestFormula::Kind::And;
    f->left = std::move(l);
    f->right = std::move(r);
    return f;
}

ForestFormulaPtr ff_or(ForestFormulaPtr l, ForestFormulaPtr r) {
    // The paper's shorthand: x|y = !(!x & !y).
    return ff_not(ff_and(ff_not(std::move(l)), ff_not(std::move(r))));
}

ForestFormulaPtr ff_modal(RecognizedLanguage modality, std::string name,
                          std::vector<TreeFormulaPtr> family, ModalSugar sugar) {
    if (static_cast<int>(family.size()) != modality.automaton->alphabet().size())
        throw ParseError("modal formula: family must be total on the modality alphabet");
    auto f = std::make_shared<ForestFormula>();
    f->kind = ForestFormula::Kind::Modal;
    f->modality = std::move(modality);
    f->modality_name = std::move(name);
    f->family = std::move(family);
    f->sugar = sugar;
    return f;
}

ForestFormulaPtr ff_ef(TreeFormulaPtr phi) {
    return ff_modal(ef_language(), "EF", {tf_not(phi), phi}, ModalSugar::EF);
}

ForestFormulaPtr ff_af(TreeFormulaPtr phi) {
    return ff_modal(af_language(), "AF", {tf_not(phi), phi}, ModalSugar::AF);
}

TreeFormulaPtr tf_letter(int letter) {
    auto t = std::make_shared<TreeFormula>();
    t->kind = TreeFormula::Kind::Letter;
    t->letter = letter;
    return t;
}

TreeFormulaPtr tf_not(TreeFormulaPtr x) {
    auto t = std::make_shared<TreeFormula>();
    t->kind = TreeFormula::Kind::Not;
    t->left = std::move(x);
    return t;
}

TreeFormulaPtr tf_and(TreeFormulaPtr l, TreeFormulaPtr r) {
    auto t = std::make_shared<TreeFormula>();
    t->kind = TreeFormula::Kind::And;
    t->left = std::move(l);
    t->right = std::move(r);
    return t;
}

TreeFormulaPtr tf_or(TreeFormulaPtr l, TreeFormulaPtr r) {
    return tf_not(tf_and(tf_not(std::move(l)), tf_not(std::move(r))));
}

TreeFormulaPtr tf_embedded(ForestFormulaPtr f) {
    auto t = std::make_shared<TreeFormula>();
    t->kind = TreeFormula::Kind::Embedded;
    t->embedded = std::move(f);
    return t;
}

// --- Library -------------------------------------------------------------

ModalityLibrary ModalityLibrary::with_builtins() {
    ModalityLibrary lib;
    lib.add("EF", ef_language());
    lib.add("AF", af_language());
    return lib;
}

void ModalityLibrary::add(const std::string& name, RecognizedLanguage lang) {
    if (!entries_.emplace(name, std::move(lang)).second)
        throw ParseError("modality library: duplicate name '" + name + "'");
}

const RecognizedLanguage* ModalityLibrary::find(const std::string& name) const {
    auto it = entries_.find(name);
    return it == entries_.end() ? nullptr : &it->second;
}

// --- Parser --------------------------------------------------------------

namespace {

// Either-sort intermediate; exactly one side set.
struct AnyFormula {
    TreeFormulaPtr t;
    ForestFormulaPtr f;
};

AnyFormula any_tree(TreeFormulaPtr t) { return {std::move(t), nullptr}; }
AnyFormula any_forest(ForestFormulaPtr f) { return {nullptr, std::move(f)}; }

TreeFormulaPtr coerce_tree(const AnyFormula& x) {
    return x.t ? x.t : tf_embedded(x.f);
}

AnyFormula any_not(const AnyFormula& x) {
    return x.f ? any_forest(ff_not(x.f)) : any_tree(tf_not(x.t));
}

AnyFormula any_and(const AnyFormula& l, const AnyFormula& r) {
    if (l.f && r.f) return any_forest(ff_and(l.f, r.f));
    return any_tree(tf_and(coerce_tree(l), coerce_tree(r)));
}

AnyFormula any_or(const AnyFormula& l, const AnyFormula& r) {
    return any_not(any_and(any_not(l), any_not(r)));
}

AnyFormula any_implies(const AnyFormula& l, const AnyFormula& r) {
    // x -> y = !(x & !y).
    return any_not(any_and(l, any_not(r)));
}

class FormulaParser {
public:
    FormulaParser(std::string_view text, const Alphabet& alphabet, const ModalityLibrary& lib)
        : text_(text), alphabet_(alphabet), lib_(lib) {}

    AnyFormula parse() {
        AnyFormula out = parse_implies();
        skip_ws();
        if (pos_ != text_.size())
            throw ParseError("formula: unexpected trailing input at position " +
                             std::to_string(pos_));
        return out;
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool at(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    bool eat(char c) {
        if (!at(c)) return false;
        ++pos_;
        return true;
    }

    bool at_arrow() {
        skip_ws();
        return pos_ + 1 < text_.size() && text_[pos_] == '-' && text_[pos_ + 1] == '>';
    }

    void expect(char c, const char* what) {
        if (!eat(c))
            throw ParseError(std::string("formula: expected '") + c + "' (" + what +
                             ") at position " + std::to_string(pos_));
    }

    std::string ident() {
        skip_ws();
        std::string out;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                       text_[pos_] == '_'))
            out.push_back(text_[pos_++]);
        return out;
    }

    AnyFormula parse_implies() {
        AnyFormula l = parse_or();
        if (at_arrow()) {
            pos_ += 2;
            return any_implies(l, parse_implies());  // right associative
        }
        return l;
    }

    AnyFormula parse_or() {
        AnyFormula l = parse_and();
        while (at('|')) {
            ++pos_;
            l = any_or(l, parse_and());
        }
        return l;
    }

    AnyFormula parse_and() {
        AnyFormula l = parse_unary();
        while (at('&')) {
            ++pos_;
            l = any_and(l, parse_unary());
        }
        return l;
    }

    AnyFormula parse_unary() {
        if (eat('!')) return any_not(parse_unary());
        return parse_atom();
    }

    AnyFormula parse_atom() {
        if (eat('(')) {
            AnyFormula inner = parse_implies();
            expect(')', "to close group");
            return inner;
        }
        skip_ws();
        size_t start = pos_;
        std::string name = ident();
        if (name.empty())
            throw ParseError("formula: expected a formula at position " + std::to_string(pos_));
        if (at('[')) return parse_modal(name);
        if ((name == "EF" || name == "AF") && at('(')) {
            ++pos_;
            TreeFormulaPtr arg = coerce_tree(parse_implies());
            expect(')', "to close " + name);
            return any_forest(name == "EF" ? ff_ef(arg) : ff_af(arg));
        }
        if (name == "T") return any_forest(ff_top());
        if (name == "F") return any_forest(ff_bot());
        auto letter = alphabet_.index_of(name);
        if (!letter)
            throw ParseError("formula: unknown symbol '" + name + "' at position " +
                             std::to_string(start));
        return any_tree(tf_letter(*letter));
    }

    void expect(char c, const std::string& what) { expect(c, what.c_str()); }

    AnyFormula parse_modal(const std::string& display) {
        expect('[', "modality reference");
        std::string key = ident();
        expect(']', "to close modality reference");
        const RecognizedLanguage* lang = lib_.find(key);
        if (!lang) throw ParseError("formula: unknown modality '" + key + "'");
        const Alphabet& delta = lang->automaton->alphabet();
        expect('(', "family bindings");
        std::vector<TreeFormulaPtr> family(delta.size());
        std::vector<bool> bound(delta.size(), false);
        for (;;) {
            std::string sym = ident();
            auto d = delta.index_of(sym);
            if (!d) throw ParseError("formula: '" + sym + "' is not a letter of modality '" +
                                     key + "'");
            if (bound[*d]) throw ParseError("formula: duplicate binding for '" + sym + "'");
            skip_ws();
            if (!at_arrow()) throw ParseError("formula: expected '->' in family binding");
            pos_ += 2;
            family[*d] = coerce_tree(parse_implies());
            bound[*d] = true;
            if (eat(',')) continue;
            break;
        }
        expect(')', "to close family bindings");
        for (int d = 0; d < delta.size(); ++d)
            if (!bound[d])
                throw ParseError("formula: family misses binding for '" + delta.symbol(d) + "'");
        return any_forest(ff_modal(*lang, display + "[" + key + "]", std::move(family)));
    }

    std::string_view text_;
    const Alphabet& alphabet_;
    const ModalityLibrary& lib_;
    size_t pos_ = 0;
};

}  // namespace

ParsedFormula parse_formula(std::string_view text, const Alphabet& alphabet,
                            const ModalityLibrary& lib) {
    AnyFormula out = FormulaParser(text, alphabet, lib).parse();
    return ParsedFormula{alphabet, out.t, out.f};
}

// --- Rendering -----------------------------------------------------------

std::string render_formula(const TreeFormulaPtr& t, const Alphabet& alphabet) {
    switch (t->kind) {
        case TreeFormula::Kind::Letter:
            return alphabet.symbol(t->letter);
        case TreeFormula::Kind::Not:
            return "!" + render_formula(t->left, alphabet);
        case TreeFormula::Kind::And:
            return "(" + render_formula(t->left, alphabet) + " & " +
                   render_formula(t->right, alphabet) + ")";
        case TreeFormula::Kind::Embedded:
            return render_formula(t->embedded, alphabet);
    }
    return "?";
}

std::string render_formula(const ForestFormulaPtr& f, const Alphabet& alphabet) {
    switch (f->kind) {
        case ForestFormula::Kind::Top:
            return "T";
        case ForestFormula::Kind::Bot:
            return "F";
        case ForestFormula::Kind::Not:
            return "!" + render_formula(f->left, alphabet);
        case ForestFormula::Kind::And:
            return "(" + render_formula(f->left, alphabet) + " & " +
                   render_formula(f->right, alphabet) + ")";
        case ForestFormula::Kind::Modal: {
            if (f->sugar == ModalSugar::EF)
                return "EF(" + render_formula(f->family[1], alphabet) + ")";
            if (f->sugar == ModalSugar::AF)
                return "AF(" + render_formula(f->family[1], alphabet) + ")";
            std::ostringstream out;
            out << (f->modality_name.empty() ? "M[?]" : f->modality_name) << "(";
            const Alphabet& delta = f->modality.automaton->alphabet();
            for (int d = 0; d < delta.size(); ++d) {
                if (d > 0) out << ", ";
                out << delta.symbol(d) << " -> " << render_formula(f->family[d], alphabet);
            }
            out << ")";
            return out.str();
        }
    }
    return "?";
}

// --- Semantics -----------------------------------------------------------

namespace {

// Shared recursion for the two evaluation modes.
bool sat_tree(const Tree& t, const TreeFormulaPtr& phi, bool direct);
bool sat_forest(const Forest& s, const ForestFormulaPtr& phi, bool direct);

Forest characteristic(const Forest& s, const std::vector<TreeFormulaPtr>& family, bool direct) {
    Forest out;
    out.trees.reserve(s.trees.size());
    const int last = static_cast<int>(family.size()) - 1;
    for (const auto& t : s.trees) {
        int label = last;
        for (int d = 0; d <= last; ++d)
            if (sat_tree(t, family[d], direct)) {
                label = d;
                break;
            }
        Tree u;
        u.label = label;
        u.children = characteristic(t.children, family, direct);
        out.trees.push_back(std::move(u));
    }
    return out;
}

bool sat_tree(const Tree& t, const TreeFormulaPtr& phi, bool direct) {
    switch (phi->kind) {
        case TreeFormula::Kind::Letter:
            return t.label == phi->letter;
        case TreeFormula::Kind::Not:
            return !sat_tree(t, phi->left, direct);
        case TreeFormula::Kind::And:
            return sat_tree(t, phi->left, direct) && sat_tree(t, phi->right, direct);
        case TreeFormula::Kind::Embedded:
            return sat_forest(Forest{{t}}, phi->embedded, direct);
    }
    return false;
}

// Direct clause: some subtree of s (any node) satisfies phi.
bool ef_direct(const Forest& s, const TreeFormulaPtr& phi) {
    for (const auto& t : s.trees) {
        if (sat_tree(t, phi, true)) return true;
        if (ef_direct(t.children, phi)) return true;
    }
    return false;
}

// Direct clause: s nonempty, and every tree satisfies phi or recursively
// its child forest satisfies AF(phi).
bool af_direct(const Forest& s, const TreeFormulaPtr& phi) {
    if (s.empty()) return false;
    for (const auto& t : s.trees)
        if (!sat_tree(t, phi, true) && !af_direct(t.children, phi)) return false;
    return true;
}

bool sat_forest(const Forest& s, const ForestFormulaPtr& phi, bool direct) {
    switch (phi->kind) {
        case ForestFormula::Kind::Top:
            return true;
        case ForestFormula::Kind::Bot:
            return false;
        case ForestFormula::Kind::Not:
            return !sat_forest(s, phi->left, direct);
        case ForestFormula::Kind::And:
            return sat_forest(s, phi->left, direct) && sat_forest(s, phi->right, direct);
        case ForestFormula::Kind::Modal:
            if (direct && phi->sugar == ModalSugar::EF) return ef_direct(s, phi->family[1]);
            if (direct && phi->sugar == ModalSugar::AF) return af_direct(s, phi->family[1]);
            return member(phi->modality, characteristic(s, phi->family, direct));
    }
    return false;
}

}  // namespace

Forest characteristic_forest(const Forest& s, const std::vector<TreeFormulaPtr>& family) {
    if (family.empty()) throw ParseError("characteristic_forest: empty family");
    return characteristic(s, family, false);
}

bool satisfies(const Tree& t, const TreeFormulaPtr& phi) { return sat_tree(t, phi, false); }
bool satisfies(const Forest& s, const ForestFormulaPtr& phi) { return sat_forest(s, phi, false); }
bool satisfies_direct(const Tree& t, const TreeFormulaPtr& phi) { return sat_tree(t, phi, true); }
bool satisfies_direct(const Forest& s, const ForestFormulaPtr& phi) {
    return sat_forest(s, phi, true);
}

// --- Transformations -----------------------------------------------------

std::vector<TreeFormulaPtr> determinize_family(const std::vector<TreeFormulaPtr>& family) {
    const int n = static_cast<int>(family.size());
    std::vector<TreeFormulaPtr> out(n);
    for (int b = 0; b < n; ++b) {
        // Conjuncts: phi_b (except for the last symbol) plus the negation
        // of every earlier formula (every other formula for the last).
        std::vector<TreeFormulaPtr> conjuncts;
        if (b + 1 < n) conjuncts.push_back(family[b]);
        for (int c = 0; c < n; ++c)
            if (c < b || (b == n - 1 && c != b)) conjuncts.push_back(tf_not(family[c]));
        if (conjuncts.empty()) {
            out[b] = tf_embedded(ff_top());
        } else {
            TreeFormulaPtr acc = conjuncts[0];
            for (size_t i = 1; i < conjuncts.size(); ++i) acc = tf_and(acc, conjuncts[i]);
            out[b] = acc;
        }
    }
    return out;
}

TreeFormulaPtr substitute(const TreeFormulaPtr& phi, const std::vector<TreeFormulaPtr>& sigma) {
    switch (phi->kind) {
        case TreeFormula::Kind::Letter:
            return sigma.at(phi->letter);
        case TreeFormula::Kind::Not:
            return tf_not(substitute(phi->left, sigma));
        case TreeFormula::Kind::And:
            return tf_and(substitute(phi->left, sigma), substitute(phi->right, sigma));
        case TreeFormula::Kind::Embedded:
            return tf_embedded(substitute(phi->embedded, sigma));
    }
    return phi;
}

ForestFormulaPtr substitute(const ForestFormulaPtr& phi, const std::vector<TreeFormulaPtr>& sigma) {
    switch (phi->kind) {
        case ForestFormula::Kind::Top:
        case ForestFormula::Kind::Bot:
            return phi;
        case ForestFormula::Kind::Not:
            return ff_not(substitute(phi->left, sigma));
        case ForestFormula::Kind::And:
            return ff_and(substitute(phi->left, sigma), substitute(phi->right, sigma));
        case ForestFormula::Kind::Modal: {
            std::vector<TreeFormulaPtr> family;
            family.reserve(phi->family.size());
            for (const auto& member : phi->family) family.push_back(substitute(member, sigma));
            // Substitution keeps the {!psi, psi} sugar shape intact, so the
            // direct EF/AF semantics remain applicable.
            return ff_modal(phi->modality, phi->modality_name, std::move(family), phi->sugar);
        }
    }
    return phi;
}

ForestFormulaPtr substitute(const ForestFormulaPtr& phi,
                            const std::vector<ForestFormulaPtr>& sigma) {
    std::vector<TreeFormulaPtr> embedded;
    embedded.reserve(sigma.size());
    for (const auto& f : sigma) embedded.push_back(tf_embedded(f));
    return substitute(phi, embedded);
}

ForestFormulaPtr inverse_literal_formula(const ForestFormulaPtr& phi, const Alphabet& sigma,
                                         const std::vector<int>& h) {
    if (static_cast<int>(h.size()) != sigma.size())
        throw ParseError("inverse_literal_formula: h must be total on the source alphabet");
    // For each target letter d, the disjunction of its preimages.
    int delta_size = 0;
    for (int d : h) delta_size = std::max(delta_size, d + 1);
    std::vector<TreeFormulaPtr> subst;
    auto preimage_formula = [&](int d) -> TreeFormulaPtr {
        TreeFormulaPtr acc;
        for (int a = 0; a < sigma.size(); ++a) {
            if (h[a] != d) continue;
            acc = acc ? tf_or(acc, tf_letter(a)) : tf_letter(a);
        }
        return acc ? acc : tf_embedded(ff_bot());  // empty disjunction
    };
    // sigma entries are indexed by the letters of phi's alphabet Delta; we
    // can't see Delta's size here beyond the largest h-image, so collect
    // lazily: substitute() only indexes letters that occur in phi.
    std::vector<TreeFormulaPtr> table;
    int needed = std::max(delta_size, 1);
    table.reserve(needed);
    for (int d = 0; d < needed; ++d) table.push_back(preimage_formula(d));
    // Letters of phi beyond the h-image have empty preimages; pad the
    // table up to the largest letter index occurring in phi.
    std::function<int(const TreeFormulaPtr&)> max_tf;
    std::function<int(const ForestFormulaPtr&)> max_ff;
    max_tf = [&](const TreeFormulaPtr& t) -> int {
        switch (t->kind) {
            case TreeFormula::Kind::Letter:
                return t->letter;
            case TreeFormula::Kind::Not:
                return max_tf(t->left);
            case TreeFormula::Kind::And:
                return std::max(max_tf(t->left), max_tf(t->right));
            case TreeFormula::Kind::Embedded:
                return max_ff(t->embedded);
        }
        return -1;
    };
    max_ff = [&](const ForestFormulaPtr& f) -> int {
        switch (f->kind) {
            case ForestFormula::Kind::Top:
            case ForestFormula::Kind::Bot:
                return -1;
            case ForestFormula::Kind::Not:
                return max_ff(f->left);
            case ForestFormula::Kind::And:
                return std::max(max_ff(f->left), max_ff(f->right));
            case ForestFormula::Kind::Modal: {
                int m = -1;
                for (const auto& member : f->family) m = std::max(m, max_tf(member));
                return m;
            }
        }
        return -1;
    };
    for (int d = static_cast<int>(table.size()); d <= max_ff(phi); ++d)
        table.push_back(tf_embedded(ff_bot()));
    return substitute(phi, table);
}

// --- Compilation ---------------------------------------------------------

namespace {

RecognizedLanguage make_lang(ForestAutomaton a, std::vector<int> finals) {
    return RecognizedLanguage(std::make_shared<ForestAutomaton>(std::move(a)), std::move(finals));
}

RecognizedLanguage complement(const RecognizedLanguage& lang) {
    std::vector<int> finals;
    for (int q = 0; q < lang.automaton->num_states(); ++q)
        if (!lang.is_final(q)) finals.push_back(q);
    return RecognizedLanguage(lang.automaton, std::move(finals));
}

RecognizedLanguage intersect(const RecognizedLanguage& l, const RecognizedLanguage& r) {
    ForestAutomaton p = direct_product(*l.automaton, *r.automaton);
    const int nr = r.automaton->num_states();
    std::vector<int> finals;
    for (int f1 : l.finals)
        for (int f2 : r.finals) finals.push_back(f1 * nr + f2);
    return make_lang(std::move(p), std::move(finals));
}

// Recognizer of one-tree forests whose root is `letter`: carrier
// {init, root, other} with init the unit and any mixed/nonunit sum = other.
RecognizedLanguage letter_recognizer(int letter, const Alphabet& sigma) {
    std::vector<std::vector<int>> plus{{0, 1, 2}, {1, 1, 2}, {2, 2, 2}};
    std::vector<std::vector<int>> action(sigma.size());
    for (int b = 0; b < sigma.size(); ++b)
        action[b] = std::vector<int>(3, b == letter ? 1 : 2);
    return make_lang(ForestAutomaton("letter_" + sigma.symbol(letter), sigma,
                                     {"init", "root", "other"}, 0, std::move(plus),
                                     std::move(action)),
                     {1});
}

}  // namespace

RecognizedLanguage compile_tree(const TreeFormulaPtr& phi, const Alphabet& sigma) {
    switch (phi->kind) {
        case TreeFormula::Kind::Letter:
            return minimize(letter_recognizer(phi->letter, sigma));
        case TreeFormula::Kind::Not:
            return minimize(complement(compile_tree(phi->left, sigma)));
        case TreeFormula::Kind::And:
            return minimize(
                intersect(compile_tree(phi->left, sigma), compile_tree(phi->right, sigma)));
        case TreeFormula::Kind::Embedded:
            return compile(phi->embedded, sigma);
    }
    throw AutomatonError("compile_tree: unreachable");
}

RecognizedLanguage compile(const ForestFormulaPtr& phi, const Alphabet& sigma) {
    switch (phi->kind) {
        case ForestFormula::Kind::Top:
            return make_lang(trivial_automaton(sigma, "top"), {0});
        case ForestFormula::Kind::Bot:
            return make_lang(trivial_automaton(sigma, "bot"), {});
        case ForestFormula::Kind::Not:
            return minimize(complement(compile(phi->left, sigma)));
        case ForestFormula::Kind::And:
            return minimize(intersect(compile(phi->left, sigma), compile(phi->right, sigma)));
        case ForestFormula::Kind::Modal: {
            // Compile the family, take the product, and control the
            // modality automaton by first-final-index-else-last evaluated
            // at the updated product state.
            const int k = static_cast<int>(phi->family.size());
            std::vector<RecognizedLanguage> langs;
            std::vector<AutomatonPtr> factors;
            langs.reserve(k);
            for (const auto& member : phi->family) {
                langs.push_back(compile_tree(member, sigma));
                factors.push_back(langs.back().automaton);
            }
            ForestAutomaton prod = direct_product(factors);
            const ForestAutomaton& right = *phi->modality.automaton;
            ControlFunction alpha;
            alpha.table.assign(sigma.size(), std::vector<int>(prod.num_states(), 0));
            for (int idx = 0; idx < prod.num_states(); ++idx) {
                // Decode the mixed-radix product state.
                std::vector<int> comps(k);
                int rest = idx;
                for (int i = k - 1; i >= 0; --i) {
                    comps[i] = rest % factors[i]->num_states();
                    rest /= factors[i]->num_states();
                }
                int chosen = k - 1;
                for (int i = 0; i < k; ++i)
                    if (langs[i].is_final(comps[i])) {
                        chosen = i;
                        break;
                    }
                for (int l = 0; l < sigma.size(); ++l) alpha.table[l][idx] = chosen;
            }
            ForestAutomaton m = moore_product(prod, right, alpha);
            std::vector<int> finals;
            for (int p = 0; p < prod.num_states(); ++p)
                for (int f : phi->modality.finals) finals.push_back(p * right.num_states() + f);
            return minimize(make_lang(std::move(m), std::move(finals)));
        }
    }
    throw AutomatonError("compile: unreachable");
}

}  // namespace fl
