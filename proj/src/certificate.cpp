#include "fl/certificate.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "fl/fixtures.hpp"

namespace fl {

// --- Constructors --------------------------------------------------------

namespace {

std::shared_ptr<Certificate> make_node(Certificate::Kind kind) {
    auto c = std::make_shared<Certificate>();
    c->kind = kind;
    return c;
}

}  // namespace

CertificatePtr cert_base_ef() { return make_node(Certificate::Kind::BaseEF); }

CertificatePtr cert_rename(const Alphabet& target, std::vector<int> map, CertificatePtr inner) {
    auto c = make_node(Certificate::Kind::Rename);
    c->rename_symbols = target.symbols();
    c->rename_map = std::move(map);
    c->children = {std::move(inner)};
    return c;
}

CertificatePtr cert_direct_product(std::vector<CertificatePtr> inners) {
    auto c = make_node(Certificate::Kind::DirectProduct);
    c->children = std::move(inners);
    return c;
}

CertificatePtr cert_moore(CertificatePtr left, CertificatePtr right, ControlFunction control) {
    auto c = make_node(Certificate::Kind::Moore);
    c->control = std::move(control);
    c->children = {std::move(left), std::move(right)};
    return c;
}

CertificatePtr cert_connected(CertificatePtr inner) {
    auto c = make_node(Certificate::Kind::Connected);
    c->children = {std::move(inner)};
    return c;
}

CertificatePtr cert_quotient(std::vector<std::vector<std::string>> blocks, CertificatePtr inner) {
    auto c = make_node(Certificate::Kind::Quotient);
    c->blocks = std::move(blocks);
    c->children = {std::move(inner)};
    return c;
}

CertificatePtr cert_divide(AutomatonPtr target, CertificatePtr inner) {
    auto c = make_node(Certificate::Kind::Divide);
    c->target = std::move(target);
    c->children = {std::move(inner)};
    return c;
}

CertificatePtr cert_generator(AutomatonPtr a) {
    auto c = make_node(Certificate::Kind::Generator);
    c->target = std::move(a);
    return c;
}

// --- Evaluation and verification ------------------------------------------

namespace {

const char* kind_keyword(Certificate::Kind k) {
    switch (k) {
        case Certificate::Kind::BaseEF:
            return "base-ef";
        case Certificate::Kind::Rename:
            return "rename";
        case Certificate::Kind::DirectProduct:
            return "direct-product";
        case Certificate::Kind::Moore:
            return "moore";
        case Certificate::Kind::Connected:
            return "connected";
        case Certificate::Kind::Quotient:
            return "quotient";
        case Certificate::Kind::Divide:
            return "divide";
        case Certificate::Kind::Generator:
            return "generator";
    }
    return "?";
}

// The reachable pair set {(s^B, s^T) : s a forest}: the closure of the zero
// pair under letter actions and sums (both orders).
std::vector<std::pair<int, int>> reachable_pairs(const ForestAutomaton& b,
                                                 const ForestAutomaton& t) {
    const int nt = t.num_states();
    std::vector<char> seen(static_cast<size_t>(b.num_states()) * nt, 0);
    std::vector<std::pair<int, int>> members;
    std::vector<std::pair<int, int>> queue{{b.zero(), t.zero()}};
    seen[static_cast<size_t>(b.zero()) * nt + t.zero()] = 1;
    auto push = [&](int x, int y) {
        if (!seen[static_cast<size_t>(x) * nt + y]) {
            seen[static_cast<size_t>(x) * nt + y] = 1;
            queue.emplace_back(x, y);
        }
    };
    while (!queue.empty()) {
        auto [x, y] = queue.back();
        queue.pop_back();
        members.emplace_back(x, y);
        for (int l = 0; l < b.alphabet().size(); ++l) push(b.action(l, x), t.action(l, y));
        for (const auto& [u, v] : members) {
            push(b.plus(x, u), t.plus(y, v));
            push(b.plus(u, x), t.plus(v, y));
        }
    }
    return members;
}

// The reachable state set of a single automaton.
std::vector<int> reachable_states(const ForestAutomaton& a) {
    std::vector<char> seen(a.num_states(), 0);
    std::vector<int> members, queue{a.zero()};
    seen[a.zero()] = 1;
    auto push = [&](int x) {
        if (!seen[x]) {
            seen[x] = 1;
            queue.push_back(x);
        }
    };
    while (!queue.empty()) {
        int x = queue.back();
        queue.pop_back();
        members.push_back(x);
        for (int l = 0; l < a.alphabet().size(); ++l) push(a.action(l, x));
        for (int u : members) {
            push(a.plus(x, u));
            push(a.plus(u, x));
        }
    }
    return members;
}

// Verifies the claim of Divide(target, inner-value): in the reachable
// pairing, equal first components force equal second components, and the
// second components cover every reachable target state.
std::string join_symbols(const std::vector<std::string>& symbols) {
    std::string out;
    for (size_t i = 0; i < symbols.size(); ++i) {
        if (i) out += " ";
        out += symbols[i];
    }
    return out;
}

std::optional<std::string> divide_issue(const ForestAutomaton& built,
                                        const ForestAutomaton& target) {
    if (built.alphabet().symbols() != target.alphabet().symbols())
        return "built alphabet {" + join_symbols(built.alphabet().symbols()) +
               "} differs from target {" + join_symbols(target.alphabet().symbols()) + "}";
    std::vector<int> image(built.num_states(), -1);
    std::vector<char> covered(target.num_states(), 0);
    for (const auto& [x, y] : reachable_pairs(built, target)) {
        if (image[x] >= 0 && image[x] != y)
            return "state " + built.state_name(x) + " pairs with both " +
                   target.state_name(image[x]) + " and " + target.state_name(y) +
                   " (not a function)";
        image[x] = y;
        covered[y] = 1;
    }
    for (int q : reachable_states(target))
        if (!covered[q])
            return "target state " + target.state_name(q) + " is not covered by the pairing";
    return std::nullopt;
}

// Shared recursion: builds the node's value.  With `issues`, problems are
// recorded (prefixed by the node path) and nullopt is returned for the
// failing subtree; without it, the first problem throws.
std::optional<ForestAutomaton> eval_node(const Certificate& c, const std::string& path,
                                         std::vector<std::string>* issues) {
    auto report = [&](const std::string& msg) -> std::optional<ForestAutomaton> {
        std::string full = "at " + path + ": " + msg;
        if (!issues) throw CertificateError(full);
        issues->push_back(full);
        return std::nullopt;
    };
    auto child = [&](size_t i, const std::string& label) {
        return eval_node(*c.children.at(i), path + "/" + label, issues);
    };
    try {
        switch (c.kind) {
            case Certificate::Kind::BaseEF:
                return ef_automaton();
            case Certificate::Kind::Generator:
                if (!c.target) return report("generator node carries no automaton");
                return *c.target;
            case Certificate::Kind::Rename: {
                if (c.children.size() != 1) return report("rename needs exactly one child");
                auto inner = child(0, kind_keyword(c.children[0]->kind));
                if (!inner) return std::nullopt;
                return rename(*inner, Alphabet(c.rename_symbols), c.rename_map);
            }
            case Certificate::Kind::DirectProduct: {
                if (c.children.empty()) return report("direct-product needs children");
                std::vector<AutomatonPtr> factors;
                for (size_t i = 0; i < c.children.size(); ++i) {
                    auto inner = child(i, kind_keyword(c.children[i]->kind) + std::string("#") +
                                              std::to_string(i));
                    if (!inner) return std::nullopt;
                    factors.push_back(std::make_shared<ForestAutomaton>(std::move(*inner)));
                }
                return direct_product(factors);
            }
            case Certificate::Kind::Moore: {
                if (c.children.size() != 2) return report("moore needs exactly two children");
                auto left = child(0, "left");
                auto right = child(1, "right");
                if (!left || !right) return std::nullopt;
                return moore_product(*left, *right, c.control);
            }
            case Certificate::Kind::Connected: {
                if (c.children.size() != 1) return report("connected needs exactly one child");
                auto inner = child(0, kind_keyword(c.children[0]->kind));
                if (!inner) return std::nullopt;
                return connected_part(*inner);
            }
            case Certificate::Kind::Quotient: {
                if (c.children.size() != 1) return report("quotient needs exactly one child");
                auto inner = child(0, kind_keyword(c.children[0]->kind));
                if (!inner) return std::nullopt;
                std::vector<int> class_of(inner->num_states(), -1);
                for (size_t k = 0; k < c.blocks.size(); ++k)
                    for (const auto& name : c.blocks[k]) {
                        auto q = inner->state_index(name);
                        if (!q) return report("block state " + name + " is not a state");
                        if (class_of[*q] >= 0)
                            return report("state " + name + " appears in two blocks");
                        class_of[*q] = static_cast<int>(k);
                    }
                for (int q = 0; q < inner->num_states(); ++q)
                    if (class_of[q] < 0)
                        return report("state " + inner->state_name(q) + " missing from blocks");
                return quotient(*inner, Congruence(class_of));
            }
            case Certificate::Kind::Divide: {
                if (c.children.size() != 1) return report("divide needs exactly one child");
                if (!c.target) return report("divide node carries no target automaton");
                auto inner = child(0, kind_keyword(c.children[0]->kind));
                if (inner)
                    if (auto issue = divide_issue(*inner, *c.target)) report(*issue);
                // The node's value is the certified target either way, so
                // enclosing nodes can still be checked.
                return *c.target;
            }
        }
    } catch (const CertificateError&) {
        throw;  // already carries a path
    } catch (const std::exception& e) {
        return report(e.what());
    }
    return report("unknown node kind");
}

void collect_generator_issues(const Certificate& c, const std::string& path,
                              std::vector<std::string>& issues) {
    if (c.kind == Certificate::Kind::Generator)
        issues.push_back("at " + path + ": generator leaves are not allowed in membership "
                         "certificates (only base-ef)");
    for (size_t i = 0; i < c.children.size(); ++i) {
        std::string label = kind_keyword(c.children[i]->kind);
        if (c.kind == Certificate::Kind::Moore) label = i == 0 ? "left" : "right";
        if (c.kind == Certificate::Kind::DirectProduct) label += "#" + std::to_string(i);
        collect_generator_issues(*c.children[i], path + "/" + label, issues);
    }
}

}  // namespace

ForestAutomaton build_certificate(const Certificate& cert) {
    auto result = eval_node(cert, kind_keyword(cert.kind), nullptr);
    if (!result) throw CertificateError("certificate evaluation failed");
    return std::move(*result);
}

VerificationResult verify_certificate(const Certificate& cert, const ForestAutomaton& target) {
    VerificationResult out;
    collect_generator_issues(cert, kind_keyword(cert.kind), out.issues);
    auto value = eval_node(cert, kind_keyword(cert.kind), &out.issues);
    if (value) {
        try {
            if (!is_isomorphic(*value, target))
                out.issues.push_back("certificate value (" + std::to_string(value->num_states()) +
                                     " states) is not isomorphic to the target automaton " +
                                     target.name());
        } catch (const std::exception& e) {
            out.issues.push_back(std::string("final comparison: ") + e.what());
        }
    } else if (out.issues.empty()) {
        out.issues.push_back("certificate evaluation produced no value");
    }
    out.ok = out.issues.empty();
    return out;
}

// --- Text format -----------------------------------------------------------

namespace {

void indent_to(std::ostringstream& out, int depth) {
    for (int i = 0; i < depth; ++i) out << "  ";
}

void render_automaton_block(std::ostringstream& out, const ForestAutomaton& a, int depth) {
    std::istringstream lines(render_automaton_text(a));
    std::string line;
    while (std::getline(lines, line)) {
        indent_to(out, depth);
        out << line << "\n";
    }
}

void render_node(std::ostringstream& out, const Certificate& c, int depth) {
    indent_to(out, depth);
    switch (c.kind) {
        case Certificate::Kind::BaseEF:
            out << "base-ef\n";
            return;
        case Certificate::Kind::Generator:
            out << "generator\n";
            render_automaton_block(out, *c.target, depth + 1);
            return;
        case Certificate::Kind::Rename: {
            ForestAutomaton inner = build_certificate(*c.children[0]);
            out << "rename";
            for (size_t d = 0; d < c.rename_symbols.size(); ++d)
                out << " " << c.rename_symbols[d] << "->"
                    << inner.alphabet().symbol(c.rename_map.at(d));
            out << "\n";
            render_node(out, *c.children[0], depth + 1);
            return;
        }
        case Certificate::Kind::DirectProduct:
            out << "direct-product\n";
            for (const auto& ch : c.children) render_node(out, *ch, depth + 1);
            return;
        case Certificate::Kind::Moore: {
            ForestAutomaton left = build_certificate(*c.children[0]);
            ForestAutomaton right = build_certificate(*c.children[1]);
            out << "moore\n";
            indent_to(out, depth + 1);
            out << "left\n";
            render_node(out, *c.children[0], depth + 2);
            indent_to(out, depth + 1);
            out << "right\n";
            render_node(out, *c.children[1], depth + 2);
            indent_to(out, depth + 1);
            out << "control\n";
            for (int l = 0; l < left.alphabet().size(); ++l)
                for (int q = 0; q < left.num_states(); ++q) {
                    indent_to(out, depth + 2);
                    out << left.alphabet().symbol(l) << " " << left.state_name(q) << " -> "
                        << right.alphabet().symbol(c.control.table.at(l).at(q)) << "\n";
                }
            return;
        }
        case Certificate::Kind::Connected:
            out << "connected\n";
            render_node(out, *c.children[0], depth + 1);
            return;
        case Certificate::Kind::Quotient:
            out << "quotient\n";
            indent_to(out, depth + 1);
            out << "blocks\n";
            for (const auto& block : c.blocks) {
                indent_to(out, depth + 2);
                for (size_t i = 0; i < block.size(); ++i) out << (i ? " " : "") << block[i];
                out << "\n";
            }
            indent_to(out, depth + 1);
            out << "inner\n";
            render_node(out, *c.children[0], depth + 2);
            return;
        case Certificate::Kind::Divide:
            out << "divide\n";
            indent_to(out, depth + 1);
            out << "target\n";
            render_automaton_block(out, *c.target, depth + 2);
            indent_to(out, depth + 1);
            out << "inner\n";
            render_node(out, *c.children[0], depth + 2);
            return;
    }
}

struct Line {
    int indent = 0;
    std::string text;  // stripped of indentation
};

std::vector<Line> significant_lines(const std::string& text) {
    std::vector<Line> out;
    std::istringstream in(text);
    std::string raw;
    while (std::getline(in, raw)) {
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        size_t i = 0;
        while (i < raw.size() && raw[i] == ' ') ++i;
        if (i == raw.size()) continue;
        if (raw[i] == '#') continue;
        if (raw.find('\t') != std::string::npos)
            throw ParseError("certificate: tabs are not allowed, use two-space indents");
        if (i % 2 != 0)
            throw ParseError("certificate: odd indentation in line '" + raw.substr(i) + "'");
        out.push_back(Line{static_cast<int>(i / 2), raw.substr(i)});
    }
    return out;
}

std::vector<std::string> split_words(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

class CertificateParser {
public:
    explicit CertificateParser(std::vector<Line> lines) : lines_(std::move(lines)) {}

    CertificatePtr parse() {
        if (lines_.empty()) throw ParseError("certificate: empty input");
        auto node = parse_node(0);
        if (pos_ != lines_.size())
            throw ParseError("certificate: unexpected extra line '" + lines_[pos_].text + "'");
        return node;
    }

private:
    const Line& peek() const { return lines_[pos_]; }
    bool more(int depth) const { return pos_ < lines_.size() && lines_[pos_].indent == depth; }

    Line take(int depth, const std::string& what) {
        if (pos_ >= lines_.size())
            throw ParseError("certificate: missing " + what + " at end of input");
        if (lines_[pos_].indent != depth)
            throw ParseError("certificate: expected " + what + ", found '" + lines_[pos_].text +
                             "' at the wrong indentation");
        return lines_[pos_++];
    }

    void expect_section(int depth, const std::string& name) {
        Line line = take(depth, "'" + name + "' section");
        if (line.text != name)
            throw ParseError("certificate: expected '" + name + "' section, found '" + line.text +
                             "'");
    }

    // Collects all following lines strictly deeper than `depth`, dedented
    // by depth+1 levels, and joins them (an embedded automaton block).
    std::string take_block(int depth) {
        std::ostringstream out;
        bool any = false;
        while (pos_ < lines_.size() && lines_[pos_].indent > depth) {
            const Line& l = lines_[pos_++];
            for (int i = depth + 1; i < l.indent; ++i) out << "  ";
            out << l.text << "\n";
            any = true;
        }
        if (!any) throw ParseError("certificate: expected an embedded automaton block");
        return out.str();
    }

    CertificatePtr parse_node(int depth) {
        Line line = take(depth, "a certificate node");
        auto words = split_words(line.text);
        const std::string& kw = words[0];
        if (kw == "base-ef") {
            if (words.size() != 1) throw ParseError("certificate: base-ef takes no arguments");
            return cert_base_ef();
        }
        if (kw == "generator") {
            auto file = parse_automaton_text(take_block(depth));
            return cert_generator(file.automaton);
        }
        if (kw == "rename") {
            std::vector<std::string> syms;
            std::vector<std::string> sources;
            for (size_t i = 1; i < words.size(); ++i) {
                auto arrow = words[i].find("->");
                if (arrow == std::string::npos)
                    throw ParseError("certificate: rename entry '" + words[i] +
                                     "' is not of the form sym->sym");
                syms.push_back(words[i].substr(0, arrow));
                sources.push_back(words[i].substr(arrow + 2));
            }
            auto inner = parse_node(depth + 1);
            ForestAutomaton built = build_certificate(*inner);
            std::vector<int> map;
            for (const auto& src : sources) {
                auto idx = built.alphabet().index_of(src);
                if (!idx)
                    throw ParseError("certificate: rename source '" + src +
                                     "' is not a letter of the inner automaton");
                map.push_back(*idx);
            }
            return cert_rename(Alphabet(syms), std::move(map), std::move(inner));
        }
        if (kw == "direct-product") {
            std::vector<CertificatePtr> children;
            while (more(depth + 1)) children.push_back(parse_node(depth + 1));
            if (children.empty())
                throw ParseError("certificate: direct-product needs at least one child");
            return cert_direct_product(std::move(children));
        }
        if (kw == "connected") return cert_connected(parse_node(depth + 1));
        if (kw == "moore") {
            expect_section(depth + 1, "left");
            auto left = parse_node(depth + 2);
            expect_section(depth + 1, "right");
            auto right = parse_node(depth + 2);
            expect_section(depth + 1, "control");
            ForestAutomaton built_left = build_certificate(*left);
            ForestAutomaton built_right = build_certificate(*right);
            ControlFunction alpha;
            alpha.table.assign(built_left.alphabet().size(),
                               std::vector<int>(built_left.num_states(), -1));
            while (more(depth + 2)) {
                auto row = split_words(take(depth + 2, "a control row").text);
                if (row.size() != 4 || row[2] != "->")
                    throw ParseError("certificate: control row must be 'letter state -> letter'");
                auto l = built_left.alphabet().index_of(row[0]);
                auto d = built_right.alphabet().index_of(row[3]);
                if (!l)
                    throw ParseError("certificate: control letter '" + row[0] +
                                     "' is not in the left alphabet");
                if (!d)
                    throw ParseError("certificate: control target '" + row[3] +
                                     "' is not in the right alphabet");
                auto q = built_left.state_index(row[1]);
                if (!q)
                    throw ParseError("certificate: control state '" + row[1] +
                                     "' is not a state of the left automaton");
                if (alpha.table[*l][*q] >= 0)
                    throw ParseError("certificate: duplicate control row for (" + row[0] + ", " +
                                     row[1] + ")");
                alpha.table[*l][*q] = *d;
            }
            for (int l = 0; l < built_left.alphabet().size(); ++l)
                for (int q = 0; q < built_left.num_states(); ++q)
                    if (alpha.table[l][q] < 0)
                        throw ParseError("certificate: control row missing for (" +
                                         built_left.alphabet().symbol(l) + ", " +
                                         built_left.state_name(q) + ")");
            return cert_moore(std::move(left), std::move(right), std::move(alpha));
        }
        if (kw == "quotient") {
            expect_section(depth + 1, "blocks");
            std::vector<std::vector<std::string>> blocks;
            while (more(depth + 2)) blocks.push_back(split_words(take(depth + 2, "a block").text));
            if (blocks.empty()) throw ParseError("certificate: quotient needs blocks");
            expect_section(depth + 1, "inner");
            return cert_quotient(std::move(blocks), parse_node(depth + 2));
        }
        if (kw == "divide") {
            expect_section(depth + 1, "target");
            auto file = parse_automaton_text(take_block(depth + 1));
            expect_section(depth + 1, "inner");
            return cert_divide(file.automaton, parse_node(depth + 2));
        }
        throw ParseError("certificate: unknown node '" + kw + "'");
    }

    std::vector<Line> lines_;
    size_t pos_ = 0;
};

}  // namespace

std::string render_certificate(const Certificate& cert) {
    std::ostringstream out;
    render_node(out, cert, 0);
    return out.str();
}

CertificatePtr parse_certificate(const std::string& text) {
    return CertificateParser(significant_lines(text)).parse();
}

}  // namespace fl
