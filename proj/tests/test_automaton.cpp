#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "fl/automaton.hpp"
#include "fl/fixtures.hpp"

using namespace fl;

namespace {

const Alphabet kBin = binary_alphabet();

Forest bin(const char* text) { return parse_forest(text, kBin); }

// A 3-state extension of EF with an extra state unreachable from zero:
// plus = max on {0,1,2}, letter 0 identity, letter 1 constant 1.
ForestAutomaton ef_with_junk() {
    return ForestAutomaton("ef_junk", kBin, {"0", "1", "j"}, 0,
                           {{0, 1, 2}, {1, 1, 2}, {2, 2, 2}},
                           {{0, 1, 2}, {1, 1, 1}});
}

// Brute-force oracle for the LEX language: some child of a root labeled 1.
bool has_depth_one_1(const Forest& f) {
    for (const auto& root : f.trees)
        for (const auto& child : root.children.trees)
            if (child.label == 1) return true;
    return false;
}

}  // namespace

TEST_CASE("construction validates the monoid axioms with witnesses") {
    // Non-associative plus: (1+1)+1 = 2+1 = 2 but 1+(1+1) = 1+2 = 1.
    CHECK_THROWS_WITH_AS(
        ForestAutomaton("bad", Alphabet({"a"}), {"0", "1", "2"}, 0,
                        {{0, 1, 2}, {1, 2, 1}, {2, 2, 2}}, {{0, 1, 2}}),
        doctest::Contains("associative"), AutomatonError);
    // Zero that is not a unit: 0+1 = 0.
    CHECK_THROWS_WITH_AS(ForestAutomaton("bad", kBin, {"0", "1"}, 0, {{0, 0}, {1, 1}},
                                         {{0, 1}, {1, 1}}),
                         doctest::Contains("unit"), AutomatonError);
    // Shape and range errors.
    CHECK_THROWS_AS(ForestAutomaton("bad", kBin, {"0", "1"}, 0, {{0, 1}}, {{0, 1}, {1, 1}}),
                    AutomatonError);
    CHECK_THROWS_AS(ForestAutomaton("bad", kBin, {"0", "1"}, 0, {{0, 5}, {1, 1}},
                                    {{0, 1}, {1, 1}}),
                    AutomatonError);
    CHECK_THROWS_AS(ForestAutomaton("bad", kBin, {"0", "0"}, 0, {{0, 1}, {1, 1}},
                                    {{0, 1}, {1, 1}}),
                    AutomatonError);
    CHECK_THROWS_AS(ForestAutomaton("bad", kBin, {"0", "a b"}, 0, {{0, 1}, {1, 1}},
                                    {{0, 1}, {1, 1}}),
                    AutomatonError);
}

TEST_CASE("EF evaluation matches the stated membership facts") {
    RecognizedLanguage ef = ef_language();
    for (const char* in : {"1", "1(0+0)", "0(0+1)"}) CHECK(member(ef, bin(in)));
    for (const char* out : {"()", "0", "0(0+0(0))"}) CHECK(!member(ef, bin(out)));
    // Membership is exactly "some node is labeled 1".
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        Forest f = random_forest(kBin, 4, 3, seed);
        bool any1 = render_forest(f, kBin).find('1') != std::string::npos;
        CHECK(member(ef, f) == any1);
    }
}

TEST_CASE("AF evaluation: 2 iff empty, 1 iff nonempty member, else 0") {
    const ForestAutomaton af = af_automaton();
    CHECK(evaluate(af, bin("()")) == 2);
    CHECK(evaluate(af, bin("1")) == 1);
    CHECK(evaluate(af, bin("1(0)")) == 1);
    CHECK(evaluate(af, bin("1(0+1)")) == 1);
    CHECK(evaluate(af, bin("0")) == 0);
    CHECK(evaluate(af, bin("0(1)")) == 1);
    CHECK(evaluate(af, bin("0(0)")) == 0);
    CHECK(evaluate(af, bin("1+0")) == 0);
    CHECK(evaluate(af, bin("1+1")) == 1);
    CHECK(evaluate(af, bin("0(1+1)")) == 1);
}

TEST_CASE("evaluation is a homomorphism from forests to the monoid") {
    for (const ForestAutomaton& a : {ef_automaton(), af_automaton(), lex_automaton()}) {
        CHECK(evaluate(a, Forest{}) == a.zero());
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            Forest s = random_forest(kBin, 3, 3, seed);
            Forest t = random_forest(kBin, 3, 3, seed + 1000);
            CHECK(evaluate(a, s + t) == a.plus(evaluate(a, s), evaluate(a, t)));
            for (int l = 0; l < kBin.size(); ++l) {
                Tree wrapped{l, s};
                CHECK(evaluate(a, wrapped) == a.action(l, evaluate(a, s)));
            }
        }
    }
}

TEST_CASE("LEX fixture matches its membership list and a brute-force oracle") {
    RecognizedLanguage lex = lex_language();
    CHECK(member(lex, bin("0(1(0))+0(1)")));
    CHECK(!member(lex, bin("()")));
    CHECK(!member(lex, bin("0+1")));
    CHECK(!member(lex, bin("0(0(1+0)+0)+0")));
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        Forest f = random_forest(kBin, 4, 3, seed);
        CHECK(member(lex, f) == has_depth_one_1(f));
    }
}

TEST_CASE("connected_part keeps reachable states in inherited order") {
    CHECK(connected_part(ef_automaton()).same_tables(ef_automaton()));
    CHECK(connected_part(af_automaton()).same_tables(af_automaton()));
    ForestAutomaton pruned = connected_part(ef_with_junk());
    CHECK(pruned.num_states() == 2);
    CHECK(pruned.same_tables(ef_automaton()));
    CHECK(pruned.state_names() == std::vector<std::string>{"0", "1"});
    // Oracle: reachable states are exactly the forest values.
    std::set<int> seen;
    for (const char* t : {"()", "0", "1", "0(1)", "1+1", "0(0)"})
        seen.insert(evaluate(ef_with_junk(), bin(t)));
    CHECK(seen == std::set<int>{0, 1});
}

TEST_CASE("rename reuses the carrier and reindexes the action") {
    ForestAutomaton b = b_automaton();
    CHECK(b.alphabet() == loes_alphabet());
    CHECK(b.num_states() == 2);
    // l,e act as EF letter 0 (identity); o,s as EF letter 1 (constant 1).
    for (int q = 0; q < 2; ++q) {
        CHECK(b.action(0, q) == q);
        CHECK(b.action(2, q) == q);
        CHECK(b.action(1, q) == 1);
        CHECK(b.action(3, q) == 1);
    }
    CHECK(rename(ef_automaton(), kBin, {0, 1}).same_tables(ef_automaton()));
    CHECK_THROWS_AS(rename(ef_automaton(), loes_alphabet(), {0, 1}), AutomatonError);
    CHECK_THROWS_AS(rename(ef_automaton(), kBin, {0, 7}), AutomatonError);
}

TEST_CASE("direct products evaluate componentwise") {
    ForestAutomaton p = direct_product(ef_automaton(), af_automaton());
    CHECK(p.num_states() == 6);
    CHECK(p.state_name(0) == "(0|0)");
    CHECK(p.state_name(5) == "(1|2)");
    const ForestAutomaton ef = ef_automaton();
    const ForestAutomaton af = af_automaton();
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Forest f = random_forest(kBin, 4, 3, seed);
        int idx = evaluate(p, f);
        CHECK(idx / 3 == evaluate(ef, f));
        CHECK(idx % 3 == evaluate(af, f));
    }
    // Ternary product exercises the mixed-radix layout.
    auto efp = std::make_shared<ForestAutomaton>(ef_automaton());
    ForestAutomaton q = direct_product({efp, efp, efp});
    CHECK(q.num_states() == 8);
    CHECK(q.state_name(5) == "(1|0|1)");
    CHECK_THROWS_AS(direct_product(ef_automaton(), aux_automaton()), AutomatonError);
}

TEST_CASE("moore product applies the control at the updated left state") {
    // alpha(a, p) = p: feed the updated EF state back in as a letter.
    ControlFunction alpha{{{0, 1}, {0, 1}}};
    ForestAutomaton m = moore_product(ef_automaton(), ef_automaton(), alpha);
    CHECK(m.num_states() == 4);
    CHECK(evaluate(m, bin("0(1)")) == 3);  // (1|1)
    // Distinguishes updated-state from stale-state lookup: on the forest
    // "1" the left state moves 0 -> 1, so the control must emit letter 1.
    CHECK(evaluate(m, bin("1")) == 3);
    // Constant control equals a direct product against a renamed factor.
    ControlFunction const0{{{0, 0}, {0, 0}}};
    ForestAutomaton m0 = moore_product(ef_automaton(), af_automaton(), const0);
    ForestAutomaton d0 = direct_product(ef_automaton(), rename(af_automaton(), kBin, {0, 0}));
    CHECK(m0.same_tables(d0));
    // One-state right factor changes nothing up to isomorphism.
    ForestAutomaton triv = trivial_automaton(loes_alphabet());
    ControlFunction anyc{{{2, 0}, {3, 1}}};
    CHECK(is_isomorphic(moore_product(ef_automaton(), triv, anyc), ef_automaton()).has_value());
    // Control table validation.
    CHECK_THROWS_AS(moore_product(ef_automaton(), ef_automaton(), ControlFunction{{{0, 1}}}),
                    AutomatonError);
    CHECK_THROWS_AS(moore_product(ef_automaton(), ef_automaton(), ControlFunction{{{0, 9}, {0, 1}}}),
                    AutomatonError);
}

TEST_CASE("congruence closure from generating pairs") {
    const ForestAutomaton ef = ef_automaton();
    const ForestAutomaton af = af_automaton();
    CHECK(congruence_from_pairs(ef, {{0, 1}}).is_total());
    Congruence theta = congruence_from_pairs(af, {{0, 1}});
    CHECK(theta.class_map() == std::vector<int>{0, 0, 1});
    CHECK(is_congruence(af, theta));
    CHECK(congruence_from_pairs(af, {{1, 2}}).is_total());
    CHECK(congruence_from_pairs(af, {{0, 2}}).is_total());
    CHECK(congruence_from_pairs(af, {}).is_identity());
    // A partition that merely merges 0,1 in EF without closure would not be
    // one; is_congruence agrees with the closure result.
    CHECK(is_congruence(ef, congruence_from_pairs(ef, {{0, 1}})));
}

TEST_CASE("congruence lattice enumeration") {
    auto ef_all = enumerate_congruences(ef_automaton());
    CHECK(ef_all.size() == 2);
    CHECK(ef_all.front().is_identity());
    CHECK(ef_all.back().is_total());
    auto af_all = enumerate_congruences(af_automaton());
    CHECK(af_all.size() == 3);
    CHECK(af_all[1].class_map() == std::vector<int>{0, 0, 1});
    CHECK(enumerate_congruences(trivial_automaton(kBin)).size() == 1);
    // Meet and refinement sanity on the AF lattice.
    CHECK(af_all[1].meet(af_all[0]) == af_all[0]);
    CHECK(af_all[0].refines(af_all[1]));
    CHECK(af_all[1].refines(af_all[2]));
    CHECK(!af_all[1].refines(af_all[0]));
    // Guard: an 11-state chain semilattice exceeds the default bound.
    const int n = 11;
    std::vector<std::string> names;
    std::vector<std::vector<int>> plus(n, std::vector<int>(n));
    for (int i = 0; i < n; ++i) {
        names.push_back("q" + std::to_string(i));
        for (int j = 0; j < n; ++j) plus[i][j] = std::max(i, j);
    }
    ForestAutomaton big("chain11", Alphabet({"a"}), names, 0, plus,
                        {std::vector<int>(n, n - 1)});
    CHECK_THROWS_AS(enumerate_congruences(big), SizeGuardError);
    CHECK(enumerate_congruences(big, 11).size() > 0);
}

TEST_CASE("quotients are homomorphic images") {
    const ForestAutomaton af = af_automaton();
    Congruence theta = congruence_from_pairs(af, {{0, 1}});
    ForestAutomaton q = quotient(af, theta);
    CHECK(q.num_states() == 2);
    CHECK(q.state_name(0) == "{0,1}");
    CHECK(is_homomorphism(af, q, theta.class_map()));
    // Identity congruence gives an isomorphic copy; total gives one state.
    std::vector<int> ident{0, 1, 2};
    CHECK(is_isomorphic(quotient(af, Congruence(ident)), af).has_value());
    CHECK(quotient(af, congruence_from_pairs(af, {{1, 2}})).num_states() == 1);
    // Rejects partitions that are not congruences.
    CHECK_THROWS_AS(quotient(af, Congruence(std::vector<int>{0, 1, 0})), AutomatonError);
}

TEST_CASE("minimize: product recognizers collapse to the canonical automata") {
    auto ef2 = std::make_shared<ForestAutomaton>(direct_product(ef_automaton(), ef_automaton()));
    // (1,1) is final: intersection of L_EF with itself.
    RecognizedLanguage min_ef = minimize(RecognizedLanguage(ef2, {3}));
    CHECK(min_ef.automaton->num_states() == 2);
    CHECK(is_isomorphic(min_ef, ef_language()).has_value());
    auto af2 = std::make_shared<ForestAutomaton>(direct_product(af_automaton(), af_automaton()));
    RecognizedLanguage min_af = minimize(RecognizedLanguage(af2, {4}));  // (1|1)
    CHECK(min_af.automaton->num_states() == 3);
    CHECK(is_isomorphic(min_af, af_language()).has_value());
    // Degenerate final sets minimize to one state.
    auto efp = std::make_shared<ForestAutomaton>(ef_automaton());
    CHECK(minimize(RecognizedLanguage(efp, {})).automaton->num_states() == 1);
    CHECK(minimize(RecognizedLanguage(efp, {0, 1})).automaton->num_states() == 1);
    // LEX is already minimal.
    CHECK(minimize(lex_language()).automaton->num_states() == 4);
}

TEST_CASE("minimize preserves the language and is idempotent") {
    auto mix = std::make_shared<ForestAutomaton>(direct_product(ef_automaton(), lex_automaton()));
    for (std::vector<int> finals : {std::vector<int>{2, 3, 6, 7}, std::vector<int>{1, 5},
                                    std::vector<int>{0, 3, 4}, std::vector<int>{7}}) {
        RecognizedLanguage lang(mix, finals);
        RecognizedLanguage min = minimize(lang);
        CHECK(min.automaton->num_states() <= mix->num_states());
        for (std::uint64_t seed = 0; seed < 150; ++seed) {
            Forest f = random_forest(kBin, 4, 3, seed);
            CHECK(member(lang, f) == member(min, f));
        }
        RecognizedLanguage twice = minimize(min);
        CHECK(twice.automaton->num_states() == min.automaton->num_states());
        CHECK(is_isomorphic(twice, min).has_value());
    }
}

TEST_CASE("isomorphism finds witness maps and rejects non-isomorphic pairs") {
    // EF with states listed in the opposite order.
    ForestAutomaton swapped("ef_swapped", kBin, {"one", "zero"}, 1,
                            {{0, 0}, {0, 1}},
                            {{0, 1}, {0, 0}});
    auto w = is_isomorphic(ef_automaton(), swapped);
    REQUIRE(w.has_value());
    CHECK((*w)[0] == 1);
    CHECK((*w)[1] == 0);
    CHECK(is_homomorphism(rename(ef_automaton(), kBin, {0, 1}), rename(swapped, kBin, {0, 1}), *w));
    // Same carrier, different action: both letters identity.
    ForestAutomaton flat("flat", kBin, {"0", "1"}, 0, {{0, 1}, {1, 1}}, {{0, 1}, {0, 1}});
    CHECK(!is_isomorphic(ef_automaton(), flat).has_value());
    CHECK_THROWS_AS(is_isomorphic(ef_automaton(), aux_automaton()), AutomatonError);
    // Finals must correspond: zero is fixed, so {1} cannot map to {0}.
    auto efp = std::make_shared<ForestAutomaton>(ef_automaton());
    CHECK(!is_isomorphic(RecognizedLanguage(efp, {1}), RecognizedLanguage(efp, {0})).has_value());
    CHECK(is_isomorphic(RecognizedLanguage(efp, {1}), RecognizedLanguage(efp, {1})).has_value());
}

TEST_CASE("powerset automaton is the product of the E_h renamings") {
    Alphabet h({"x", "y"});
    ForestAutomaton p = build_powerset_automaton(h);
    CHECK(p.num_states() == 4);
    CHECK(p.state_name(0) == "{}");
    CHECK(p.state_name(3) == "{x,y}");
    CHECK(p.zero() == 0);
    CHECK(p.plus(1, 2) == 3);
    CHECK(p.action(0, 2) == 3);  // x . {y} = {x,y}
    // E_h sends h to EF letter 1 and every other symbol to letter 0.
    auto ex = std::make_shared<ForestAutomaton>(rename(ef_automaton(), h, {1, 0}));
    auto ey = std::make_shared<ForestAutomaton>(rename(ef_automaton(), h, {0, 1}));
    ForestAutomaton prod = direct_product({ex, ey});
    auto iso = is_isomorphic(prod, p);
    REQUIRE(iso.has_value());
    // The canonical correspondence (e_h)_h -> {h : e_h = 1} is itself an
    // isomorphism: tuple (ex,ey) at index ex*2+ey maps to mask ex + 2*ey.
    std::vector<int> expl{0, 2, 1, 3};
    for (int q = 0; q < 4; ++q)
        for (int r = 0; r < 4; ++r) CHECK(expl[prod.plus(q, r)] == p.plus(expl[q], expl[r]));
    for (int l = 0; l < 2; ++l)
        for (int q = 0; q < 4; ++q) CHECK(expl[prod.action(l, q)] == p.action(l, expl[q]));
    CHECK(build_powerset_automaton(Alphabet({"x"})).num_states() == 2);
}

TEST_CASE("subautomata enumeration and induced substructures") {
    auto subs = enumerate_subautomata(ef_with_junk());
    REQUIRE(subs.size() == 2);
    CHECK(subs[0] == std::vector<int>{0, 1});
    CHECK(subs[1] == std::vector<int>{0, 1, 2});
    CHECK(subautomaton(ef_with_junk(), {0, 1}).same_tables(ef_automaton()));
    CHECK(enumerate_subautomata(af_automaton()) ==
          std::vector<std::vector<int>>{{0, 1, 2}});
    CHECK_THROWS_AS(subautomaton(af_automaton(), {1, 2}), AutomatonError);
    CHECK_THROWS_AS(subautomaton(af_automaton(), {0, 1}), AutomatonError);
}

TEST_CASE("automaton text format round-trips byte-exactly") {
    for (const ForestAutomaton& a :
         {ef_automaton(), af_automaton(), aux_automaton(), b_automaton(), lex_automaton()}) {
        std::string text = render_automaton_text(a, std::nullopt);
        AutomatonFile parsed = parse_automaton_text(text);
        CHECK(parsed.automaton->same_tables(a));
        CHECK(parsed.automaton->state_names() == a.state_names());
        CHECK(!parsed.finals.has_value());
        CHECK(render_automaton_text(*parsed.automaton, std::nullopt) == text);
    }
    std::string with_finals = render_automaton_text(ef_automaton(), std::vector<int>{1});
    AutomatonFile parsed = parse_automaton_text(with_finals);
    REQUIRE(parsed.finals.has_value());
    CHECK(*parsed.finals == std::vector<int>{1});
    CHECK(render_automaton_text(*parsed.automaton, parsed.finals) == with_finals);
}

TEST_CASE("automaton text format rejects malformed input") {
    std::string good = render_automaton_text(ef_automaton(), std::vector<int>{1});
    // Comments and blank lines are fine.
    CHECK(parse_automaton_text("# header\n\n" + good).automaton->same_tables(ef_automaton()));
    // Remove one plus line -> missing entry.
    std::string missing = good;
    missing.erase(missing.find("plus: 1 1 -> 1"), 15);
    CHECK_THROWS_WITH_AS(parse_automaton_text(missing), doctest::Contains("missing plus"),
                         ParseError);
    // Duplicate a line -> duplicate entry.
    CHECK_THROWS_WITH_AS(parse_automaton_text(good + "action: 0 0 -> 0\n"),
                         doctest::Contains("duplicate"), ParseError);
    CHECK_THROWS_WITH_AS(parse_automaton_text(good + "plus: 0 0 -> 0\n"),
                         doctest::Contains("duplicate"), ParseError);
    CHECK_THROWS_AS(parse_automaton_text("automaton x\nalphabet: a\nstates: q\nzero: r\n"),
                    ParseError);
    CHECK_THROWS_AS(parse_automaton_text(""), ParseError);
}

TEST_CASE("control table text round-trips") {
    ControlFunction alpha{{{2, 0}, {3, 1}}};
    ForestAutomaton ef = ef_automaton();
    std::string text = render_control_text(alpha, ef, loes_alphabet());
    ControlFunction back = parse_control_text(text, ef, loes_alphabet());
    CHECK(back.table == alpha.table);
    CHECK_THROWS_AS(parse_control_text("0 0 -> l\n", ef, loes_alphabet()), ParseError);
    CHECK_THROWS_AS(parse_control_text(text + "0 0 -> l\n", ef, loes_alphabet()), ParseError);
}

TEST_CASE("sum folds plus from zero") {
    const ForestAutomaton af = af_automaton();
    CHECK(af.sum({}) == 2);
    CHECK(af.sum({1, 1}) == 1);
    CHECK(af.sum({1, 0, 1}) == 0);
}
