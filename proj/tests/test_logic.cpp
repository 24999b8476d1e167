#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <vector>

#include "fl/fixtures.hpp"
#include "fl/logic.hpp"
#include "test_util.hpp"

using namespace fl;

namespace {

ModalityLibrary library_with_lex() {
    ModalityLibrary lib = ModalityLibrary::with_builtins();
    lib.add("LEX", lex_language());
    return lib;
}

ParsedFormula parse4(const std::string& text) {
    static const Alphabet sigma = abcd_alphabet();
    static const ModalityLibrary lib = library_with_lex();
    return parse_formula(text, sigma, lib);
}

Forest forest4(const std::string& text) { return parse_forest(text, abcd_alphabet()); }

// Collects every subtree of every tree in the forest.
void all_subtrees(const Forest& s, std::vector<Tree>& out) {
    for (const auto& t : s.trees) {
        out.push_back(t);
        all_subtrees(t.children, out);
    }
}

}  // namespace

TEST_CASE("parsing: constants, sorts, sugar and precedence") {
    auto top = parse4("T");
    REQUIRE(top.forest);
    CHECK(!top.tree);
    CHECK(top.forest->kind == ForestFormula::Kind::Top);
    CHECK(parse4("F").forest->kind == ForestFormula::Kind::Bot);

    auto letter = parse4("a");
    REQUIRE(letter.tree);
    CHECK(!letter.forest);
    CHECK(letter.tree->kind == TreeFormula::Kind::Letter);
    CHECK(letter.tree->letter == 0);

    auto ef = parse4("EF(b)");
    REQUIRE(ef.forest);
    CHECK(ef.forest->kind == ForestFormula::Kind::Modal);
    CHECK(ef.forest->sugar == ModalSugar::EF);
    CHECK(ef.forest->modality_name == "EF");
    REQUIRE(ef.forest->family.size() == 2);
    CHECK(ef.forest->family[1]->kind == TreeFormula::Kind::Letter);
    CHECK(ef.forest->family[0]->kind == TreeFormula::Kind::Not);
    CHECK(ef.forest->modality.automaton->alphabet().symbols() ==
          std::vector<std::string>{"0", "1"});
    CHECK(ef.forest->modality.finals == std::vector<int>{1});

    CHECK(parse4("AF(!b)").forest->sugar == ModalSugar::AF);

    // A bare letter next to a forest formula forces the tree sort.
    auto mixed = parse4("(a & EF(b))");
    REQUIRE(mixed.tree);
    CHECK(mixed.tree->kind == TreeFormula::Kind::And);
    CHECK(mixed.tree->right->kind == TreeFormula::Kind::Embedded);

    // ! binds tighter than &: on an a-labeled leaf, !a & b is false while
    // !(a & b) would be true.
    Tree leaf_a{0, {}};
    CHECK_FALSE(satisfies(leaf_a, parse4("!a & b").tree));
    CHECK(satisfies(leaf_a, parse4("!(a & b)").tree));

    // & binds tighter than |.
    CHECK(satisfies(leaf_a, parse4("a | b & c").tree));

    // -> is right associative: on a d-labeled leaf, a -> (b -> c) holds
    // vacuously while (a -> b) -> c fails.
    Tree leaf_d{3, {}};
    CHECK(satisfies(leaf_d, parse4("a -> b -> c").tree));
    CHECK_FALSE(satisfies(leaf_d, parse4("(a -> b) -> c").tree));
}

TEST_CASE("parsing: the four-letter example formula") {
    auto phi = parse4(example_formula_text());
    REQUIRE(phi.forest);
    CHECK(!phi.tree);
    CHECK(phi.forest->kind == ForestFormula::Kind::Modal);
    CHECK(phi.forest->sugar == ModalSugar::None);
    CHECK(phi.forest->modality_name == "EX[LEX]");
    CHECK(phi.forest->modality.automaton->num_states() == 4);
    CHECK(phi.forest->modality.finals == std::vector<int>{2, 3});
    REQUIRE(phi.forest->family.size() == 2);
}

TEST_CASE("parsing errors name the offender") {
    const Alphabet sigma = abcd_alphabet();
    const ModalityLibrary builtins = ModalityLibrary::with_builtins();
    auto expect_error = [&](const std::string& text, const std::string& needle) {
        try {
            parse_formula(text, sigma, builtins);
            FAIL_CHECK("no error for: " << text);
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    expect_error("EX[LEX](0 -> a, 1 -> b)", "unknown modality 'LEX'");
    expect_error("x", "unknown symbol 'x'");
    expect_error("EF(b", "expected ')'");
    expect_error("EF[EF](1 -> b)", "misses binding for '0'");
    expect_error("EF[EF](1 -> b, 1 -> c)", "duplicate binding for '1'");
    expect_error("EF[EF](1 -> b, x -> c)", "not a letter of modality 'EF'");
    expect_error("T T", "trailing input");
    expect_error("", "expected a formula");
    expect_error("a &", "expected a formula");

    CHECK_THROWS_AS(ff_modal(ef_language(), "EF", {tf_letter(0)}), ParseError);
    ModalityLibrary dup = ModalityLibrary::with_builtins();
    CHECK_THROWS_AS(dup.add("EF", ef_language()), ParseError);
}

TEST_CASE("rendering re-parses to the same meaning") {
    const Alphabet sigma = abcd_alphabet();
    const ModalityLibrary lib = library_with_lex();

    auto example = parse4(example_formula_text());
    std::string rendered = render_formula(example.forest, sigma);
    CHECK(rendered.rfind("EX[LEX](", 0) == 0);
    auto reparsed = parse_formula(rendered, sigma, lib);
    REQUIRE(reparsed.forest);

    SplitMix64 rng(20260814);
    std::vector<Forest> probes;
    for (int i = 0; i < 60; ++i) probes.push_back(random_forest(sigma, 4, 3, rng.next()));
    for (const auto& s : probes)
        CHECK(satisfies(s, example.forest) == satisfies(s, reparsed.forest));

    for (int seed = 0; seed < 20; ++seed) {
        SplitMix64 gen(1000 + seed);
        auto phi = testutil::random_forest_formula(gen, sigma, 3, true);
        auto back = parse_formula(render_formula(phi, sigma), sigma, lib);
        REQUIRE(back.forest);
        for (int i = 0; i < 25; ++i)
            CHECK(satisfies(probes[i], phi) == satisfies(probes[i], back.forest));
    }
}

TEST_CASE("characteristic forest of the running example") {
    auto phi = parse4(example_formula_text());
    Forest s = forest4(example_forest_text());
    Forest chi = characteristic_forest(s, phi.forest->family);
    CHECK(render_forest(chi, binary_alphabet()) == example_characteristic_text());
    CHECK(render_forest(chi, binary_alphabet()) == "1(1(0)+0(1+0+1))+0");

    CHECK(characteristic_forest(Forest{}, phi.forest->family).empty());

    // For this family the relabeling a,c -> 0 and b,d -> 1 is exactly the
    // characteristic map.
    SplitMix64 rng(7);
    for (int i = 0; i < 200; ++i) {
        Forest r = random_forest(abcd_alphabet(), 4, 3, rng.next());
        CHECK(characteristic_forest(r, phi.forest->family) == relabel(r, {0, 1, 0, 1}));
    }

    // A singleton family labels every node 0.
    Forest single = characteristic_forest(s, {tf_embedded(ff_top())});
    for (const auto& t : single.trees) CHECK(t.label == 0);

    CHECK_THROWS_AS(characteristic_forest(s, {}), ParseError);
}

TEST_CASE("satisfaction basics") {
    auto efb = parse4("EF(b)").forest;
    CHECK(satisfies(forest4("a(b)"), efb));
    CHECK_FALSE(satisfies(forest4("a"), efb));
    CHECK(satisfies(forest4("b"), efb));
    CHECK_FALSE(satisfies(forest4("()"), efb));
    CHECK(satisfies(forest4("d(d(d(b)))"), efb));
    CHECK_FALSE(satisfies(forest4("d(d(d(a)))+c"), efb));

    auto afb = parse4("AF(b)").forest;
    CHECK(satisfies(forest4("b"), afb));
    CHECK_FALSE(satisfies(forest4("()"), afb));
    CHECK_FALSE(satisfies(forest4("a+b"), afb));
    CHECK(satisfies(forest4("a(b)+b"), afb));
    CHECK(satisfies(forest4("a(a(b)+b)"), afb));
    CHECK_FALSE(satisfies(forest4("a(a+b)"), afb));

    CHECK(satisfies(forest4("()"), parse4("T").forest));
    CHECK_FALSE(satisfies(forest4("()"), parse4("F").forest));
    CHECK(satisfies(forest4("()"), parse4("!F").forest));
    CHECK(satisfies(forest4("a(b)"), parse4("(EF(b) & !AF(c))").forest));

    // The running example: the example forest satisfies the example formula.
    CHECK(satisfies(forest4(example_forest_text()), parse4(example_formula_text()).forest));
    CHECK(satisfies_direct(forest4(example_forest_text()),
                           parse4(example_formula_text()).forest));
    // ...but not with the family swapped, which asks for an a/c node at
    // depth one of the characteristic forest.
    CHECK_FALSE(satisfies(forest4("a(a+c)"), parse4(example_formula_text()).forest));

    Tree leaf_b{1, {}};
    CHECK(satisfies(leaf_b, parse4("b").tree));
    CHECK_FALSE(satisfies(leaf_b, parse4("a").tree));
    CHECK(satisfies(leaf_b, tf_embedded(afb)));
}

TEST_CASE("direct EF/AF semantics agree with the modal encoding") {
    const Alphabet sigma = abcd_alphabet();
    for (int seed = 0; seed < 20; ++seed) {
        SplitMix64 gen(9000 + seed);
        auto phi = testutil::random_forest_formula(gen, sigma, 4, true);
        SplitMix64 rng(40 + seed);
        for (int i = 0; i < 100; ++i) {
            Forest s = random_forest(sigma, 4, 3, rng.next());
            CHECK(satisfies(s, phi) == satisfies_direct(s, phi));
        }
    }
}

TEST_CASE("determinized families pick the same labels") {
    auto family = parse4(example_formula_text()).forest->family;
    auto det = determinize_family(family);
    REQUIRE(det.size() == 2);

    SplitMix64 rng(11);
    std::vector<Tree> trees;
    for (int i = 0; i < 40; ++i) {
        Forest s = random_forest(abcd_alphabet(), 4, 3, rng.next());
        CHECK(characteristic_forest(s, family) == characteristic_forest(s, det));
        all_subtrees(s, trees);
    }

    // Exactly one member of a determinized family holds on any tree.
    auto family3 = std::vector<TreeFormulaPtr>{tf_letter(0), tf_letter(1), tf_letter(2)};
    auto det3 = determinize_family(family3);
    REQUIRE(det3.size() == 3);
    // The last member is a pure conjunction of negations.
    CHECK(det3[2]->kind == TreeFormula::Kind::And);
    CHECK(det3[2]->left->kind == TreeFormula::Kind::Not);
    CHECK(det3[2]->right->kind == TreeFormula::Kind::Not);
    for (const auto& t : trees) {
        int holds = 0;
        for (const auto& psi : det) holds += satisfies(t, psi) ? 1 : 0;
        CHECK(holds == 1);
        holds = 0;
        for (const auto& psi : det3) holds += satisfies(t, psi) ? 1 : 0;
        CHECK(holds == 1);
    }

    // Determinization invariance of modal satisfaction.
    auto original = ff_modal(lex_language(), "EX[LEX]", family);
    auto determinized = ff_modal(lex_language(), "EX[LEX]", det);
    for (int i = 0; i < 200; ++i) {
        Forest s = random_forest(abcd_alphabet(), 4, 3, rng.next());
        CHECK(satisfies(s, original) == satisfies(s, determinized));
    }

    // Singleton families determinize to the embedded truth.
    auto single = determinize_family({tf_letter(2)});
    REQUIRE(single.size() == 1);
    CHECK(single[0]->kind == TreeFormula::Kind::Embedded);
    CHECK(single[0]->embedded->kind == ForestFormula::Kind::Top);
}

TEST_CASE("substitution is structural and pushes into families") {
    std::vector<TreeFormulaPtr> sigma{tf_letter(1), tf_letter(0), tf_letter(3), tf_letter(2)};
    CHECK(substitute(tf_letter(1), sigma) == sigma[1]);
    CHECK(substitute(ff_top(), sigma)->kind == ForestFormula::Kind::Top);
    CHECK(substitute(ff_bot(), sigma)->kind == ForestFormula::Kind::Bot);

    auto efb = parse4("EF(b)").forest;
    auto swapped = substitute(efb, sigma);
    CHECK(swapped->kind == ForestFormula::Kind::Modal);
    CHECK(swapped->sugar == ModalSugar::EF);  // sugar survives substitution
    // EF(b) with a<->b, c<->d swapped is EF(a).
    CHECK(satisfies(forest4("c(a)"), swapped));
    CHECK_FALSE(satisfies(forest4("c(b)"), swapped));

    // Forest-formula substitution embeds its entries.
    std::vector<ForestFormulaPtr> fsigma{ff_top(), ff_bot(), ff_top(), ff_bot()};
    auto embedded = substitute(parse4("EF(b)").forest, fsigma);
    // b maps to Bot: nothing satisfies EF(F).
    CHECK_FALSE(satisfies(forest4("a(b)+c"), embedded));
    auto embedded_a = substitute(parse4("EF(a)").forest, fsigma);
    // a maps to Top: any nonempty forest has a node satisfying it.
    CHECK(satisfies(forest4("d"), embedded_a));
    CHECK_FALSE(satisfies(forest4("()"), embedded_a));
}

TEST_CASE("inverse literal formulas mirror relabeling") {
    const Alphabet sigma = abcd_alphabet();
    const Alphabet delta = binary_alphabet();
    const ModalityLibrary lib = library_with_lex();
    const std::vector<int> h{0, 1, 0, 1};

    // Identity relabeling is a no-op up to logical equivalence.
    auto efb = parse4("EF(b)").forest;
    auto same = inverse_literal_formula(efb, sigma, {0, 1, 2, 3});
    SplitMix64 rng(3);
    for (int i = 0; i < 100; ++i) {
        Forest s = random_forest(sigma, 4, 3, rng.next());
        CHECK(satisfies(s, efb) == satisfies(s, same));
    }

    // The defining law, for several formulas over the binary alphabet.
    std::vector<ForestFormulaPtr> phis{
        parse_formula("EF(1)", delta, lib).forest,
        parse_formula("AF(0)", delta, lib).forest,
        parse_formula("EX[LEX](0 -> 1, 1 -> 0)", delta, lib).forest,
        parse_formula("(EF(1) & !AF(1))", delta, lib).forest,
    };
    for (const auto& phi : phis) {
        auto pulled = inverse_literal_formula(phi, sigma, h);
        for (int i = 0; i < 150; ++i) {
            Forest s = random_forest(sigma, 4, 3, rng.next());
            CHECK(satisfies(s, pulled) == satisfies(relabel(s, h), phi));
        }
    }

    // A letter with an empty preimage becomes the embedded falsehood.
    auto collapsed = inverse_literal_formula(parse_formula("EF(1)", delta, lib).forest, delta,
                                             {0, 0});
    for (int i = 0; i < 50; ++i) {
        Forest s = random_forest(delta, 3, 3, rng.next());
        CHECK_FALSE(satisfies(s, collapsed));
        CHECK(satisfies(s, collapsed) == satisfies(relabel(s, {0, 0}),
                                                   parse_formula("EF(1)", delta, lib).forest));
    }

    CHECK_THROWS_AS(inverse_literal_formula(efb, sigma, {0, 1}), ParseError);
}

TEST_CASE("compilation matches satisfaction on the examples") {
    const Alphabet sigma = abcd_alphabet();

    auto efb = compile(parse4("EF(b)").forest, sigma);
    CHECK(member(efb, forest4("a(b)")));
    CHECK_FALSE(member(efb, forest4("a")));
    CHECK(member(efb, forest4("b")));
    CHECK_FALSE(member(efb, forest4("()")));
    // Its minimal recognizer is the EF automaton renamed onto a,b,c,d with
    // b the marked letter.
    RecognizedLanguage expected(
        std::make_shared<ForestAutomaton>(rename(ef_automaton(), sigma, {0, 1, 0, 0})),
        {1});
    CHECK(is_isomorphic(efb, expected));

    auto top = compile(ff_top(), sigma);
    auto bot = compile(ff_bot(), sigma);
    CHECK(top.automaton->num_states() == 1);
    CHECK(member(top, forest4("()")));
    CHECK(member(top, forest4("d(a+b)")));
    CHECK_FALSE(member(bot, forest4("()")));
    CHECK_FALSE(member(bot, forest4("d(a+b)")));

    auto example = parse4(example_formula_text()).forest;
    auto compiled = compile(example, sigma);
    CHECK(member(compiled, forest4(example_forest_text())));
    // Minimal form: the depth-one automaton renamed onto a,b,c,d.
    RecognizedLanguage lex_renamed(
        std::make_shared<ForestAutomaton>(rename(lex_automaton(), sigma, {0, 1, 0, 1})),
        {2, 3});
    CHECK(is_isomorphic(compiled, lex_renamed));

    SplitMix64 rng(21);
    for (int i = 0; i < 300; ++i) {
        Forest s = random_forest(sigma, 4, 3, rng.next());
        CHECK(member(compiled, s) == satisfies(s, example));
    }
}

TEST_CASE("compilation matches satisfaction on random formulas") {
    const Alphabet sigma = abcd_alphabet();
    for (int seed = 0; seed < 10; ++seed) {
        SplitMix64 gen(5000 + seed);
        auto phi = testutil::random_forest_formula(gen, sigma, 3, false);
        auto lang = compile(phi, sigma);
        SplitMix64 rng(70 + seed);
        for (int i = 0; i < 200; ++i) {
            Forest s = random_forest(sigma, 4, 3, rng.next());
            CHECK(member(lang, s) == satisfies(s, phi));
        }
    }
    for (int seed = 0; seed < 5; ++seed) {
        SplitMix64 gen(6000 + seed);
        auto phi = testutil::random_forest_formula(gen, sigma, 3, true);
        auto lang = compile(phi, sigma);
        SplitMix64 rng(90 + seed);
        for (int i = 0; i < 100; ++i) {
            Forest s = random_forest(sigma, 4, 3, rng.next());
            CHECK(member(lang, s) == satisfies(s, phi));
        }
    }
}

TEST_CASE("Moore states decompose into family values and characteristic value") {
    const Alphabet sigma = abcd_alphabet();
    auto check_state_law = [&](const ForestFormulaPtr& modal) {
        REQUIRE(modal->kind == ForestFormula::Kind::Modal);
        const auto& family = modal->family;
        const int k = static_cast<int>(family.size());
        std::vector<RecognizedLanguage> langs;
        std::vector<AutomatonPtr> factors;
        for (const auto& m : family) {
            langs.push_back(compile_tree(m, sigma));
            factors.push_back(langs.back().automaton);
        }
        ForestAutomaton prod = direct_product(factors);
        const ForestAutomaton& right = *modal->modality.automaton;
        ControlFunction alpha;
        alpha.table.assign(sigma.size(), std::vector<int>(prod.num_states(), 0));
        for (int idx = 0; idx < prod.num_states(); ++idx) {
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
        SplitMix64 rng(123);
        for (int i = 0; i < 100; ++i) {
            Forest s = random_forest(sigma, 4, 3, rng.next());
            int left = 0;
            for (int j = 0; j < k; ++j)
                left = left * factors[j]->num_states() + evaluate(*factors[j], s);
            int chi = evaluate(right, characteristic_forest(s, family));
            CHECK(evaluate(m, s) == left * right.num_states() + chi);
        }
    };
    check_state_law(parse4(example_formula_text()).forest);
    check_state_law(parse4("EF(b)").forest);
    check_state_law(parse4("AF((a & !b))").forest);
}

TEST_CASE("substituting a determinized family into the modality formula") {
    const Alphabet sigma = abcd_alphabet();
    const Alphabet delta = binary_alphabet();
    auto family = parse4(example_formula_text()).forest->family;
    auto det = determinize_family(family);

    for (int seed = 0; seed < 10; ++seed) {
        SplitMix64 gen(8000 + seed);
        auto psi = testutil::random_forest_formula(gen, delta, 3, seed % 2 == 0);
        auto lang = compile(psi, delta);
        auto as_modal = ff_modal(lang, "C", family);
        auto as_subst = substitute(psi, det);
        SplitMix64 rng(300 + seed);
        for (int i = 0; i < 100; ++i) {
            Forest s = random_forest(sigma, 4, 3, rng.next());
            CHECK(satisfies(s, as_modal) == satisfies(s, as_subst));
        }
    }
}
