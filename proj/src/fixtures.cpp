#include "fl/fixtures.hpp"

namespace fl {

Alphabet binary_alphabet() { return Alphabet({"0", "1"}); }

ForestAutomaton ef_automaton() {
    // plus = logical or; letter 0 acts as identity, letter 1 is constant 1.
    return ForestAutomaton("ef", binary_alphabet(), {"0", "1"}, 0,
                           {{0, 1}, {1, 1}},
                           {{0, 1}, {1, 1}});
}

RecognizedLanguage ef_language() {
    return RecognizedLanguage(std::make_shared<ForestAutomaton>(ef_automaton()), {1});
}

ForestAutomaton af_automaton() {
    // States 0 < 1 < 2 with plus = min and zero (the empty-forest value) 2.
    // Letter 1 maps everything to 1; letter 0 keeps 1 and collapses 0,2 to 0.
    return ForestAutomaton("af", binary_alphabet(), {"0", "1", "2"}, 2,
                           {{0, 0, 0}, {0, 1, 1}, {0, 1, 2}},
                           {{0, 1, 0}, {1, 1, 1}});
}

RecognizedLanguage af_language() {
    return RecognizedLanguage(std::make_shared<ForestAutomaton>(af_automaton()), {1});
}

Alphabet loes_alphabet() { return Alphabet({"l", "o", "e", "s"}); }

ForestAutomaton aux_automaton() {
    return ForestAutomaton("aux", loes_alphabet(), {"0", "1", "2"}, 0,
                           {{0, 1, 2}, {1, 1, 2}, {2, 2, 2}},  // max
                           {
                               {0, 1, 2},  // l: identity
                               {2, 2, 2},  // o: constant 2
                               {2, 1, 2},  // e: 1 -> 1, else 2
                               {1, 1, 2},  // s: 0,1 -> 1, 2 -> 2
                           });
}

ForestAutomaton b_automaton() {
    // rename(ef, {l,o,e,s}) with l,e -> letter 0 and o,s -> letter 1.
    return rename(ef_automaton(), loes_alphabet(), {0, 1, 0, 1});
}

ForestAutomaton lex_automaton() {
    // States are (h,d) pairs: h = some root labeled 1, d = some depth-one
    // node labeled 1.  Order: 00, 10, 01, 11.  plus is componentwise or;
    // a.(h,d) = (a==1, h) since the roots of the child forest become the
    // depth-one nodes of the new tree.
    return ForestAutomaton("lex", binary_alphabet(), {"00", "10", "01", "11"}, 0,
                           {{0, 1, 2, 3}, {1, 1, 3, 3}, {2, 3, 2, 3}, {3, 3, 3, 3}},
                           {
                               {0, 2, 0, 2},  // letter 0: (h,d) -> (0,h)
                               {1, 3, 1, 3},  // letter 1: (h,d) -> (1,h)
                           });
}

RecognizedLanguage lex_language() {
    return RecognizedLanguage(std::make_shared<ForestAutomaton>(lex_automaton()), {2, 3});
}

Alphabet abcd_alphabet() { return Alphabet({"a", "b", "c", "d"}); }

std::string example_forest_text() { return "d(b(a)+a(d+a+b))+c"; }

std::string example_formula_text() { return "EX[LEX](0 -> a|c, 1 -> b|c)"; }

std::string example_characteristic_text() { return "1(1(0)+0(1+0+1))+0"; }

}  // namespace fl
