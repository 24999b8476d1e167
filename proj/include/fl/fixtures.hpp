#pragma once

// Canonical automata and worked examples used by tests, the CLI `fixtures`
// subcommand and the experiment harnesses.

#include "fl/automaton.hpp"

namespace fl {

// The binary alphabet {0,1} in that order.
Alphabet binary_alphabet();

// EF automaton ({0,1}, {0,1}, or, 0, a.x = a or x); finals {1} recognize
// "some node is labeled 1".
ForestAutomaton ef_automaton();
RecognizedLanguage ef_language();

// AF automaton ({0,1,2}, {0,1}, min, 2, 1.x = 1, 0.x = x capped at 0 on
// {0,2}); finals {1} recognize "every maximal path sees a 1".
ForestAutomaton af_automaton();
RecognizedLanguage af_language();

// Four-letter alphabet {l,o,e,s} in that order.
Alphabet loes_alphabet();

// The three-state {l,o,e,s}-automaton used by the one-atom decomposition
// step: ({0,1,2}, max, 0) with l identity, o constant 2, s = 0,1 -> 1 and
// 2 -> 2, e = 1 -> 1 and 0,2 -> 2.
ForestAutomaton aux_automaton();

// The renaming of EF to {l,o,e,s} with l,e -> 0 and o,s -> 1.
ForestAutomaton b_automaton();

// Recognizer of "some depth-one node (a child of a root) is labeled 1"
// over {0,1}.  States track (some root labeled 1, some depth-one node
// labeled 1); finals are the states with the second bit set.
ForestAutomaton lex_automaton();
RecognizedLanguage lex_language();

// The running four-letter alphabet {a,b,c,d} and its example forest
// d(b(a)+a(d+a+b))+c.
Alphabet abcd_alphabet();
std::string example_forest_text();

// "EX[LEX](0 -> a|c, 1 -> b|c)" over {a,b,c,d}: some depth-one node
// satisfies b|c.
std::string example_formula_text();

// The characteristic relabeling of the example forest under that family.
std::string example_characteristic_text();

}  // namespace fl
