#pragma once

// Branching temporal formulas over forests, in two sorts.  Tree formulas
// are letters, boolean combinations and embedded forest formulas; forest
// formulas are boolean combinations and modalities L(phi_delta)_{delta in
// Delta}, where L is a recognized language over Delta and the family maps
// each delta to a tree formula.  A forest satisfies a modality iff its
// characteristic forest (each node relabeled by the first delta whose
// formula the subtree satisfies, else the last symbol) lies in L.
//
// EF(phi) and AF(phi) are sugar for modalities over the canonical EF/AF
// automata; a direct recursive semantics for them is kept alongside as an
// independent oracle.

#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "fl/automaton.hpp"
#include "fl/forest.hpp"

namespace fl {

struct TreeFormula;
struct ForestFormula;
using TreeFormulaPtr = std::shared_ptr<const TreeFormula>;
using ForestFormulaPtr = std::shared_ptr<const ForestFormula>;

// Which sugar produced a Modal node; EF/AF enable the direct semantics.
enum class ModalSugar { None, EF, AF };

struct ForestFormula {
    enum class Kind { Top, Bot, Not, And, Modal };
    Kind kind = Kind::Top;
    ForestFormulaPtr left, right;  // Not uses left only
    // Modal payload:
    RecognizedLanguage modality;          // language over Delta
    std::string modality_name;            // display/library key
    std::vector<TreeFormulaPtr> family;   // indexed by Delta's declared order
    ModalSugar sugar = ModalSugar::None;
};

struct TreeFormula {
    enum class Kind { Letter, Not, And, Embedded };
    Kind kind = Kind::Letter;
    int letter = -1;               // Letter
    TreeFormulaPtr left, right;    // Not uses left only
    ForestFormulaPtr embedded;     // Embedded
};

// Constructors.
ForestFormulaPtr ff_top();
ForestFormulaPtr ff_bot();
ForestFormulaPtr ff_not(ForestFormulaPtr f);
ForestFormulaPtr ff_and(ForestFormulaPtr l, ForestFormulaPtr r);
ForestFormulaPtr ff_or(ForestFormulaPtr l, ForestFormulaPtr r);
ForestFormulaPtr ff_modal(RecognizedLanguage modality, std::string name,
                          std::vector<TreeFormulaPtr> family,
                          ModalSugar sugar = ModalSugar::None);
// EF(phi) = Modal(EF, {0 -> !phi, 1 -> phi}); AF analogously.
ForestFormulaPtr ff_ef(TreeFormulaPtr phi);
ForestFormulaPtr ff_af(TreeFormulaPtr phi);
TreeFormulaPtr tf_letter(int letter);
TreeFormulaPtr tf_not(TreeFormulaPtr t);
TreeFormulaPtr tf_and(TreeFormulaPtr l, TreeFormulaPtr r);
TreeFormulaPtr tf_or(TreeFormulaPtr l, TreeFormulaPtr r);
TreeFormulaPtr tf_embedded(ForestFormulaPtr f);

// Named modality languages; EF and AF are built in.
class ModalityLibrary {
public:
    static ModalityLibrary with_builtins();
    void add(const std::string& name, RecognizedLanguage lang);
    const RecognizedLanguage* find(const std::string& name) const;

private:
    std::map<std::string, RecognizedLanguage> entries_;
};

// A parsed formula: its alphabet plus exactly one of the two sorts.  A
// formula containing a bare letter outside any modality is tree-sorted;
// otherwise it is forest-sorted (every forest formula is also usable as a
// tree formula via satisfies(Tree,...)).
struct ParsedFormula {
    Alphabet alphabet;
    TreeFormulaPtr tree;      // set iff tree-sorted
    ForestFormulaPtr forest;  // set iff forest-sorted
};

// Grammar (prefix "!" binds tightest, then "&", "|", "->"; all four may
// also be written fully parenthesized):
//   atom := "T" | "F" | letter | "(" formula ")" | "!" atom
//         | name "[" modname "]" "(" sym "->" tf ("," sym "->" tf)* ")"
//         | "EF" "(" tf ")" | "AF" "(" tf ")"
// Bindings must cover the modality's alphabet exactly once each.
ParsedFormula parse_formula(std::string_view text, const Alphabet& alphabet,
                            const ModalityLibrary& lib);

// Renders in a form parse_formula accepts (booleans fully parenthesized).
std::string render_formula(const TreeFormulaPtr& t, const Alphabet& alphabet);
std::string render_formula(const ForestFormulaPtr& f, const Alphabet& alphabet);

// Characteristic relabeling of s under the family (over the modality
// alphabet Delta): node label = first delta whose formula the subtree
// satisfies, else Delta's last symbol.
Forest characteristic_forest(const Forest& s, const std::vector<TreeFormulaPtr>& family);

// Satisfaction.  A tree satisfies a forest formula iff the one-tree forest
// does; a forest satisfies Modal(L, fam) iff its characteristic forest is
// in L.
bool satisfies(const Tree& t, const TreeFormulaPtr& phi);
bool satisfies(const Forest& s, const ForestFormulaPtr& phi);

// Independent oracle: EF/AF-sugared modalities evaluated by the direct
// recursive clauses (EF: some subtree satisfies phi; AF: nonempty, and
// every tree satisfies phi or its child forest satisfies AF recursively);
// other modalities fall back to the characteristic semantics.
bool satisfies_direct(const Tree& t, const TreeFormulaPtr& phi);
bool satisfies_direct(const Forest& s, const ForestFormulaPtr& phi);

// psi_b = phi_b and not phi_c for all c before b; the last symbol maps to
// the conjunction of all other negations.  Exactly one psi_b holds per
// tree, and characteristic forests are unchanged.
std::vector<TreeFormulaPtr> determinize_family(const std::vector<TreeFormulaPtr>& family);

// Letter substitution: replaces each letter atom a by sigma[a] (total on
// the formula's alphabet); modalities push the substitution into their
// family members.
ForestFormulaPtr substitute(const ForestFormulaPtr& phi, const std::vector<TreeFormulaPtr>& sigma);
TreeFormulaPtr substitute(const TreeFormulaPtr& phi, const std::vector<TreeFormulaPtr>& sigma);
// The forest-formula flavor: each sigma[a] is embedded as a tree formula.
ForestFormulaPtr substitute(const ForestFormulaPtr& phi,
                            const std::vector<ForestFormulaPtr>& sigma);

// Inverse image under a literal homomorphism h: Sigma -> Delta: replaces
// each Delta-letter d by the disjunction of its h-preimages (Bot if none).
// satisfies(relabel(s,h), phi) = satisfies(s, inverse_literal_formula(...)).
ForestFormulaPtr inverse_literal_formula(const ForestFormulaPtr& phi, const Alphabet& sigma,
                                         const std::vector<int>& h);

// Compiles to a recognizer over `sigma`: member(compile(phi), s) =
// satisfies(s, phi) for every forest.  Modal nodes become Moore products
// of the compiled family product with the modality automaton, controlled
// by first-final-family-index-else-last; intermediate results are
// minimized.
RecognizedLanguage compile(const ForestFormulaPtr& phi, const Alphabet& sigma);
// Single-tree recognizer: finals decide one-tree forests' membership, and
// the recognized forest language is used for embedded forest formulas.
RecognizedLanguage compile_tree(const TreeFormulaPtr& phi, const Alphabet& sigma);

}  // namespace fl
