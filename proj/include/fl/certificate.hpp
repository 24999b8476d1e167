#pragma once

// Membership certificates for the Moore pseudovariety generated by the EF
// automaton: expression trees over the closure operations.  A certificate
// evaluates bottom-up to a concrete automaton; Divide nodes claim their
// target automaton is a quotient of the connected part of the inner
// expression's value (and evaluate to the target, so parents build on it).
//
// Certificates serialize to an indented text format, one node per line;
// the verifier consumes the same format.

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fl/automaton.hpp"

namespace fl {

class CertificateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Certificate;
using CertificatePtr = std::shared_ptr<const Certificate>;

struct Certificate {
    enum class Kind {
        BaseEF,         // the EF automaton
        Rename,         // letter renaming onto a target alphabet
        DirectProduct,  // componentwise product of the children
        Moore,          // Moore product of children[0] and children[1]
        Connected,      // connected part
        Quotient,       // quotient by the stated partition
        Divide,         // claims `target` is a quotient of connected(child)
        Generator,      // explorer trace leaf: a named starting automaton
    };

    Kind kind = Kind::BaseEF;
    // Rename: target alphabet symbols and map target letter -> child letter.
    std::vector<std::string> rename_symbols;
    std::vector<int> rename_map;
    // Moore: control table keyed (letter of left child, state of left child).
    ControlFunction control;
    // Quotient: partition blocks as lists of child state names.
    std::vector<std::vector<std::string>> blocks;
    // Divide: the claimed quotient; Generator: the starting automaton.
    AutomatonPtr target;

    std::vector<CertificatePtr> children;
};

CertificatePtr cert_base_ef();
CertificatePtr cert_rename(const Alphabet& target, std::vector<int> map, CertificatePtr inner);
CertificatePtr cert_direct_product(std::vector<CertificatePtr> inners);
CertificatePtr cert_moore(CertificatePtr left, CertificatePtr right, ControlFunction control);
CertificatePtr cert_connected(CertificatePtr inner);
CertificatePtr cert_quotient(std::vector<std::vector<std::string>> blocks, CertificatePtr inner);
CertificatePtr cert_divide(AutomatonPtr target, CertificatePtr inner);
CertificatePtr cert_generator(AutomatonPtr a);

// Evaluates the expression bottom-up.  Divide and Generator nodes evaluate
// to their stored automaton.  Throws CertificateError naming the offending
// node path on ill-formed constructions.
ForestAutomaton build_certificate(const Certificate& cert);

struct VerificationResult {
    bool ok = false;
    std::vector<std::string> issues;  // each names the offending node path
};

// Checks, per node: only BaseEF leaves (Generator is rejected); every
// construction well-formed; every Divide(T, inner) passes the pairing test
// -- in the connected part of inner's value paired with T, equal first
// components force equal second components, and the second components
// cover all of T's connected states.  Finally the certificate's value must
// be isomorphic to `target`.
VerificationResult verify_certificate(const Certificate& cert, const ForestAutomaton& target);

std::string render_certificate(const Certificate& cert);
// Throws ParseError on malformed text (CertificateError is reserved for
// structural problems found while building or verifying).
CertificatePtr parse_certificate(const std::string& text);

}  // namespace fl
