// Python bindings for the main operations: parsing and evaluation,
// recognizers, products, the equation checks, the EF decision and
// decomposition, the formula pipeline, and the experiment harnesses.

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fl/automaton.hpp"
#include "fl/certificate.hpp"
#include "fl/enumerate.hpp"
#include "fl/explorer.hpp"
#include "fl/fixtures.hpp"
#include "fl/forest.hpp"
#include "fl/logic.hpp"
#include "fl/varieties.hpp"

namespace py = pybind11;

namespace {

using namespace fl;

AutomatonPtr shared_copy(const ForestAutomaton& a) {
    return std::make_shared<const ForestAutomaton>(a);
}

ControlFunction control_from_table(const ForestAutomaton& a, const ForestAutomaton& b,
                                   const std::vector<std::vector<int>>& table) {
    if (static_cast<int>(table.size()) != a.alphabet().size()) {
        throw std::invalid_argument("control table needs one row per left-factor letter");
    }
    for (const std::vector<int>& row : table) {
        if (static_cast<int>(row.size()) != a.num_states()) {
            throw std::invalid_argument("control rows need one entry per left-factor state");
        }
        for (int cell : row) {
            if (cell < 0 || cell >= b.alphabet().size()) {
                throw std::invalid_argument("control entries must index right-factor letters");
            }
        }
    }
    ControlFunction alpha;
    alpha.table = table;
    return alpha;
}

std::vector<EquationId> selection_from_name(const std::string& name) {
    if (name == "all") return all_equations();
    if (name == "ef") return ef_equations();
    if (name == "af") return af_equations();
    if (const std::optional<EquationId> id = equation_from_name(name)) return {*id};
    throw std::invalid_argument("unknown equation selection '" + name + "'");
}

// Parsed formula plus its alphabet, the unit the pipeline functions take.
struct Formula {
    ParsedFormula parsed;
};

bool formula_satisfied(const Forest& s, const Formula& f) {
    if (f.parsed.forest) return satisfies(s, f.parsed.forest);
    if (s.size() == 1) return satisfies(s.trees[0], f.parsed.tree);
    throw std::invalid_argument("tree-sorted formula needs a single-tree forest");
}

}  // namespace

PYBIND11_MODULE(_forestlogic, m) {
    m.doc() = "Forest automata, branching temporal logics over unranked forests, and the "
              "decidable characterization of EF-definable languages";
    m.attr("__version__") = "0.1.0";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<AutomatonError>(m, "AutomatonError", PyExc_ValueError);
    py::register_exception<SizeGuardError>(m, "SizeGuardError", PyExc_RuntimeError);
    py::register_exception<CertificateError>(m, "CertificateError", PyExc_ValueError);
    py::register_exception<VarietyError>(m, "VarietyError", PyExc_RuntimeError);
    py::register_exception<ExplorerError>(m, "ExplorerError", PyExc_RuntimeError);

    py::class_<Alphabet>(m, "Alphabet")
        .def(py::init<std::vector<std::string>>(), py::arg("symbols"))
        .def("symbols", &Alphabet::symbols)
        .def("index_of", &Alphabet::index_of, py::arg("symbol"))
        .def("__len__", &Alphabet::size)
        .def("__eq__", [](const Alphabet& a, const Alphabet& b) { return a == b; })
        .def("__repr__", [](const Alphabet& a) {
            std::string out = "Alphabet([";
            for (int i = 0; i < a.size(); ++i) {
                if (i) out += ", ";
                out += "'" + a.symbol(i) + "'";
            }
            return out + "])";
        });

    py::class_<Forest>(m, "Forest")
        .def("size", &Forest::size)
        .def("__eq__", [](const Forest& a, const Forest& b) { return a == b; });

    m.def("parse_forest", &parse_forest, py::arg("text"), py::arg("alphabet"));
    m.def("render_forest", &render_forest, py::arg("forest"), py::arg("alphabet"));
    m.def("relabel", &relabel, py::arg("forest"), py::arg("h"));
    m.def("random_forest", &random_forest, py::arg("alphabet"), py::arg("max_depth"),
          py::arg("max_arity"), py::arg("seed"));

    py::class_<ForestAutomaton>(m, "ForestAutomaton")
        .def_property_readonly("name", &ForestAutomaton::name)
        .def_property_readonly("num_states", &ForestAutomaton::num_states)
        .def_property_readonly("state_names", &ForestAutomaton::state_names)
        .def_property_readonly("zero", &ForestAutomaton::zero)
        .def_property_readonly("alphabet", &ForestAutomaton::alphabet)
        .def("plus", &ForestAutomaton::plus, py::arg("p"), py::arg("q"))
        .def("action", &ForestAutomaton::action, py::arg("letter"), py::arg("state"))
        .def("state_index", &ForestAutomaton::state_index, py::arg("name"))
        .def("__repr__", [](const ForestAutomaton& a) {
            return "<ForestAutomaton '" + a.name() + "', " + std::to_string(a.num_states()) +
                   " states>";
        });

    py::class_<RecognizedLanguage>(m, "RecognizedLanguage")
        .def(py::init([](const ForestAutomaton& a, std::vector<int> finals) {
                 return RecognizedLanguage(shared_copy(a), std::move(finals));
             }),
             py::arg("automaton"), py::arg("finals"))
        .def_property_readonly("automaton",
                               [](const RecognizedLanguage& l) { return *l.automaton; })
        .def_property_readonly("finals",
                               [](const RecognizedLanguage& l) { return l.finals; });

    m.def("evaluate", py::overload_cast<const ForestAutomaton&, const Forest&>(&evaluate),
          py::arg("automaton"), py::arg("forest"));
    m.def("member", &member, py::arg("language"), py::arg("forest"));
    m.def(
        "minimize", [](const RecognizedLanguage& lang) { return minimize(lang); },
        py::arg("language"));
    m.def(
        "connected_part",
        [](const ForestAutomaton& a) { return connected_part(a); }, py::arg("automaton"));
    m.def(
        "direct_product",
        [](const ForestAutomaton& a, const ForestAutomaton& b) { return direct_product(a, b); },
        py::arg("left"), py::arg("right"));
    m.def(
        "moore_product",
        [](const ForestAutomaton& a, const ForestAutomaton& b,
           const std::vector<std::vector<int>>& table) {
            return moore_product(a, b, control_from_table(a, b, table));
        },
        py::arg("left"), py::arg("right"), py::arg("control"),
        "Moore product; control[letter][updated_left_state] indexes the right factor's "
        "letters.");
    m.def("rename", &fl::rename, py::arg("automaton"), py::arg("target"), py::arg("h"));
    m.def(
        "is_isomorphic",
        [](const ForestAutomaton& a, const ForestAutomaton& b) { return is_isomorphic(a, b); },
        py::arg("left"), py::arg("right"));

    m.def("parse_automaton_text", [](const std::string& text) {
        AutomatonFile file = parse_automaton_text(text);
        return py::make_tuple(*file.automaton, file.finals);
    });
    m.def("render_automaton_text", &render_automaton_text, py::arg("automaton"),
          py::arg("finals") = std::nullopt);

    m.def(
        "check_equations",
        [](const ForestAutomaton& a, const std::string& selection) {
            const EquationReport report = check_equations(a, selection_from_name(selection));
            return py::make_tuple(report.all_pass(), render_equation_report(report));
        },
        py::arg("automaton"), py::arg("equations") = "all",
        "Returns (all_pass, report_text); equations is a name or one of 'ef', 'af', 'all'.");
    m.def(
        "decide_ef_definable",
        [](const RecognizedLanguage& lang) {
            const EfDecision decision = decide_ef_definable(lang);
            return py::make_tuple(decision.definable, render_equation_report(decision.report),
                                  decision.minimal);
        },
        py::arg("language"), "Returns (definable, report_text, minimal_language).");
    m.def(
        "decompose_ef",
        [](const ForestAutomaton& a) { return render_certificate(*decompose_ef(a)); },
        py::arg("automaton"), "Returns the membership certificate in its text format.");
    m.def(
        "verify_certificate",
        [](const std::string& text, const ForestAutomaton& target) {
            const VerificationResult result =
                verify_certificate(*parse_certificate(text), target);
            return py::make_tuple(result.ok, result.issues);
        },
        py::arg("certificate_text"), py::arg("target"));
    m.def(
        "build_certificate",
        [](const std::string& text) { return build_certificate(*parse_certificate(text)); },
        py::arg("certificate_text"));

    py::class_<Formula>(m, "Formula")
        .def_property_readonly(
            "is_forest_sorted",
            [](const Formula& f) { return static_cast<bool>(f.parsed.forest); })
        .def_property_readonly("alphabet",
                               [](const Formula& f) { return f.parsed.alphabet; })
        .def("__repr__", [](const Formula& f) {
            return "<Formula over " + std::to_string(f.parsed.alphabet.size()) + " letters>";
        });
    m.def(
        "parse_formula",
        [](const std::string& text, const Alphabet& sigma,
           const std::map<std::string, RecognizedLanguage>& modalities) {
            ModalityLibrary lib = ModalityLibrary::with_builtins();
            for (const auto& [name, lang] : modalities) lib.add(name, lang);
            return Formula{parse_formula(text, sigma, lib)};
        },
        py::arg("text"), py::arg("alphabet"),
        py::arg("modalities") = std::map<std::string, RecognizedLanguage>{},
        "Parses with the built-in EF and AF modalities plus any named extras.");
    m.def("satisfies", &formula_satisfied, py::arg("forest"), py::arg("formula"));
    m.def(
        "compile",
        [](const Formula& f) {
            return f.parsed.forest ? compile(f.parsed.forest, f.parsed.alphabet)
                                   : compile_tree(f.parsed.tree, f.parsed.alphabet);
        },
        py::arg("formula"), "Compiles to a recognizer over the formula's alphabet.");

    m.def(
        "explore",
        [](const std::vector<ForestAutomaton>& generators, int max_states,
           const std::vector<Alphabet>& alphabets, int max_rounds) {
            ClosureConfig cfg;
            cfg.generators = generators;
            cfg.max_states = max_states;
            cfg.target_alphabets = alphabets;
            cfg.max_rounds = max_rounds;
            const ClosureResult result = closure_explore(cfg);
            std::vector<py::tuple> entries;
            entries.reserve(result.entries.size());
            for (const ClosureEntry& entry : result.entries) {
                entries.push_back(py::make_tuple(entry.name, *entry.automaton,
                                                 render_certificate(*entry.trace)));
            }
            return py::make_tuple(entries, result.saturated, result.rounds);
        },
        py::arg("generators"), py::arg("max_states") = 4,
        py::arg("alphabets") = std::vector<Alphabet>{}, py::arg("max_rounds") = 8,
        "Returns ([(name, automaton, trace_text)], saturated, rounds).");
    m.def(
        "conjecture_a_report",
        [](int bound, int max_rounds) {
            return render_conjecture_a(conjecture_a_experiment(bound, max_rounds));
        },
        py::arg("bound"), py::arg("max_rounds") = 12);
    m.def(
        "conjecture_b_report",
        [](int bound, int max_rounds) {
            return render_conjecture_b(conjecture_b_experiment(bound, max_rounds));
        },
        py::arg("bound"), py::arg("max_rounds") = 12);

    m.def("binary_alphabet", &binary_alphabet);
    m.def("abcd_alphabet", &abcd_alphabet);
    m.def("ef_automaton", &ef_automaton);
    m.def("af_automaton", &af_automaton);
    m.def("ef_language", &ef_language);
    m.def("af_language", &af_language);
    m.def("lex_language", &lex_language);
    m.def("aux_automaton", &aux_automaton);
    m.def("b_automaton", &b_automaton);
    m.def("example_forest_text", &example_forest_text);
    m.def("example_formula_text", &example_formula_text);
    m.def("example_characteristic_text", &example_characteristic_text);
}
