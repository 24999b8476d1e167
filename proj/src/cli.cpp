#include "fl/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fl/automaton.hpp"
#include "fl/certificate.hpp"
#include "fl/explorer.hpp"
#include "fl/fixtures.hpp"
#include "fl/forest.hpp"
#include "fl/logic.hpp"
#include "fl/varieties.hpp"

namespace fl {

namespace {

// IO problems surface as exit code 2, like any other bad input.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("cannot read " + path);
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << content;
    if (!out) throw IoError("cannot write " + path);
}

// Strips '#' comments and squeezes the remainder onto one line.
std::string strip_comments(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::string joined;
    while (std::getline(in, line)) {
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::size_t begin = line.find_first_not_of(" \t\r");
        if (begin == std::string::npos) continue;
        const std::size_t end = line.find_last_not_of(" \t\r");
        if (!joined.empty()) joined += ' ';
        joined += line.substr(begin, end - begin + 1);
    }
    return joined;
}

AutomatonFile load_automaton(const std::string& path) {
    return parse_automaton_text(read_file(path));
}

// Finals come from the file's finals: line unless --finals overrides them.
std::vector<int> resolve_finals(const AutomatonFile& file,
                                const std::vector<std::string>& names,
                                const std::string& path) {
    if (!names.empty()) {
        std::vector<int> finals;
        for (const std::string& name : names) {
            const std::optional<int> q = file.automaton->state_index(name);
            if (!q) throw IoError("--finals: unknown state '" + name + "' in " + path);
            finals.push_back(*q);
        }
        std::sort(finals.begin(), finals.end());
        finals.erase(std::unique(finals.begin(), finals.end()), finals.end());
        return finals;
    }
    if (file.finals) return *file.finals;
    throw IoError(path + " has no finals: line and no --finals was given");
}

RecognizedLanguage load_language(const std::string& path,
                                 const std::vector<std::string>& finals_names) {
    AutomatonFile file = load_automaton(path);
    std::vector<int> finals = resolve_finals(file, finals_names, path);
    return RecognizedLanguage(file.automaton, std::move(finals));
}

Forest load_forest(const std::string& inline_text, const std::string& path,
                   const Alphabet& alphabet) {
    if (!inline_text.empty()) return parse_forest(inline_text, alphabet);
    if (path.empty()) throw IoError("no forest given: pass a .fr file or --forest");
    return parse_forest(strip_comments(read_file(path)), alphabet);
}

// Formula file format (one directive per line, '#' comments):
//   alphabet: <sym> ...
//   modality <NAME> = <automaton-file>     (optional, repeatable; the file
//                                           needs a finals: line; its path is
//                                           relative to the formula file)
//   formula: <formula text>
struct FormulaFile {
    Alphabet alphabet;
    ParsedFormula parsed;
};

FormulaFile load_formula(const std::string& path) {
    const std::string text = read_file(path);
    std::optional<Alphabet> alphabet;
    ModalityLibrary lib = ModalityLibrary::with_builtins();
    std::optional<std::string> formula_text;

    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string where = path + ":" + std::to_string(line_no);
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::string head;
        if (!(fields >> head)) continue;
        if (head == "alphabet:") {
            if (alphabet) throw ParseError(where + ": duplicate alphabet: line");
            std::vector<std::string> symbols;
            std::string sym;
            while (fields >> sym) symbols.push_back(sym);
            if (symbols.empty()) throw ParseError(where + ": empty alphabet");
            alphabet = Alphabet(std::move(symbols));
        } else if (head == "modality") {
            std::string name, eq, file;
            if (!(fields >> name >> eq >> file) || eq != "=") {
                throw ParseError(where + ": expected 'modality NAME = file.aut'");
            }
            const auto resolved =
                std::filesystem::path(path).parent_path() / std::filesystem::path(file);
            AutomatonFile loaded = load_automaton(resolved.string());
            if (!loaded.finals) {
                throw ParseError(where + ": modality automaton " + file +
                                 " has no finals: line");
            }
            lib.add(name, RecognizedLanguage(loaded.automaton, *loaded.finals));
        } else if (head == "formula:") {
            if (formula_text) throw ParseError(where + ": duplicate formula: line");
            std::string rest;
            std::getline(fields, rest);
            formula_text = rest;
        } else {
            throw ParseError(where + ": unknown directive '" + head + "'");
        }
    }
    if (!alphabet) throw ParseError(path + ": missing alphabet: line");
    if (!formula_text) throw ParseError(path + ": missing formula: line");

    FormulaFile result;
    result.alphabet = *alphabet;
    result.parsed = parse_formula(*formula_text, *alphabet, lib);
    return result;
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
    if (out_path.empty()) {
        out << text;
    } else {
        write_file(out_path, text);
    }
}

std::vector<EquationId> parse_equation_selection(const std::string& spec) {
    std::vector<EquationId> which;
    std::istringstream in(spec);
    std::string token;
    while (std::getline(in, token, ',')) {
        if (token.empty()) continue;
        if (token == "all") {
            for (EquationId id : all_equations()) which.push_back(id);
        } else if (token == "ef") {
            for (EquationId id : ef_equations()) which.push_back(id);
        } else if (token == "af") {
            for (EquationId id : af_equations()) which.push_back(id);
        } else if (const std::optional<EquationId> id = equation_from_name(token)) {
            which.push_back(*id);
        } else {
            throw IoError("--equations: unknown equation '" + token + "'");
        }
    }
    if (which.empty()) throw IoError("--equations selected nothing");
    return which;
}

struct ExploreArgs {
    std::vector<std::string> generator_paths;
    int max_states = 4;
    int max_rounds = 8;
    std::vector<std::string> alphabets;  // each "sym sym ..." or "sym,sym,..."
    std::string out_dir;
};

ClosureConfig explore_config(const ExploreArgs& args) {
    ClosureConfig cfg;
    for (const std::string& path : args.generator_paths) {
        cfg.generators.push_back(*load_automaton(path).automaton);
    }
    cfg.max_states = args.max_states;
    cfg.max_rounds = args.max_rounds;
    for (const std::string& spec : args.alphabets) {
        std::string normalized = spec;
        std::replace(normalized.begin(), normalized.end(), ',', ' ');
        std::istringstream in(normalized);
        std::vector<std::string> symbols;
        std::string sym;
        while (in >> sym) symbols.push_back(sym);
        cfg.target_alphabets.push_back(Alphabet(std::move(symbols)));
    }
    return cfg;
}

int run_explore(const ExploreArgs& args, std::ostream& out) {
    const ClosureResult result = closure_explore(explore_config(args));
    out << render_closure_index(result);
    out << "# saturated=" << (result.saturated ? "true" : "false")
        << " rounds=" << result.rounds << "\n";
    if (!args.out_dir.empty()) {
        std::filesystem::create_directories(args.out_dir);
        const std::filesystem::path dir(args.out_dir);
        write_file((dir / "index.txt").string(), render_closure_index(result));
        for (const ClosureEntry& entry : result.entries) {
            write_file((dir / (entry.name + ".aut")).string(),
                       render_automaton_text(*entry.automaton));
            write_file((dir / (entry.name + ".cert")).string(),
                       render_certificate(*entry.trace));
        }
    }
    return 0;
}

int run_fixtures(const std::string& dir_arg, std::ostream& out) {
    const std::filesystem::path dir(dir_arg.empty() ? "." : dir_arg);
    std::filesystem::create_directories(dir);
    const auto emit_fixture = [&](const std::string& name, const std::string& content) {
        const std::string path = (dir / name).string();
        write_file(path, content);
        out << "wrote " << path << "\n";
    };
    const RecognizedLanguage ef = ef_language();
    const RecognizedLanguage af = af_language();
    const RecognizedLanguage lex = lex_language();
    emit_fixture("ef.aut", render_automaton_text(*ef.automaton, ef.finals));
    emit_fixture("af.aut", render_automaton_text(*af.automaton, af.finals));
    emit_fixture("lex.aut", render_automaton_text(*lex.automaton, lex.finals));
    emit_fixture("aux.aut", render_automaton_text(aux_automaton()));
    emit_fixture("b.aut", render_automaton_text(b_automaton()));
    emit_fixture("example1.fr", example_forest_text() + "\n");
    std::ostringstream fml;
    fml << "alphabet:";
    const Alphabet abcd = abcd_alphabet();
    for (const std::string& sym : abcd.symbols()) fml << " " << sym;
    fml << "\nmodality LEX = lex.aut\nformula: " << example_formula_text() << "\n";
    emit_fixture("example4.fml", fml.str());
    return 0;
}

struct Args {
    std::string automaton_path;
    std::string other_automaton_path;
    std::string control_path;
    std::string forest_path;
    std::string forest_inline;
    std::string formula_path;
    std::string certificate_path;
    std::string out_path;
    std::vector<std::string> finals_names;
    std::string equations = "all";
    int bound = 0;
    int max_rounds = 12;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Forest automata, branching temporal logics over forests, and the "
                 "decidable characterization of EF-definable languages"};
    app.require_subcommand(1);
    Args a;
    ExploreArgs ex;
    std::string fixtures_dir;
    int rc = 0;

    const auto add_finals = [&](CLI::App* sub) {
        sub->add_option("--finals", a.finals_names,
                        "final states by name (overrides the file's finals: line)");
    };
    const auto add_forest_inputs = [&](CLI::App* sub) {
        sub->add_option("forest-file", a.forest_path, "forest file (.fr)");
        sub->add_option("--forest", a.forest_inline, "inline forest text");
    };
    const auto add_output = [&](CLI::App* sub) {
        sub->add_option("-o,--output", a.out_path, "output file (default: stdout)");
    };

    CLI::App* eval = app.add_subcommand("eval", "evaluate a forest to a state");
    eval->add_option("automaton", a.automaton_path)->required();
    add_forest_inputs(eval);
    eval->callback([&] {
        const AutomatonFile file = load_automaton(a.automaton_path);
        const Forest s = load_forest(a.forest_inline, a.forest_path, file.automaton->alphabet());
        out << file.automaton->state_name(evaluate(*file.automaton, s)) << "\n";
        rc = 0;
    });

    CLI::App* member_cmd = app.add_subcommand("member", "decide language membership");
    member_cmd->add_option("automaton", a.automaton_path)->required();
    add_forest_inputs(member_cmd);
    add_finals(member_cmd);
    member_cmd->callback([&] {
        const RecognizedLanguage lang = load_language(a.automaton_path, a.finals_names);
        const Forest s = load_forest(a.forest_inline, a.forest_path, lang.automaton->alphabet());
        const bool yes = member(lang, s);
        out << (yes ? "yes" : "no") << "\n";
        rc = yes ? 0 : 1;
    });

    CLI::App* minimize_cmd = app.add_subcommand("minimize", "minimize a recognizer");
    minimize_cmd->add_option("automaton", a.automaton_path)->required();
    add_finals(minimize_cmd);
    add_output(minimize_cmd);
    minimize_cmd->callback([&] {
        const RecognizedLanguage lang = load_language(a.automaton_path, a.finals_names);
        const RecognizedLanguage min = minimize(lang);
        emit(render_automaton_text(*min.automaton, min.finals), a.out_path, out);
        rc = 0;
    });

    CLI::App* product_cmd = app.add_subcommand("product", "direct product of two automata");
    product_cmd->add_option("left", a.automaton_path)->required();
    product_cmd->add_option("right", a.other_automaton_path)->required();
    add_output(product_cmd);
    product_cmd->callback([&] {
        const AutomatonFile left = load_automaton(a.automaton_path);
        const AutomatonFile right = load_automaton(a.other_automaton_path);
        emit(render_automaton_text(direct_product(*left.automaton, *right.automaton)),
             a.out_path, out);
        rc = 0;
    });

    CLI::App* moore_cmd =
        app.add_subcommand("moore", "Moore product controlled by a table file");
    moore_cmd->add_option("left", a.automaton_path)->required();
    moore_cmd->add_option("right", a.other_automaton_path)->required();
    moore_cmd->add_option("control", a.control_path, "control table file")->required();
    add_output(moore_cmd);
    moore_cmd->callback([&] {
        const AutomatonFile left = load_automaton(a.automaton_path);
        const AutomatonFile right = load_automaton(a.other_automaton_path);
        const ControlFunction alpha = parse_control_text(
            read_file(a.control_path), *left.automaton, right.automaton->alphabet());
        emit(render_automaton_text(moore_product(*left.automaton, *right.automaton, alpha)),
             a.out_path, out);
        rc = 0;
    });

    CLI::App* check_cmd = app.add_subcommand("check", "check identities on an automaton");
    check_cmd->add_option("automaton", a.automaton_path)->required();
    check_cmd->add_option("--equations", a.equations,
                          "comma-separated equation names or groups ef, af, all");
    check_cmd->callback([&] {
        const AutomatonFile file = load_automaton(a.automaton_path);
        const EquationReport report =
            check_equations(*file.automaton, parse_equation_selection(a.equations));
        out << render_equation_report(report);
        rc = report.all_pass() ? 0 : 1;
    });

    CLI::App* decide = app.add_subcommand("decide-ef", "decide EF-definability");
    decide->add_option("automaton", a.automaton_path)->required();
    add_finals(decide);
    decide->callback([&] {
        const RecognizedLanguage lang = load_language(a.automaton_path, a.finals_names);
        const EfDecision decision = decide_ef_definable(lang);
        out << (decision.definable ? "YES" : "NO") << "\n";
        out << render_equation_report(decision.report);
        if (decision.definable) {
            out << render_automaton_text(*decision.minimal.automaton, decision.minimal.finals);
        }
        rc = decision.definable ? 0 : 1;
    });

    CLI::App* decompose = app.add_subcommand(
        "decompose-ef", "construct a membership certificate for the EF closure");
    decompose->add_option("automaton", a.automaton_path)->required();
    add_output(decompose);
    decompose->callback([&] {
        const AutomatonFile file = load_automaton(a.automaton_path);
        try {
            const CertificatePtr cert = decompose_ef(*file.automaton);
            emit(render_certificate(*cert), a.out_path, out);
            rc = 0;
        } catch (const VarietyError& e) {
            const std::string what = e.what();
            if (what.find("internal inconsistency") != std::string::npos) throw;
            err << what << "\n";
            rc = 1;
        }
    });

    CLI::App* verify_cmd = app.add_subcommand("verify", "verify a certificate against a target");
    verify_cmd->add_option("certificate", a.certificate_path)->required();
    verify_cmd->add_option("automaton", a.automaton_path)->required();
    verify_cmd->callback([&] {
        const CertificatePtr cert = parse_certificate(read_file(a.certificate_path));
        const AutomatonFile file = load_automaton(a.automaton_path);
        const VerificationResult result = verify_certificate(*cert, *file.automaton);
        if (result.ok) {
            out << "VERIFIED\n";
            rc = 0;
        } else {
            for (const std::string& issue : result.issues) out << issue << "\n";
            rc = 1;
        }
    });

    CLI::App* sat_cmd = app.add_subcommand("sat", "does a forest satisfy a formula?");
    sat_cmd->add_option("formula", a.formula_path, "formula file (.fml)")->required();
    add_forest_inputs(sat_cmd);
    sat_cmd->callback([&] {
        const FormulaFile file = load_formula(a.formula_path);
        const Forest s = load_forest(a.forest_inline, a.forest_path, file.alphabet);
        bool yes = false;
        if (file.parsed.forest) {
            yes = satisfies(s, file.parsed.forest);
        } else if (s.size() == 1) {
            yes = satisfies(s.trees[0], file.parsed.tree);
        } else {
            throw IoError("tree-sorted formula needs a single-tree forest");
        }
        out << (yes ? "yes" : "no") << "\n";
        rc = yes ? 0 : 1;
    });

    CLI::App* compile_cmd = app.add_subcommand("compile", "compile a formula to a recognizer");
    compile_cmd->add_option("formula", a.formula_path)->required();
    add_output(compile_cmd);
    compile_cmd->callback([&] {
        const FormulaFile file = load_formula(a.formula_path);
        const RecognizedLanguage lang = file.parsed.forest
                                            ? compile(file.parsed.forest, file.alphabet)
                                            : compile_tree(file.parsed.tree, file.alphabet);
        emit(render_automaton_text(*lang.automaton, lang.finals), a.out_path, out);
        rc = 0;
    });

    CLI::App* char_cmd =
        app.add_subcommand("char-forest", "characteristic forest under a modal formula");
    char_cmd->add_option("formula", a.formula_path, "formula file with a modal formula")
        ->required();
    add_forest_inputs(char_cmd);
    char_cmd->callback([&] {
        const FormulaFile file = load_formula(a.formula_path);
        if (!file.parsed.forest || file.parsed.forest->kind != ForestFormula::Kind::Modal) {
            throw IoError("char-forest needs a formula whose outermost node is a modality");
        }
        const Forest s = load_forest(a.forest_inline, a.forest_path, file.alphabet);
        const Forest characteristic =
            characteristic_forest(s, file.parsed.forest->family);
        out << render_forest(characteristic,
                             file.parsed.forest->modality.automaton->alphabet())
            << "\n";
        rc = 0;
    });

    CLI::App* explore_cmd =
        app.add_subcommand("explore", "bounded closure under the Moore operations");
    explore_cmd->add_option("--generator", ex.generator_paths, "generator automaton file")
        ->required();
    explore_cmd->add_option("--max-states", ex.max_states, "state bound (default 4)");
    explore_cmd->add_option("--max-rounds", ex.max_rounds, "round bound (default 8)");
    explore_cmd->add_option("--alphabet", ex.alphabets,
                            "renaming target alphabet, symbols separated by commas");
    explore_cmd->add_option("-o,--output", ex.out_dir, "directory for .aut and .cert files");
    explore_cmd->callback([&] { rc = run_explore(ex, out); });

    CLI::App* conj_a = app.add_subcommand("conjecture-a", "equational AF conjecture harness");
    conj_a->add_option("bound", a.bound, "state bound")->required()->check(CLI::PositiveNumber);
    conj_a->add_option("--max-rounds", a.max_rounds, "round bound (default 12)");
    conj_a->callback([&] {
        const ConjectureAReport report = conjecture_a_experiment(a.bound, a.max_rounds);
        out << render_conjecture_a(report);
        // A necessity violation contradicts the preservation propositions.
        rc = report.violations.empty() ? 0 : 3;
    });

    CLI::App* conj_b = app.add_subcommand("conjecture-b", "ladder-congruence conjecture harness");
    conj_b->add_option("bound", a.bound, "state bound")->required()->check(CLI::PositiveNumber);
    conj_b->add_option("--max-rounds", a.max_rounds, "round bound (default 12)");
    conj_b->callback([&] {
        const ConjectureBReport report = conjecture_b_experiment(a.bound, a.max_rounds);
        out << render_conjecture_b(report);
        rc = report.any_counterexample ? 1 : 0;
    });

    CLI::App* fixtures_cmd =
        app.add_subcommand("fixtures", "write the canonical example files");
    fixtures_cmd->add_option("-o,--output", fixtures_dir, "target directory (default: .)");
    fixtures_cmd->callback([&] { rc = run_fixtures(fixtures_dir, out); });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    } catch (const VarietyError& e) {
        err << "error: " << e.what() << "\n";
        return std::string(e.what()).find("internal inconsistency") != std::string::npos ? 3
                                                                                         : 2;
    } catch (const ExplorerError& e) {
        err << "error: " << e.what() << "\n";
        return std::string(e.what()).find("internal inconsistency") != std::string::npos ? 3
                                                                                         : 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return rc;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_cli(args, out, err);
}

}  // namespace fl
