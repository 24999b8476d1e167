#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fl/automaton.hpp"
#include "fl/certificate.hpp"
#include "fl/cli.hpp"
#include "fl/fixtures.hpp"

using namespace fl;

namespace {

struct CliRun {
    int code = 0;
    std::string out;
    std::string err;
};

CliRun run(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    CliRun result;
    result.code = run_cli(args, out, err);
    result.out = out.str();
    result.err = err.str();
    return result;
}

// A fresh directory under the system temp root, removed on destruction.
struct TempDir {
    std::filesystem::path path;

    TempDir() {
        static int counter = 0;
        path = std::filesystem::temp_directory_path() /
               ("fl_cli_test_" + std::to_string(++counter));
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }

    std::string file(const std::string& name) const { return (path / name).string(); }
};

// Emits the canonical fixture files and returns the directory.
struct FixtureDir : TempDir {
    FixtureDir() {
        const CliRun r = run({"fixtures", "-o", path.string()});
        REQUIRE(r.code == 0);
    }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("fixtures emits the seven canonical files") {
    FixtureDir dir;
    for (const std::string name :
         {"ef.aut", "af.aut", "lex.aut", "aux.aut", "b.aut", "example1.fr", "example4.fml"}) {
        CHECK(std::filesystem::exists(dir.path / name));
    }
    const AutomatonFile ef = parse_automaton_text(slurp(dir.file("ef.aut")));
    REQUIRE(ef.finals.has_value());
    CHECK(is_isomorphic(RecognizedLanguage(ef.automaton, *ef.finals), ef_language())
              .has_value());
    const std::string fml = slurp(dir.file("example4.fml"));
    CHECK(fml.find("alphabet: a b c d") != std::string::npos);
    CHECK(fml.find("modality LEX = lex.aut") != std::string::npos);
    CHECK(slurp(dir.file("example1.fr")) == example_forest_text() + "\n");
}

TEST_CASE("eval prints the state a forest evaluates to") {
    FixtureDir dir;
    const CliRun r = run({"eval", dir.file("ef.aut"), "--forest", "0(0+1)"});
    CHECK(r.code == 0);
    CHECK(r.out == "1\n");

    const CliRun zero = run({"eval", dir.file("ef.aut"), "--forest", "0(0+0)"});
    CHECK(zero.code == 0);
    CHECK(zero.out == "0\n");
}

TEST_CASE("member exits 0 for members and 1 for non-members") {
    FixtureDir dir;
    const CliRun yes = run({"member", dir.file("ef.aut"), "--forest", "0(1)"});
    CHECK(yes.code == 0);
    CHECK(yes.out == "yes\n");
    const CliRun no = run({"member", dir.file("ef.aut"), "--forest", "0(0)"});
    CHECK(no.code == 1);
    CHECK(no.out == "no\n");
    // --finals overrides the file's finals: with {0} the verdict flips.
    const CliRun flipped = run({"member", dir.file("ef.aut"), "--forest", "0(0)",
                                "--finals", "0"});
    CHECK(flipped.code == 0);
}

TEST_CASE("sat evaluates the worked formula on the worked forest") {
    FixtureDir dir;
    const CliRun yes = run({"sat", dir.file("example4.fml"), dir.file("example1.fr")});
    CHECK(yes.code == 0);
    CHECK(yes.out == "yes\n");
    // A single leaf has no depth-one nodes at all.
    const CliRun no = run({"sat", dir.file("example4.fml"), "--forest", "c"});
    CHECK(no.code == 1);
    CHECK(no.out == "no\n");
}

TEST_CASE("compile produces a recognizer equivalent to the formula") {
    FixtureDir dir;
    const std::string out_path = dir.file("compiled.aut");
    const CliRun r = run({"compile", dir.file("example4.fml"), "-o", out_path});
    CHECK(r.code == 0);
    const AutomatonFile compiled = parse_automaton_text(slurp(out_path));
    REQUIRE(compiled.finals.has_value());
    const RecognizedLanguage lang(compiled.automaton, *compiled.finals);
    const Forest s = parse_forest(example_forest_text(), abcd_alphabet());
    CHECK(member(lang, s));
    CHECK(!member(lang, parse_forest("c", abcd_alphabet())));
}

TEST_CASE("char-forest prints the worked characteristic forest") {
    FixtureDir dir;
    const CliRun r =
        run({"char-forest", dir.file("example4.fml"), dir.file("example1.fr")});
    CHECK(r.code == 0);
    CHECK(r.out == example_characteristic_text() + "\n");
}

TEST_CASE("decide-ef answers YES for EF and NO with a witness for AF") {
    FixtureDir dir;
    const CliRun yes = run({"decide-ef", dir.file("ef.aut")});
    CHECK(yes.code == 0);
    CHECK(yes.out.substr(0, 4) == "YES\n");

    const CliRun no = run({"decide-ef", dir.file("af.aut"), "--finals", "1"});
    CHECK(no.code == 1);
    CHECK(no.out.substr(0, 3) == "NO\n");
    CHECK(no.out.find("EQUATION EF_DECREASING FAIL a=1 x=0") != std::string::npos);
}

TEST_CASE("decompose-ef emits a certificate that verify accepts") {
    FixtureDir dir;
    const std::string cert_path = dir.file("ef.cert");
    const CliRun dec = run({"decompose-ef", dir.file("ef.aut"), "-o", cert_path});
    CHECK(dec.code == 0);

    const CliRun ok = run({"verify", cert_path, dir.file("ef.aut")});
    CHECK(ok.code == 0);
    CHECK(ok.out == "VERIFIED\n");

    // The same certificate does not certify AF.
    const CliRun bad = run({"verify", cert_path, dir.file("af.aut")});
    CHECK(bad.code == 1);
    CHECK(!bad.out.empty());
}

TEST_CASE("decompose-ef on AF is a decided negative") {
    FixtureDir dir;
    const CliRun r = run({"decompose-ef", dir.file("af.aut")});
    CHECK(r.code == 1);
    CHECK(r.err.find("EF_DECREASING") != std::string::npos);
}

TEST_CASE("check reports equation verdicts through the exit code") {
    FixtureDir dir;
    const CliRun pass = run({"check", dir.file("af.aut"), "--equations", "af"});
    CHECK(pass.code == 0);
    CHECK(pass.out.find("EQUATION CORE_IMPLICATION PASS") != std::string::npos);

    const CliRun fail = run({"check", dir.file("af.aut"), "--equations", "ef"});
    CHECK(fail.code == 1);
    CHECK(fail.out.find("EQUATION EF_DECREASING FAIL") != std::string::npos);

    const CliRun unknown = run({"check", dir.file("af.aut"), "--equations", "bogus"});
    CHECK(unknown.code == 2);
}

TEST_CASE("minimize writes a minimal recognizer") {
    FixtureDir dir;
    const CliRun r = run({"minimize", dir.file("ef.aut")});
    CHECK(r.code == 0);
    const AutomatonFile min = parse_automaton_text(r.out);
    REQUIRE(min.finals.has_value());
    CHECK(min.automaton->num_states() == 2);
    CHECK(is_isomorphic(RecognizedLanguage(min.automaton, *min.finals), ef_language())
              .has_value());
}

TEST_CASE("product and moore emit loadable automata") {
    FixtureDir dir;
    const CliRun prod = run({"product", dir.file("ef.aut"), dir.file("af.aut")});
    CHECK(prod.code == 0);
    CHECK(parse_automaton_text(prod.out).automaton->num_states() == 6);

    const std::string control_path = dir.file("alpha.ctl");
    {
        std::ofstream ctl(control_path);
        ctl << "0 0 -> 0\n0 1 -> 1\n1 0 -> 1\n1 1 -> 1\n";
    }
    const CliRun moore =
        run({"moore", dir.file("ef.aut"), dir.file("ef.aut"), control_path});
    CHECK(moore.code == 0);
    const AutomatonFile m = parse_automaton_text(moore.out);
    CHECK(m.automaton->num_states() == 4);
    CHECK(m.automaton->alphabet() == binary_alphabet());
}

TEST_CASE("explore writes an index with replayable traces") {
    FixtureDir dir;
    const std::string out_dir = dir.file("closure");
    const CliRun r = run({"explore", "--generator", dir.file("ef.aut"), "--max-states", "2",
                          "--alphabet", "0,1", "-o", out_dir});
    CHECK(r.code == 0);
    CHECK(r.out.find("MEMBER m0 states=2 trace=m0.cert") != std::string::npos);
    CHECK(r.out.find("# saturated=true") != std::string::npos);

    const std::filesystem::path closure(out_dir);
    CHECK(std::filesystem::exists(closure / "index.txt"));
    const int members =
        static_cast<int>(std::count(r.out.begin(), r.out.end(), '\n')) - 1;
    CHECK(members == 5);
    for (int i = 0; i < members; ++i) {
        const std::string stem = "m" + std::to_string(i);
        const AutomatonFile stored =
            parse_automaton_text(slurp((closure / (stem + ".aut")).string()));
        const CertificatePtr trace =
            parse_certificate(slurp((closure / (stem + ".cert")).string()));
        CHECK(is_isomorphic(build_certificate(*trace), *stored.automaton).has_value());
    }
}

TEST_CASE("conjecture harnesses run clean at bound 3") {
    const CliRun a = run({"conjecture-a", "3"});
    CHECK(a.code == 0);
    CHECK(a.out.find("COUNTEREXAMPLE") == std::string::npos);
    CHECK(std::count(a.out.begin(), a.out.end(), '\n') == 3);

    const CliRun b = run({"conjecture-b", "3"});
    CHECK(b.code == 0);
    CHECK(b.out.find("verdict=ladder-monolith alpha=found") != std::string::npos);
    CHECK(b.out.find("COUNTEREXAMPLE") == std::string::npos);
}

TEST_CASE("usage and input problems exit 2") {
    CHECK(run({}).code == 2);
    CHECK(run({"no-such-command"}).code == 2);
    CHECK(run({"eval"}).code == 2);  // missing required positional
    CHECK(run({"eval", "/nonexistent/x.aut", "--forest", "0"}).code == 2);
    CHECK(run({"--help"}).code == 0);

    FixtureDir dir;
    // Forest text over the wrong alphabet.
    CHECK(run({"eval", dir.file("ef.aut"), "--forest", "a(b)"}).code == 2);
    // member without finals anywhere: aux.aut has no finals line.
    CHECK(run({"member", dir.file("aux.aut"), "--forest", "l"}).code == 2);
}
