#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "cyclap/classify.hpp"
#include "cyclap/generators.hpp"
#include "cyclap/repio.hpp"

using namespace cyclap;

namespace {

RationalField Q;

struct RunResult {
    int exit_code;
    std::string output;
};

/// Runs the CLI with stdout+stderr captured; exit code -1 on harness failure.
RunResult run_cli(const std::string& args) {
    static int counter = 0;
    std::string out_path = (std::filesystem::temp_directory_path() / ("cyclap_out_" + std::to_string(counter++))).string();
    std::string cmd = std::string(CYCLAP_CLI_PATH) + " " + args + " > " + out_path + " 2>&1";
    int status = std::system(cmd.c_str());
    std::ifstream in(out_path);
    std::string output((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::filesystem::remove(out_path);
    if (status == -1) return {-1, output};
    return {WEXITSTATUS(status), output};
}

std::string temp_file(const std::string& name, const std::string& content) {
    std::string path = (std::filesystem::temp_directory_path() / name).string();
    write_file(path, content);
    return path;
}

const char* REP_A_TEXT =
    "cyclerep v1\nfield Q\nn 2\ndims 1 1\nmap 0\n1\nmap 1\n0\n";
const char* REP_B_TEXT =
    "cyclerep v1\nfield Q\nn 2\ndims 1 1\nmap 0\n0\nmap 1\n1\n";

}  // namespace

TEST_CASE("cyclerep files round-trip, including comments and zero dims") {
    std::string text =
        "cyclerep v1  # header\n"
        "field Fp 5\n"
        "n 3\n"
        "dims 2 0 1   # one empty vertex\n"
        "map 0\n"      // d_1 = 0: no rows
        "map 1\n"      // d_2 = 1, d_1 = 0: one empty row
        "\n"
        "map 2\n"      // 2 rows (d_0) of 1 entry (d_2)
        "3\n"
        "4\n"
        "saturated 1:2 2:inf\n";
    auto rep = parse_cyclerep(text);
    auto& u = std::get<CycleRep<PrimeField>>(rep);
    CHECK(u.dims() == std::vector<std::size_t>{2, 0, 1});
    CHECK(u.saturated().at(1) == Card(2));
    CHECK(u.saturated().at(2) == Card::aleph0());

    std::string written = write_cyclerep(u);
    auto again = std::get<CycleRep<PrimeField>>(parse_cyclerep(written));
    CHECK(again == u);
    CHECK(write_cyclerep(again) == written);
}

TEST_CASE("parse errors carry line numbers") {
    try {
        parse_cyclerep("cyclerep v1\nfield Q\nn 2\ndims 1 1\nmap 0\n1 2\nmap 1\n0\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line == 6);  // wrong entry count in the matrix row
    }
    try {
        parse_cyclerep("cyclerep v1\nfield Fp 4\nn 1\ndims 1\nmap 0\n0\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);  // 4 is not prime
    }
    CHECK_THROWS_AS(parse_cyclerep("cyclerep v2\n"), ParseError);
}

TEST_CASE("morphism certificates round-trip and re-verify") {
    auto u = std::get<CycleRep<RationalField>>(parse_cyclerep(REP_A_TEXT));
    auto [v, fam] = random_basis_change(u, 4);
    std::string text = write_morphism(fam);
    auto back = parse_morphism(Q, text, v.dims(), u.dims());
    CHECK(is_isomorphism(u, v, back));
}

TEST_CASE("cli: iso on the introductory pair") {
    std::string a = temp_file("repA.cr", REP_A_TEXT);
    std::string b = temp_file("repB.cr", REP_B_TEXT);

    auto r1 = run_cli("iso " + a + " " + b);
    CHECK(r1.exit_code == 1);
    CHECK(r1.output.find("not isomorphic") != std::string::npos);
    CHECK(r1.output.find("kappa 1 1 differs: 1 vs 0") != std::string::npos);

    std::string cert = (std::filesystem::temp_directory_path() / "self.morphism").string();
    auto r2 = run_cli("iso " + a + " " + a + " -o " + cert);
    CHECK(r2.exit_code == 0);
    CHECK(r2.output.find("isomorphic") == 0);
    CHECK(r2.output.find("certificate written") != std::string::npos);

    // independent verification of the written certificate, multiplication only
    auto u = std::get<CycleRep<RationalField>>(parse_cyclerep(REP_A_TEXT));
    auto fam = parse_morphism(Q, read_file(cert), u.dims(), u.dims());
    CHECK(is_isomorphism(u, u, fam));

    auto r3 = run_cli("iso " + a + " missing-file.cr");
    CHECK(r3.exit_code == 2);
}

TEST_CASE("cli: invariants output") {
    std::string a = temp_file("repA2.cr", REP_A_TEXT);
    auto r = run_cli("invariants " + a);
    CHECK(r.exit_code == 0);
    CHECK(r.output == "kappa 1 1 1\n");
}

TEST_CASE("cli: decompose and adapted-basis") {
    std::string a = temp_file("repA3.cr", REP_A_TEXT);
    auto r = run_cli("decompose " + a);
    CHECK(r.exit_code == 0);
    CHECK(r.output == "cell 0 2 1\n");

    auto r2 = run_cli("adapted-basis " + a);
    CHECK(r2.exit_code == 0);
    CHECK(r2.output.find("basis 0 ") != std::string::npos);
    CHECK(r2.output.find("-> ZERO") != std::string::npos);
}

TEST_CASE("cli: realize and check-admissible") {
    std::string support = temp_file("table.sup", "support v1\nn 2\npoint 1 1 1\n");
    std::string out = (std::filesystem::temp_directory_path() / "realized.cr").string();
    auto r = run_cli("realize " + support + " -o " + out + " --field Q");
    CHECK(r.exit_code == 0);
    auto realized = std::get<CycleRep<RationalField>>(parse_cyclerep(read_file(out)));
    auto expected = std::get<CycleRep<RationalField>>(parse_cyclerep(REP_A_TEXT));
    CHECK(realized == expected);

    std::string bad = temp_file("bad.sup", "support v1\nn 2\npoint 0 w\n");
    auto r2 = run_cli("check-admissible " + bad);
    CHECK(r2.exit_code == 1);
    CHECK(r2.output.find("not admissible") != std::string::npos);
    CHECK(r2.output.find("(1,w)") != std::string::npos);

    std::string good = temp_file("good.sup", "support v1\nn 2\npoint 0 w\nladder 1 w\n");
    auto r3 = run_cli("check-admissible " + good);
    CHECK(r3.exit_code == 0);
    CHECK(r3.output == "admissible\n");

    // realizing a ladder is rejected by name
    auto r4 = run_cli("realize " + good + " -o " + out);
    CHECK(r4.exit_code == 2);
    CHECK(r4.output.find("UnsupportedTransfinite") != std::string::npos);
}

TEST_CASE("cli: build-iso writes nothing on a negative verdict") {
    std::string a = temp_file("repA4.cr", REP_A_TEXT);
    std::string b = temp_file("repB4.cr", REP_B_TEXT);
    std::string cert = (std::filesystem::temp_directory_path() / "none.morphism").string();
    std::filesystem::remove(cert);
    auto r = run_cli("build-iso " + a + " " + b + " -o " + cert);
    CHECK(r.exit_code == 1);
    CHECK_FALSE(std::filesystem::exists(cert));

    auto r2 = run_cli("build-iso " + a + " " + a + " -o " + cert);
    CHECK(r2.exit_code == 0);
    CHECK(std::filesystem::exists(cert));
}

TEST_CASE("cli: gen is deterministic and self-consistent") {
    std::string out1 = (std::filesystem::temp_directory_path() / "gen1.cr").string();
    std::string out2 = (std::filesystem::temp_directory_path() / "gen2.cr").string();
    auto r1 = run_cli("gen --n 2 --cells 0:2,1:1:2 --seed 7 --field Fp:5 -o " + out1);
    auto r2 = run_cli("gen --n 2 --cells 0:2,1:1:2 --seed 7 --field Fp:5 -o " + out2);
    CHECK(r1.exit_code == 0);
    CHECK(r2.exit_code == 0);
    CHECK(read_file(out1) == read_file(out2));

    auto u = std::get<CycleRep<PrimeField>>(parse_cyclerep(read_file(out1)));
    auto dec = decompose(u);
    CHECK(dec.cells.finite.at({0, 2}) == 1);
    CHECK(dec.cells.finite.at({1, 1}) == 2);
}

TEST_CASE("cli: selfcheck smoke run") {
    auto r = run_cli("selfcheck --seed 5 --iters 2");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("selfcheck: PASS") != std::string::npos);
}
