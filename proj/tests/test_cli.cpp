#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tridecomp/graph.hpp"

using namespace tridecomp;
namespace fs = std::filesystem;

namespace {

const fs::path kDir = fs::temp_directory_path() / "tridecomp_cli_test";

int run(const std::string& args, const std::string& out_file = "") {
    std::string cmd = std::string(TD_CLI_PATH) + " " + args;
    if (!out_file.empty()) cmd += " > " + out_file;
    cmd += " 2>/dev/null";
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string path(const std::string& name) { return (kDir / name).string(); }

void write_graph(const std::string& name, const Graph& g) {
    std::ofstream out(path(name));
    write_edge_list(out, g);
}

std::string slurp(const std::string& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

long line_count(const std::string& p) {
    std::ifstream in(p);
    std::string line;
    long n = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++n;
    return n;
}

}  // namespace

TEST_CASE("oracle writes a decomposition that verifies") {
    fs::create_directories(kDir);
    write_graph("k7.txt", Graph::complete(7));
    CHECK(run("oracle " + path("k7.txt") + " -o " + path("k7.dec")) == 0);
    CHECK(line_count(path("k7.dec")) == 7);  // K_7 = seven triangles
    CHECK(run("verify " + path("k7.txt") + " " + path("k7.dec")) == 0);
}

TEST_CASE("oracle refutes the hexagon") {
    fs::create_directories(kDir);
    std::vector<Edge> c6;
    for (int i = 0; i < 6; ++i) c6.push_back(make_edge(i, (i + 1) % 6));
    write_graph("c6.txt", Graph(6, c6));
    CHECK(run("oracle " + path("c6.txt")) == 1);
}

TEST_CASE("verify rejects a tampered decomposition") {
    fs::create_directories(kDir);
    write_graph("k7.txt", Graph::complete(7));
    REQUIRE(run("oracle " + path("k7.txt") + " -o " + path("k7.dec")) == 0);
    // Duplicate the first triangle.
    std::string text = slurp(path("k7.dec"));
    std::ofstream(path("bad.dec")) << text.substr(0, text.find('\n') + 1) << text;
    CHECK(run("verify " + path("k7.txt") + " " + path("bad.dec")) == 1);
}

TEST_CASE("divisibility and usage exit codes") {
    fs::create_directories(kDir);
    write_graph("k7.txt", Graph::complete(7));
    write_graph("k6.txt", Graph::complete(6));  // odd degrees
    CHECK(run("divisible " + path("k7.txt")) == 0);
    CHECK(run("divisible " + path("k6.txt")) == 1);
    CHECK(run("no-such-command") == 3);
    CHECK(run("divisible " + path("missing.txt")) == 3);
}

TEST_CASE("fractional verification") {
    fs::create_directories(kDir);
    write_graph("k4.txt", Graph::complete(4));
    // Each K_4 edge lies in two triangles; weight 1/2 everywhere aggregates to 1.
    {
        std::ofstream w(path("k4.frac"));
        w << "0 1 2 1/2\n0 1 3 1/2\n0 2 3 1/2\n1 2 3 1/2\n";
    }
    CHECK(run("fractional-verify " + path("k4.txt") + " " + path("k4.frac")) == 0);
    {
        std::ofstream w(path("k4bad.frac"));
        w << "0 1 2 1/2\n0 1 3 1/3\n0 2 3 1/2\n1 2 3 1/2\n";
    }
    CHECK(run("fractional-verify " + path("k4.txt") + " " + path("k4bad.frac")) == 1);
}

TEST_CASE("extremal fixture reports its counting certificate") {
    fs::create_directories(kDir);
    CHECK(run("extremal 2 -o " + path("ext.txt") + " --json", path("ext.json")) == 0);
    std::string rep = slurp(path("ext.json"));
    CHECK(rep.find("\"schema\": 1") != std::string::npos);
    CHECK(rep.find("\"no_decomposition_certified\": true") != std::string::npos);
    CHECK(run("divisible " + path("ext.txt")) == 0);
}

TEST_CASE("identical seed gives byte-identical artifacts") {
    fs::create_directories(kDir);
    write_graph("k19.txt", Graph::complete(19));
    REQUIRE(run("approx " + path("k19.txt") + " --gamma 1 --seed 5 -o " + path("a.dec")) == 0);
    REQUIRE(run("approx " + path("k19.txt") + " --gamma 1 --seed 5 -o " + path("b.dec")) == 0);
    CHECK(slurp(path("a.dec")) == slurp(path("b.dec")));
}

TEST_CASE("full pipeline from the command line") {
    fs::create_directories(kDir);
    write_graph("k19.txt", Graph::complete(19));
    CHECK(run("decompose " + path("k19.txt") + " -o " + path("k19.dec")) == 0);
    CHECK(run("verify " + path("k19.txt") + " " + path("k19.dec")) == 0);
    write_graph("k20.txt", Graph::complete(20));  // not divisible
    CHECK(run("decompose " + path("k20.txt")) == 1);
}
