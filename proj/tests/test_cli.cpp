#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace {

struct RunResult {
    int code = -1;
    std::string out;  // stdout and stderr interleaved
};

std::string cli_path() {
    const char* p = std::getenv("KQT_CLI_PATH");
    REQUIRE(p != nullptr);
    return p;
}

RunResult run(const std::string& args) {
    RunResult res;
    std::string cmd = "'" + cli_path() + "' " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) res.out.append(buf, got);
    int status = pclose(pipe);
    res.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string scratch_dir() {
    static std::string dir = [] {
        char tmpl[] = "/tmp/kqt-cli-XXXXXX";
        char* made = mkdtemp(tmpl);
        REQUIRE(made != nullptr);
        return std::string(made);
    }();
    return dir;
}

std::string write_file(const std::string& name, const std::string& content) {
    std::string path = scratch_dir() + "/" + name;
    std::ofstream out(path);
    REQUIRE(out.good());
    out << content;
    return path;
}

std::string minimal_edge_list() {
    return "n 8\n0 1\n1 2\n2 3\n3 0\n3 4\n4 1\n4 5\n5 0\n5 2\n5 6\n6 1\n6 3\n6 7\n7 0\n7 2\n"
           "7 4\n";
}

std::string minimal_file() {
    static std::string path = write_file("minimal.txt", minimal_edge_list());
    return path;
}

int count_occurrences(const std::string& hay, const std::string& needle) {
    int n = 0;
    for (std::size_t at = hay.find(needle); at != std::string::npos;
         at = hay.find(needle, at + needle.size()))
        ++n;
    return n;
}

std::string strip_wall_lines(const std::string& text) {
    std::istringstream in(text);
    std::string line, out;
    while (std::getline(in, line))
        if (line.rfind("wall seconds", 0) != 0) out += line + "\n";
    return out;
}

}  // namespace

TEST_CASE("a subcommand is required") {
    auto res = run("");
    CHECK(res.code == 2);
}

TEST_CASE("generate emits the instance after its vital signs") {
    auto res = run("generate -k 5 -n 8 --density 0 --seed 7");
    CHECK(res.code == 0);
    CHECK(res.out == "seed: 7\nattempts: 1\norder: 8\narcs: 16\n" + minimal_edge_list());

    auto again = run("generate -k 5 -n 8 --density 0 --seed 7");
    CHECK(again.out == res.out);
}

TEST_CASE("generate writes the file given an output path") {
    std::string out_path = scratch_dir() + "/generated.txt";
    auto res = run("generate -k 5 -n 10 --density 0.2 --seed 3 -o '" + out_path + "'");
    CHECK(res.code == 0);
    CHECK(res.out.rfind("seed: 3\n", 0) == 0);
    std::ifstream in(out_path);
    REQUIRE(in.good());
    std::string header;
    std::getline(in, header);
    CHECK(header == "n 10");
}

TEST_CASE("generate validates its parameters") {
    auto even = run("generate -k 4 -n 8 --seed 1");
    CHECK(even.code == 2);
    CHECK(even.out.find("error: k must be odd and at least 5") != std::string::npos);

    auto small = run("generate -k 5 -n 7 --seed 1");
    CHECK(small.code == 2);
    CHECK(small.out.find("error: n must be at least k+3") != std::string::npos);

    auto dense = run("generate -k 5 -n 8 --density 1.5 --seed 1");
    CHECK(dense.code == 2);
    CHECK(dense.out.find("error: density must lie in [0,1]") != std::string::npos);
}

TEST_CASE("check reports the three vital signs") {
    auto res = run("check '" + minimal_file() + "' -k 5");
    CHECK(res.code == 0);
    CHECK(res.out == "strong: yes\ndiameter: 7\nk-quasi-transitive: yes\n");
}

TEST_CASE("check prints the first violating path and fails") {
    std::string path = write_file("path6.txt", "n 6\n0 1\n1 2\n2 3\n3 4\n4 5\n");
    auto res = run("check '" + path + "' -k 5");
    CHECK(res.code == 1);
    CHECK(res.out ==
          "strong: no\ndiameter: infinite\nk-quasi-transitive: no\nviolation: 0-1-2-3-4-5\n");
}

TEST_CASE("missing input files are parse-time errors") {
    auto res = run("check '" + scratch_dir() + "/absent.txt' -k 5");
    CHECK(res.code == 2);
}

TEST_CASE("malformed edge lists name the offending line") {
    std::string path = write_file("bad.txt", "n 2\n0 2\n");
    auto res = run("check '" + path + "' -k 5");
    CHECK(res.code == 2);
    CHECK(res.out.rfind("error:", 0) == 0);
    CHECK(res.out.find("line 2") != std::string::npos);
}

TEST_CASE("classify prints the frame, the partition, and every check") {
    auto res = run("classify '" + minimal_file() + "' -k 5");
    CHECK(res.code == 0);
    CHECK(res.out.find("frame vertices: 0 1 2 3 4 5 6 7\n") != std::string::npos);
    CHECK(res.out.find("frame: semicomplete-bipartite (O|E)\n") != std::string::npos);
    CHECK(res.out.find("outside: empty\n") != std::string::npos);
    CHECK(res.out.find("partition: I=0 W=0 B=0 I1=0 I2=0 W1=0 W2=0 B1=0 B2=0 Itilde=0\n") !=
          std::string::npos);
    CHECK(count_occurrences(res.out, "CHECK ") == 30);
    CHECK(count_occurrences(res.out, " FAIL") == 0);
}

TEST_CASE("classify can render the digraph to DOT on the side") {
    std::string dot_path = scratch_dir() + "/minimal.dot";
    auto res = run("classify '" + minimal_file() + "' -k 5 --dot '" + dot_path + "'");
    CHECK(res.code == 0);
    std::ifstream in(dot_path);
    REQUIRE(in.good());
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str().find("digraph") != std::string::npos);
    CHECK(buf.str().find("0 -> 1") != std::string::npos);
}

TEST_CASE("classify refuses when the hypotheses fail") {
    std::string k8;
    k8 += "n 8\n";
    for (int u = 0; u < 8; ++u)
        for (int v = 0; v < 8; ++v)
            if (u != v) k8 += std::to_string(u) + " " + std::to_string(v) + "\n";
    std::string path = write_file("k8.txt", k8);
    auto res = run("classify '" + path + "' -k 5");
    CHECK(res.code == 2);
    CHECK(res.out == "hypothesis failed: diameter < k+2\n");
}

TEST_CASE("classify flags a doctored instance and keeps going") {
    std::string doctored = minimal_edge_list();
    auto at = doctored.find("7 0\n");
    REQUIRE(at != std::string::npos);
    doctored.erase(at, 4);
    std::string path = write_file("doctored.txt", doctored);
    auto res = run("classify '" + path + "' -k 5");
    CHECK(res.code == 1);
    CHECK(res.out.find("frame: other\n") != std::string::npos);
    CHECK(res.out.find("CHECK hypothesis.kqt FAIL witness=7-2-3-4-5-0\n") != std::string::npos);
    CHECK(res.out.find("CHECK frame.forced-arc.7-0 FAIL") != std::string::npos);
    CHECK(res.out.find("CHECK frame.verdict FAIL witness=(0,2)\n") != std::string::npos);
}

TEST_CASE("witness prints the constructed path") {
    auto same = run("witness '" + minimal_file() + "' -k 5 -s 7 -t 5");
    CHECK(same.code == 0);
    CHECK(same.out == "7 2 3 4 5 (length 4)\n");

    auto diff = run("witness '" + minimal_file() + "' -k 5 -s 7 -t 2");
    CHECK(diff.code == 0);
    CHECK(diff.out == "7 0 1 2 (length 3)\n");
}

TEST_CASE("witness validates the position pair and the frame") {
    auto res = run("witness '" + minimal_file() + "' -k 5 -s 3 -t 3");
    CHECK(res.code == 2);
    CHECK(res.out.find("error: need positions 0 <= t < s <= k+2") != std::string::npos);

    std::string k8;
    k8 += "n 8\n";
    for (int u = 0; u < 8; ++u)
        for (int v = 0; v < 8; ++v)
            if (u != v) k8 += std::to_string(u) + " " + std::to_string(v) + "\n";
    std::string path = write_file("k8w.txt", k8);
    auto none = run("witness '" + path + "' -k 5 -s 7 -t 2");
    CHECK(none.code == 2);
    CHECK(none.out.find("error: no frame: diameter < k+2") != std::string::npos);
}

TEST_CASE("verify runs the exhaustive scan for both outcomes") {
    auto green = run("verify theorem2 --n 3 --seed 5");
    CHECK(green.code == 0);
    CHECK(green.out.find("suite: theorem2") != std::string::npos);
    CHECK(green.out.find("valid: 18\n") != std::string::npos);
    CHECK(green.out.find("failures: 0\n") != std::string::npos);

    auto red = run("verify theorem2 --n 4 --seed 5");
    CHECK(red.code == 1);
    CHECK(red.out.find("failures: 84\n") != std::string::npos);
    CHECK(red.out.find("digraph=4:0>1,0>2,0>3,1>3,2>1,3>0") != std::string::npos);
}

TEST_CASE("verify covers the generated, converse, and backward-path suites") {
    auto t3 = run("verify theorem3 --instances 20 --seed 1");
    CHECK(t3.code == 0);
    CHECK(t3.out.rfind("seed: 1\n", 0) == 0);
    CHECK(t3.out.find("suite: theorem3") != std::string::npos);
    CHECK(t3.out.find("valid: 20\n") != std::string::npos);
    CHECK(t3.out.find("prng: splitmix64") != std::string::npos);

    auto conv = run("verify converse --trials 100 --seed 1 --jobs 2");
    CHECK(conv.code == 0);
    CHECK(conv.out.find("suite: converse") != std::string::npos);
    CHECK(conv.out.find("failures: 0\n") != std::string::npos);

    auto l6 = run("verify lemma6 --trials 50 --seed 1");
    CHECK(l6.code == 0);
    CHECK(l6.out.find("suite: lemma6") != std::string::npos);
    CHECK(l6.out.find("failures: 0\n") != std::string::npos);
}

TEST_CASE("verify output is deterministic for a fixed seed across jobs") {
    auto serial = run("verify theorem3 --instances 30 --seed 9 --jobs 1");
    auto parallel = run("verify theorem3 --instances 30 --seed 9 --jobs 4");
    CHECK(serial.code == 0);
    CHECK(parallel.code == 0);
    CHECK(strip_wall_lines(serial.out) == strip_wall_lines(parallel.out));
}

TEST_CASE("verify rejects unknown suites before choosing a seed") {
    auto res = run("verify nosuch --seed 1");
    CHECK(res.code == 2);
    CHECK(res.out.find("error: unknown suite: nosuch") != std::string::npos);
    CHECK(res.out.find("seed:") == std::string::npos);
}
