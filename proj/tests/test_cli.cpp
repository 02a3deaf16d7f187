// End to end checks of the command line tool.  ctest passes the binary
// path and the sample data directory as the two trailing arguments.

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

using nlohmann::json;

static std::string g_cli, g_data;

namespace {

struct RunResult {
    int code;
    std::string out;
};

RunResult run_raw(const std::string& cmd) {
    FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

RunResult run(const std::string& args) { return run_raw(g_cli + " " + args); }

std::string last_line(std::string text) {
    while (!text.empty() && text.back() == '\n') text.pop_back();
    std::size_t nl = text.find_last_of('\n');
    return nl == std::string::npos ? text : text.substr(nl + 1);
}

} // namespace

TEST_CASE("index prints a report and a verdict") {
    RunResult r = run("index " + g_data + "/d4_m3.prob");
    REQUIRE(r.code == 0);
    REQUIRE(last_line(r.out) == "index: 6 (consistent)");
    REQUIRE(r.out.find("c: x^3 (exact)") != std::string::npos);
    REQUIRE(r.out.find("h*: 10 4 4") != std::string::npos);
}

TEST_CASE("index emits machine readable json") {
    RunResult r = run("--json index " + g_data + "/d4_m2.prob");
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    REQUIRE(j["indices"]["homological"] == 3);
    REQUIRE(j["indices"]["residue"] == 3);
    REQUIRE(j["consistent"] == true);
    REQUIRE(j["h_star"] == json::array({7, 3, 3}));
    REQUIRE(j["h"] == json::array({7, 4}));
    REQUIRE(j["lambda"] == 3);
    REQUIRE(j["c"]["value"] == "x^2");
    REQUIRE(j["c"]["exact"] == true);
    REQUIRE(j["truncation"]["cap"] == 24);
}

TEST_CASE("check reports tangency both ways") {
    RunResult yes = run("check " + g_data + "/hamiltonian.prob");
    REQUIRE(yes.code == 0);
    REQUIRE(yes.out.find("tangent: yes") != std::string::npos);
    REQUIRE(yes.out.find("c: 0 (exact)") != std::string::npos);

    RunResult no = run("check " + g_data + "/notangent.prob");
    REQUIRE(no.code == 1);
    REQUIRE(no.out.find("tangent: no") != std::string::npos);
}

TEST_CASE("residues come from files") {
    RunResult r = run("residue " + g_data + "/basic.res");
    REQUIRE(r.code == 0);
    REQUIRE(last_line(r.out) == "residue: 3");

    RunResult j = run("--json residue " + g_data + "/basic.res");
    REQUIRE(j.code == 0);
    json parsed = json::parse(j.out);
    REQUIRE(parsed["residue"] == "3");
    REQUIRE(parsed["cover"]["exact"] == false);
    REQUIRE(parsed["cover"]["powers"] == json::array({1, 1}));
}

TEST_CASE("oracle agrees and says so") {
    RunResult r = run("oracle " + g_data + "/radial.prob");
    REQUIRE(r.code == 0);
    REQUIRE(last_line(r.out) == "agreement: yes");

    RunResult j = run("--json oracle " + g_data + "/a1_n3.prob");
    REQUIRE(j.code == 0);
    json parsed = json::parse(j.out);
    REQUIRE(parsed["agreement"] == true);
    REQUIRE(parsed["oracle"]["h_star"] == json::array({1, 0, 0, 0}));

    RunResult refuse = run("oracle --max-oracle-n 2 " + g_data + "/a1_n3.prob");
    REQUIRE(refuse.code == 1);
    REQUIRE(refuse.out.find("refusing") != std::string::npos);
}

TEST_CASE("starved truncation caps exit distinctly") {
    RunResult r = run("--trunc-cap 3 index " + g_data + "/d4_m3.prob");
    REQUIRE(r.code == 3);
    REQUIRE(r.out.find("did not stabilize") != std::string::npos);
}

TEST_CASE("problems arrive on stdin") {
    RunResult r = run_raw("printf 'vars: x y\\nf: x^2 + y^2\\nX: x, y\\n' | " +
                          g_cli + " index -");
    REQUIRE(r.code == 0);
    REQUIRE(last_line(r.out) == "index: 0 (consistent)");
}

TEST_CASE("bad input fails cleanly") {
    RunResult missing = run("index " + g_data + "/no_such_file.prob");
    REQUIRE(missing.code == 1);
    REQUIRE(missing.out.find("cannot open") != std::string::npos);

    RunResult untangent = run("index " + g_data + "/notangent.prob");
    REQUIRE(untangent.code == 1);
    REQUIRE(untangent.out.find("not divisible") != std::string::npos);
}

int main(int argc, char** argv) {
    if (argc < 3) {
        std::fprintf(stderr, "usage: test_cli [catch args] <cli> <data dir>\n");
        return 2;
    }
    g_data = argv[--argc];
    g_cli = argv[--argc];
    return Catch::Session().run(argc, argv);
}
