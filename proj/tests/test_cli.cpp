// test_cli.cpp — the command-line tool end to end: JSON output and exit codes

#include "doctest.h"

#include <json.hpp>

#include <array>
#include <cstdio>
#include <string>
#include <sys/wait.h>

namespace {

using json = nlohmann::json;

const std::string cli = VNALG_CLI_PATH;
const std::string data = VNALG_DATA_DIR;

struct run_result {
    int code = -1;
    json out;
};

run_result run(const std::string& args) {
    const std::string cmd = "'" + cli + "' " + args + " --json-indent -1 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string text;
    std::array<char, 4096> buf{};
    while (const std::size_t n = std::fread(buf.data(), 1, buf.size(), p)) text.append(buf.data(), n);
    const int status = pclose(p);
    run_result r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = json::parse(text, nullptr, false);
    return r;
}

} // namespace

TEST_CASE("dim on ℂ ⊂ M3 reports [[3]] with version and tolerances") {
    const auto r = run("dim --scene " + data + "/scenes/c_in_m3.json");
    CHECK(r.code == 0);
    REQUIRE(!r.out.is_discarded());
    CHECK(r.out["dim"] == json::parse("[[3]]"));
    CHECK(r.out["homomorphisms"]["iota"]["minimal_index"] == json::parse("[[9]]"));
    CHECK(r.out.contains("version"));
    CHECK(r.out["tolerances"].contains("kernel"));
}

TEST_CASE("eval of the left zig-zag with --assert-identity exits 0") {
    const auto r = run("eval --env " + data + "/env/factor.json --diagram " + data +
                       "/diagrams/zigzag_left.vnd --assert-identity");
    CHECK(r.code == 0);
    CHECK(r.out["pass"] == true);
    CHECK(r.out["identity_residual"].get<double>() < 1e-10);
}

TEST_CASE("a failed assertion exits 1") {
    const auto r = run("eval --env " + data + "/env/factor.json --term x --assert-identity");
    CHECK(r.code == 1);
    CHECK(r.out["pass"] == false);
}

TEST_CASE("malformed input exits 2 with a JSON error object") {
    auto r = run("eval --env " + data + "/env/factor.json --term 'R* ;'");
    CHECK(r.code == 2);
    CHECK(r.out["error"]["kind"] == "SyntaxError");
    r = run("eval --env " + data + "/env/factor.json --term 'xi | eta'");
    CHECK(r.code == 2);
    CHECK(r.out["error"]["kind"] == "TypeError");
    r = run("dim --scene /nonexistent/scene.json");
    CHECK(r.code == 2);
    CHECK(r.out["error"]["kind"] == "IOError");
    r = run("dim --scene " + data + "/env/factor.json --seed notanumber");
    CHECK(r.code == 2);
    CHECK(r.out.contains("error"));
    r = run("frobnicate");
    CHECK(r.code == 2);
}

TEST_CASE("fuse reports product multiplicities and unitary residuals") {
    const auto r = run("fuse --scene " + data + "/scenes/bimodules.json");
    REQUIRE(r.code == 0);
    const json& f = r.out["fusions"];
    REQUIRE(f.size() == 4u);
    CHECK(f[0]["multiplicities"] == json::parse("[[2,2]]"));
    for (const auto& e : f) {
        CHECK(e["gram_dim"] == e["dim"]);
        CHECK(e["unitarity_residual"].get<double>() < 1e-9);
    }
}

TEST_CASE("normalize repairs skewed data on every scene bimodule") {
    const auto r = run("normalize --assert-normalized --scene " + data + "/scenes/bimodules.json");
    CHECK(r.code == 0);
    CHECK(r.out["pass"] == true);
    CHECK(r.out["bimodules"]["K"]["dim"] == json::parse("[[1,1]]"));
}

TEST_CASE("index and l2map on the bundled scene") {
    auto r = run("index --assert-inequalities --scene " + data + "/scenes/bimodules.json");
    CHECK(r.code == 0);
    CHECK(r.out["violations"] == 0);
    CHECK(r.out["homomorphisms"]["a_in_m6"]["minimal_expectation"]["pp_index"]["watatani_norm"].get<double>() ==
          doctest::Approx(9.0));
    r = run("l2map --scene " + data + "/scenes/bimodules.json");
    CHECK(r.code == 0);
    CHECK(r.out["homomorphisms"]["a_in_m6"]["scale"][0].get<double>() == doctest::Approx(std::sqrt(3.0)));
}

TEST_CASE("check --suite zigzag on the bundled scene passes; unknown suites are malformed") {
    auto r = run("check --suite zigzag --scene " + data + "/scenes/bimodules.json");
    CHECK(r.code == 0);
    CHECK(r.out["failed"] == 0);
    CHECK(r.out["passed"].get<int>() > 0);
    r = run("check --suite nosuch");
    CHECK(r.code == 2);
}

TEST_CASE("output is deterministic for a fixed seed") {
    const std::string args = "normalize --seed 42 --scene " + data + "/scenes/bimodules.json";
    CHECK(run(args).out == run(args).out);
}
