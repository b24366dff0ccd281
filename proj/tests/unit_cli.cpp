// End-to-end checks of the command-line tool: exit codes, JSON schema and
// round-trip stability, format selection, and determinism.  The binary path
// arrives through the E2SIEVE_CLI_PATH compile definition.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

using json = nlohmann::ordered_json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args, bool mute_stderr = false) {
    std::string cmd = std::string(E2SIEVE_CLI_PATH) + " " + args;
    if (mute_stderr) cmd += " 2>/dev/null";
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t got = 0;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

bool json_roundtrips(const std::string& text) {
    json parsed = json::parse(text);
    return parsed.dump(2) + "\n" == text;
}

}  // namespace

TEST_CASE("help exits zero and lists the subcommands") {
    RunResult r = run_cli("--help");
    CHECK(r.exit_code == 0);
    for (const char* name : {"admissible", "singular-series", "weights", "sums", "jint",
                             "bounds", "min-k", "e2", "bv", "wirsing"})
        CHECK(r.out.find(name) != std::string::npos);
}

TEST_CASE("jint reproduces the reference detection constant") {
    RunResult r = run_cli("jint --k 3 --B 4 --eta 1/144 --nu 1 --poly 1,6");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["schema"] == "v1");
    CHECK(j["j"]["sign"] == 1);
    CHECK(j["j"]["exact"] ==
          "852438101/5598720 + 5464/5*log(2) + 65609/40*log(3) - 2732/5*log(11) - "
          "2732/5*log(13)");
    CHECK(double(j["j"]["value"]) == doctest::Approx(0.00016493330185924358).epsilon(1e-9));
    CHECK(j["j0"]["exact"] == "38/15");
}

TEST_CASE("e2 lists the first semiprimes") {
    RunResult r = run_cli("e2 --limit 40");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["count"] == 12);
    CHECK(j["values"] == json::array({6, 10, 14, 15, 21, 22, 26, 33, 34, 35, 38, 39}));
    CHECK(j["values_truncated"] == false);
}

TEST_CASE("min-k certifies the reference threshold") {
    RunResult r = run_cli("min-k --nu 1 --B 4 --eta 1/144 --family fixed --poly 1,6");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["k"] == 3);
}

TEST_CASE("json output round-trips byte-identically") {
    for (const char* args : {"jint --k 3 --B 4 --eta 1/144 --nu 1 --poly 1,6",
                             "e2 --limit 60 --gaps",
                             "bounds --nu 2 --B 4 --variant e2",
                             "wirsing --kind unit --z 1000"}) {
        RunResult r = run_cli(args);
        REQUIRE(r.exit_code == 0);
        CHECK(json_roundtrips(r.out));
    }
}

TEST_CASE("precondition violations exit 2") {
    CHECK(run_cli("jint --k 3 --B 0/1 --poly 1,6", true).exit_code == 2);
    CHECK(run_cli("jint --k 3 --B x/y --poly 1,6", true).exit_code == 2);
    CHECK(run_cli("jint --k 3 --no-such-flag", true).exit_code == 2);
    CHECK(run_cli("frobnicate", true).exit_code == 2);
    // inadmissible tuple: every n has 2 | n(n+1)
    CHECK(run_cli("singular-series --tuple n,n+1", true).exit_code == 2);
    CHECK(run_cli("e2", true).exit_code == 2);  // --limit is required
}

TEST_CASE("resource guards exit 3") {
    CHECK(run_cli("e2 --limit 200000001", true).exit_code == 3);
    CHECK(run_cli("wirsing --kind unit --z 200000000", true).exit_code == 3);
}

TEST_CASE("--out writes the payload and keeps stdout quiet") {
    std::string path = "/tmp/e2sieve_cli_out_test.json";
    std::remove(path.c_str());
    RunResult r = run_cli("e2 --limit 40 --out " + path);
    CHECK(r.exit_code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    json j = json::parse(ss.str());
    CHECK(j["schema"] == "v1");
    CHECK(j["count"] == 12);
    std::remove(path.c_str());
}

TEST_CASE("csv and table formats") {
    RunResult csv = run_cli("e2 --limit 40 --format csv");
    REQUIRE(csv.exit_code == 0);
    CHECK(csv.out.rfind("n,p1,p2\n", 0) == 0);
    CHECK(csv.out.find("6,2,3") != std::string::npos);

    RunResult table = run_cli("e2 --limit 40 --format table");
    REQUIRE(table.exit_code == 0);
    CHECK(table.out.find("schema: v1") != std::string::npos);

    CHECK(run_cli("e2 --limit 40 --format yaml", true).exit_code == 2);
}

TEST_CASE("outputs are deterministic and thread-count independent") {
    std::string sums =
        "sums --tuple n,n+2,n+6 --n 2000 --level 15 --poly 1,6 --mode combined --nu 1";
    RunResult a = run_cli(sums + " --threads 1");
    RunResult b = run_cli(sums + " --threads 1");
    RunResult c = run_cli(sums + " --threads 4");
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);

    RunResult s1 = run_cli("weights --tuple n,n+2 --level 25 --identity-check 4 --seed 42");
    RunResult s2 = run_cli("weights --tuple n,n+2 --level 25 --identity-check 4 --seed 42");
    REQUIRE(s1.exit_code == 0);
    CHECK(s1.out == s2.out);
}
