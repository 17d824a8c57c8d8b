#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsep/cli.hpp"

using namespace qsep;
using nlohmann::json;

namespace {

struct RunResult {
    int code = 0;
    std::string out;
    std::string err;
};

RunResult run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli_run(args, out, err);
    return {code, out.str(), err.str()};
}

json results_of(const RunResult& r) {
    return json::parse(r.out)["results"];
}

} // namespace

TEST_CASE("ppt subcommand on the half-singlet Werner state") {
    const RunResult r = run({"ppt", "--family", "werner", "--x", "0.5"});
    REQUIRE(r.code == 0);
    const json report = json::parse(r.out);
    CHECK(report["command"] == "ppt");
    CHECK(report["version"] == kVersion);
    CHECK(report["results"]["min_eigenvalue"].get<double>() ==
          doctest::Approx(-0.125).epsilon(1e-12));
    CHECK_FALSE(report["results"]["is_ppt"].get<bool>());
    CHECK(report["results"]["spectrum"].size() == 4);
    CHECK(report["tolerances"]["ppt_tol"].get<double>() == 1e-10);
}

TEST_CASE("chsh subcommand closed form") {
    const RunResult r = run({"chsh", "--family", "werner", "--x", "0.8"});
    REQUIRE(r.code == 0);
    CHECK(results_of(r)["c_max"].get<double>() ==
          doctest::Approx(2.0 * std::sqrt(2.0) * 0.8).epsilon(1e-12));
    CHECK(results_of(r)["violated"].get<bool>());
}

TEST_CASE("thresholds subcommand") {
    const RunResult r = run({"thresholds"});
    REQUIRE(r.code == 0);
    const json res = results_of(r);
    CHECK(res["werner_ppt_bound"]["value"].get<double>() ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(res["werner_bell_bound"]["value"].get<double>() ==
          doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(res["alpha_entropic_reference"]["value"].get<double>() ==
          doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
    CHECK(res["gisin_ppt_threshold"]["value"].get<double>() ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK(res["gisin_filter_threshold"]["value"].get<double>() ==
          doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));

    const RunResult forked = run({"thresholds", "--a-re", "0.8", "--b-re", "0.6"});
    CHECK(results_of(forked)["gisin_ppt_threshold"]["value"].get<double>() ==
          doctest::Approx(1.0 / 1.96).epsilon(1e-12));
}

TEST_CASE("collective subcommand with doubled singlets") {
    const RunResult r =
        run({"collective", "--pairs", "2", "--x", "1.0", "--rows", "xor"});
    REQUIRE(r.code == 0);
    const json res = results_of(r);
    CHECK(res["c_max"].get<double>() ==
          doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
    CHECK(res["success_probability"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(res["violated"].get<bool>());
}

TEST_CASE("emit-state round trip reproduces the analysis bit for bit") {
    const RunResult emitted = run({"emit-state", "--family", "werner", "--x", "0.37"});
    REQUIRE(emitted.code == 0);
    const std::string path = "qsep_cli_roundtrip_state.txt";
    {
        std::ofstream file(path);
        file << emitted.out;
    }
    const RunResult direct = run({"ppt", "--family", "werner", "--x", "0.37"});
    const RunResult reloaded = run({"ppt", "--family", "file", "--path", path});
    REQUIRE(direct.code == 0);
    REQUIRE(reloaded.code == 0);
    CHECK(results_of(direct) == results_of(reloaded));

    const RunResult chsh_direct = run({"chsh", "--family", "werner", "--x", "0.37"});
    const RunResult chsh_reloaded = run({"chsh", "--family", "file", "--path", path});
    CHECK(results_of(chsh_direct) == results_of(chsh_reloaded));
    std::remove(path.c_str());
}

TEST_CASE("scan emits one CSV row per grid point") {
    const RunResult r = run({"scan", "--pairs", "1", "--x-min", "0", "--x-max", "1",
                             "--grid", "0.1", "--restarts", "2"});
    REQUIRE(r.code == 0);
    std::stringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "x,c_max,xor_value,success_probability,pairs,mode");
    int rows = 0;
    double prev_x = -1.0;
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        ++rows;
        const double x = std::stod(line.substr(0, line.find(',')));
        CHECK(x > prev_x);
        prev_x = x;
        CHECK(line.substr(line.size() - 11) == ",1,mirrored");
    }
    CHECK(rows == 11);
}

TEST_CASE("scan json reports the transition field") {
    const RunResult r = run({"scan", "--pairs", "1", "--x-min", "0.2", "--x-max", "0.4",
                             "--grid", "0.1", "--restarts", "1", "--format", "json"});
    REQUIRE(r.code == 0);
    const json res = results_of(r);
    CHECK(res["points"].size() == 3);
    CHECK(res["transition_x"].is_null());
}

TEST_CASE("optimize subcommand emits the full report") {
    const RunResult r = run({"optimize", "--pairs", "1", "--x", "0.9", "--restarts", "2",
                             "--seed", "5"});
    REQUIRE(r.code == 0);
    const json res = results_of(r);
    CHECK(res["best_value"].get<double>() ==
          doctest::Approx(2.0 * std::sqrt(2.0) * 0.9).epsilon(1e-6));
    CHECK(res["per_restart"].size() == 3);
    CHECK(res["best_rows"]["u0"].size() == 2);
    CHECK(json::parse(r.out)["seed"].get<std::uint64_t>() == 5);
}

TEST_CASE("usage errors exit with 1") {
    CHECK(run({"ppt", "--family", "werner"}).code == 1);            // missing --x
    CHECK(run({"ppt", "--family", "unknown", "--x", "1"}).code == 1);
    CHECK(run({"ppt", "--family", "werner", "--x", "1.5"}).code == 1);
    CHECK(run({"nonsense"}).code == 1);
    CHECK(run({}).code == 1);
    CHECK(run({"collective", "--x", "0.5"}).code == 1);             // missing --pairs
}

TEST_CASE("numerical failures exit with 2") {
    CHECK(run({"ppt", "--family", "file", "--path", "/nonexistent.txt"}).code == 2);
    const std::string path = "qsep_cli_bad_state.txt";
    {
        std::ofstream file(path);
        file << "2 2\n1,0 0,0 0,0 0,0\n";   // truncated body
    }
    CHECK(run({"ppt", "--family", "file", "--path", path}).code == 2);
    std::remove(path.c_str());
}

TEST_CASE("selftest subcommand runs a single criterion") {
    const RunResult r = run({"selftest", "--only", "2"});
    CHECK(r.code == 0);
    CHECK(r.out.find("[ 2] PASS") != std::string::npos);
    CHECK(r.out.find("[ 1]") == std::string::npos);
}

TEST_CASE("help exits cleanly") {
    CHECK(run({"--help"}).code == 0);
    CHECK(run({"ppt", "--help"}).code == 0);
}
