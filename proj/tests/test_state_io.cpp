#include <doctest.h>

#include <cmath>
#include <sstream>

#include "qsep/random_states.hpp"
#include "qsep/state_io.hpp"

using namespace qsep;

TEST_CASE("shortest round-trip formatting") {
    for (double v : {1.0 / 3.0, 0.1, -0.0, 1e-17, 2.0 * std::sqrt(2.0), -0.125}) {
        const std::string text = format_double(v);
        CHECK(std::stod(text) == v);
    }
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(-1.0) == "-1");
}

TEST_CASE("state files round trip bit-exactly") {
    std::mt19937_64 rng = make_rng(79);
    for (int trial = 0; trial < 5; ++trial) {
        const BipartiteDensity rho = random_bipartite_density(rng, 2, 3);
        std::stringstream stream;
        write_state(stream, rho);
        const BipartiteDensity back = read_state(stream);
        CHECK(back.dim_a() == 2);
        CHECK(back.dim_b() == 3);
        CHECK(back.matrix().max_abs_diff(rho.matrix()) == 0.0);
    }
}

TEST_CASE("werner state file shape") {
    const std::string text = write_state_string(werner(0.5));
    std::stringstream stream(text);
    std::string header;
    std::getline(stream, header);
    CHECK(header == "2 2");
    std::string first_row;
    std::getline(stream, first_row);
    CHECK(first_row == "0.125,0 0,0 0,0 0,0");
}

TEST_CASE("malformed state files are rejected") {
    auto reject = [](const std::string& text) {
        std::stringstream stream(text);
        CHECK_THROWS_AS(read_state(stream), std::runtime_error);
    };
    reject("");
    reject("0 2\n");
    reject("2 2\n1,0 0,0 0,0 0,0\n");                                 // truncated
    reject("1 1\nnot-a-number\n");
    reject("1 1\n1,0\nextra\n");                                      // trailing data
    reject("1 1\n0.9,0\n");                                           // trace defect
    reject("2 1\n1,0 0.2,0\n0,0 0,0\n");                              // not Hermitian
    CHECK_THROWS_AS(read_state_file("/nonexistent/qsep-state.txt"), std::runtime_error);
}
