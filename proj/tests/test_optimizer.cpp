#include <doctest.h>

#include <cmath>

#include "qsep/optimizer.hpp"
#include "qsep/random_states.hpp"

using namespace qsep;

namespace {

const double kRoot2 = std::sqrt(2.0);

LocalRows rotation_rows(double angle) {
    return LocalRows(1, {std::cos(angle), std::sin(angle)},
                     {-std::sin(angle), std::cos(angle)});
}

OptimizerConfig quick_config(int restarts, std::uint64_t seed) {
    OptimizerConfig cfg;
    cfg.restarts = restarts;
    cfg.seed = seed;
    return cfg;
}

} // namespace

TEST_CASE("objective closed forms") {
    // One pair: the retained rows act as a local rotation, so the value is
    // the single-pair maximum 2 sqrt(2) x whatever the rows.
    for (double angle : {0.0, 0.3, 1.1}) {
        CHECK(objective(0.9, 1, rotation_rows(angle)) ==
              doctest::Approx(2.0 * kRoot2 * 0.9).epsilon(1e-12));
    }
    CHECK(objective(1.0, 2, xor_rows(2)) == doctest::Approx(2.0 * kRoot2).epsilon(1e-12));
    // Elementwise-power value at the headline point.
    CHECK(objective(0.5, 5, xor_rows(5)) ==
          doctest::Approx(2.0 * std::sqrt(14897.0 / 14884.0)).epsilon(1e-13));
}

TEST_CASE("report xor value agrees with the objective route") {
    for (std::size_t n : {1u, 2u, 3u}) {
        for (double x : {0.3, 0.8}) {
            OptimizerConfig cfg = quick_config(1, 5);
            cfg.max_iters = 1;
            const OptimizerReport report = optimize(x, n, cfg);
            CHECK(report.xor_value ==
                  doctest::Approx(objective(x, n, xor_rows(n))).epsilon(1e-12));
        }
    }
}

TEST_CASE("optimize solves the single-pair case exactly") {
    const OptimizerReport report = optimize(0.9, 1, quick_config(4, 7));
    CHECK(report.best_value == doctest::Approx(2.0 * kRoot2 * 0.9).epsilon(1e-6));
}

TEST_CASE("two pairs: the XOR rows stay on top") {
    const OptimizerReport report = optimize(0.5, 2, quick_config(16, 11));
    CHECK(report.best_value <= report.xor_value + 1e-6);
    CHECK(report.best_value >= report.xor_value - 1e-9);   // XOR seeds the search
    CHECK(report.used_xor_start);
}

TEST_CASE("three pairs at x = 0.7 beat the XOR rows") {
    OptimizerConfig cfg = quick_config(8, 13);
    const OptimizerReport report = optimize(0.7, 3, cfg);
    CHECK(report.best_value > report.xor_value + 1e-4);
    CHECK(report.best_value <= 2.0 * kRoot2 + 1e-9);
}

TEST_CASE("returned rows satisfy the orthonormality constraints") {
    const OptimizerReport report = optimize(0.6, 2, quick_config(6, 17));
    double n0 = 0.0, n1 = 0.0;
    cplx overlap = 0.0;
    for (std::size_t i = 0; i < report.best_rows.u0().size(); ++i) {
        n0 += std::norm(report.best_rows.u0()[i]);
        n1 += std::norm(report.best_rows.u1()[i]);
        overlap += std::conj(report.best_rows.u0()[i]) * report.best_rows.u1()[i];
    }
    CHECK(std::abs(n0 - 1.0) <= 1e-12);
    CHECK(std::abs(n1 - 1.0) <= 1e-12);
    CHECK(std::abs(overlap) <= 1e-12);
}

TEST_CASE("identical seeds reproduce identical reports, whatever the workers") {
    OptimizerConfig cfg = quick_config(6, 23);
    const OptimizerReport a = optimize(0.55, 2, cfg);
    const OptimizerReport b = optimize(0.55, 2, cfg);
    cfg.threads = 3;
    const OptimizerReport c = optimize(0.55, 2, cfg);
    CHECK(a.best_value == b.best_value);
    CHECK(a.best_value == c.best_value);
    REQUIRE(a.per_restart.size() == c.per_restart.size());
    for (std::size_t i = 0; i < a.per_restart.size(); ++i) {
        CHECK(a.per_restart[i].value == c.per_restart[i].value);
        CHECK(a.per_restart[i].iterations == c.per_restart[i].iterations);
        CHECK(a.per_restart[i].start_id == c.per_restart[i].start_id);
    }
}

TEST_CASE("per-restart bookkeeping") {
    OptimizerConfig cfg = quick_config(3, 29);
    const OptimizerReport report = optimize(0.4, 2, cfg);
    REQUIRE(report.per_restart.size() == 4);   // xor + 3 random
    CHECK(report.per_restart.front().start_id == kXorStartId);
    for (const RestartResult& r : report.per_restart) {
        CHECK(r.value <= report.best_value);
        CHECK(r.iterations <= cfg.max_iters);
    }
    CHECK(report.best_value >= report.xor_value - 1e-9);

    cfg.start_set = StartSet::random;
    const OptimizerReport no_xor = optimize(0.4, 2, cfg);
    CHECK(no_xor.per_restart.size() == 3);
    CHECK_FALSE(no_xor.used_xor_start);
}

TEST_CASE("independent rows mode carries Bob's rows") {
    OptimizerConfig cfg = quick_config(4, 31);
    cfg.mode = VMode::independent;
    const OptimizerReport report = optimize(0.5, 2, cfg);
    REQUIRE(report.best_rows_v.has_value());
    CHECK(report.best_value <= 2.0 * kRoot2 + 1e-9);
    CHECK(report.best_value >= report.xor_value - 1e-9);
    // The explicit-V objective agrees with the engine at the optimum.
    const double check = objective(0.5, 2, report.best_rows, *report.best_rows_v);
    CHECK(check == doctest::Approx(report.best_value).epsilon(1e-9));
}

TEST_CASE("mirrored optimum is reproduced by the objective route") {
    OptimizerConfig cfg = quick_config(6, 37);
    const OptimizerReport report = optimize(0.65, 2, cfg);
    const double via_objective = objective(0.65, 2, report.best_rows);
    CHECK(via_objective == doctest::Approx(report.best_value).epsilon(1e-9));
}

TEST_CASE("scan over the single-pair curve") {
    std::vector<double> grid;
    for (int i = 0; i <= 20; ++i) grid.push_back(i / 20.0);
    OptimizerConfig cfg = quick_config(2, 41);
    const std::vector<ScanPoint> curve = scan_curve(1, grid, cfg);
    REQUIRE(curve.size() == grid.size());
    double prev_x = -1.0;
    for (const ScanPoint& p : curve) {
        CHECK(p.x > prev_x);
        prev_x = p.x;
        CHECK(p.best_value == doctest::Approx(2.0 * kRoot2 * p.x).epsilon(1e-6));
        CHECK(p.best_value <= 2.0 * kRoot2 + 1e-9);
        CHECK(p.success_probability == doctest::Approx(1.0).epsilon(1e-9));
    }
    CHECK_FALSE(detect_transition(curve).has_value());
}

TEST_CASE("invalid configurations are rejected") {
    OptimizerConfig cfg;
    cfg.restarts = 0;
    CHECK_THROWS_AS(optimize(0.5, 2, cfg), std::invalid_argument);
    cfg.restarts = 1;
    CHECK_THROWS_AS(optimize(1.5, 2, cfg), std::invalid_argument);
    CHECK_THROWS_AS(optimize(0.5, 6, cfg), std::invalid_argument);
    cfg.step_tol = 0.0;
    CHECK_THROWS_AS(optimize(0.5, 2, cfg), std::invalid_argument);
    CHECK_THROWS_AS(scan_curve(2, {0.5, 1.2}, quick_config(1, 1)), std::invalid_argument);
}
