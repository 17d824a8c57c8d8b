#include <doctest.h>

#include <cmath>

#include "qsep/random_states.hpp"
#include "qsep/separability.hpp"
#include "qsep/states.hpp"

using namespace qsep;

TEST_CASE("singlet entries, purity and outer-product identity") {
    const BipartiteDensity s = singlet();
    CHECK(s.entry(0, 1, 0, 1) == cplx(0.5, 0.0));
    CHECK(s.entry(1, 0, 1, 0) == cplx(0.5, 0.0));
    CHECK(s.entry(0, 1, 1, 0) == cplx(-0.5, 0.0));
    CHECK(s.entry(1, 0, 0, 1) == cplx(-0.5, 0.0));
    CHECK(std::abs(s.matrix().trace() - cplx(1.0, 0.0)) == 0.0);

    const ComplexMatrix sq = s.matrix() * s.matrix();
    CHECK(std::abs(sq.trace().real() - 1.0) <= 1e-15);   // pure state

    // Outer product of (0, 1/sqrt2, -1/sqrt2, 0) with itself.
    const double r = 1.0 / std::sqrt(2.0);
    const cplx psi[4] = {0.0, r, -r, 0.0};
    ComplexMatrix outer(4);
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            outer(i, j) = psi[i] * std::conj(psi[j]);
        }
    }
    CHECK(outer.max_abs_diff(s.matrix()) <= 1e-15);
}

TEST_CASE("werner endpoints and interior entry") {
    CHECK(werner(1.0).matrix().max_abs_diff(singlet().matrix()) == 0.0);
    const BipartiteDensity mixed = werner(0.0);
    for (int i = 0; i < 4; ++i) {
        CHECK(mixed.matrix()(i, i) == cplx(0.25, 0.0));
    }
    CHECK(mixed.matrix().max_abs() == 0.25);
    CHECK(werner(0.5).entry(0, 1, 0, 1) == cplx(0.375, 0.0));
    CHECK_THROWS_AS(werner(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(werner(1.1), std::invalid_argument);
}

TEST_CASE("gisin family entries and normalization") {
    const double r = 1.0 / std::sqrt(2.0);
    const BipartiteDensity g = gisin_family(r, r, 0.6);
    CHECK(g.entry(0, 1, 1, 0).real() == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(g.entry(0, 0, 0, 0).real() == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(std::abs(g.matrix().trace() - cplx(1.0, 0.0)) <= 1e-15);

    SUBCASE("b = 0 gives a diagonal product mixture that stays PPT") {
        const BipartiteDensity diag = gisin_family(1.0, 0.0, 0.7);
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                if (i != j) CHECK(diag.matrix()(i, j) == cplx(0.0, 0.0));
            }
        }
        CHECK(ppt_check(diag).is_ppt);
    }

    SUBCASE("complex amplitudes keep unit trace") {
        std::mt19937_64 rng = make_rng(23);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int trial = 0; trial < 20; ++trial) {
            cplx a(gauss(rng), gauss(rng)), b(gauss(rng), gauss(rng));
            const double n = std::sqrt(std::norm(a) + std::norm(b));
            a /= n;
            b /= n;
            const double x = 0.05 + 0.9 * (trial / 20.0);
            const BipartiteDensity state = gisin_family(a, b, x);
            CHECK(std::abs(state.matrix().trace() - cplx(1.0, 0.0)) <= 1e-14);
        }
    }

    SUBCASE("pure at x = 1") {
        const BipartiteDensity pure = gisin_family(0.6, 0.8, 1.0);
        const ComplexMatrix sq = pure.matrix() * pure.matrix();
        CHECK(sq.trace().real() == doctest::Approx(1.0).epsilon(1e-14));
    }

    CHECK_THROWS_AS(gisin_family(1.0, 1.0, 0.5), std::invalid_argument);
}

TEST_CASE("singlet plus polarized pair") {
    const BipartiteDensity zero = singlet_plus_polarized(0.0);
    CHECK(zero.entry(0, 0, 0, 0) == cplx(1.0, 0.0));
    CHECK(zero.matrix().max_abs() == 1.0);

    CHECK(singlet_plus_polarized(1.0).matrix().max_abs_diff(singlet().matrix()) == 0.0);

    const BipartiteDensity mix = singlet_plus_polarized(0.4);
    CHECK(mix.entry(0, 0, 0, 0).real() == doctest::Approx(0.6).epsilon(1e-14));
    CHECK(mix.entry(0, 1, 0, 1).real() == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(mix.entry(1, 0, 1, 0).real() == doctest::Approx(0.2).epsilon(1e-14));
}

TEST_CASE("ensembles mix and reject bad weights") {
    ComplexMatrix up(2);
    up(0, 0) = 1.0;
    ComplexMatrix down(2);
    down(1, 1) = 1.0;

    SUBCASE("single product term") {
        const BipartiteDensity rho =
            from_ensemble(ProductEnsemble({ProductTerm{1.0, up, up}}));
        CHECK(rho.entry(0, 0, 0, 0) == cplx(1.0, 0.0));
    }

    SUBCASE("equal mixture of aligned products") {
        const BipartiteDensity rho = from_ensemble(
            ProductEnsemble({ProductTerm{0.5, up, up}, ProductTerm{0.5, down, down}}));
        CHECK(rho.matrix()(0, 0) == cplx(0.5, 0.0));
        CHECK(rho.matrix()(3, 3) == cplx(0.5, 0.0));
        CHECK(rho.matrix()(1, 1) == cplx(0.0, 0.0));
    }

    SUBCASE("weights must sum to one and be positive") {
        CHECK_THROWS_AS(ProductEnsemble({ProductTerm{0.5, up, up}, ProductTerm{0.4, down, down}}),
                        std::invalid_argument);
        CHECK_THROWS_AS(ProductEnsemble({ProductTerm{-0.5, up, up}, ProductTerm{1.5, down, down}}),
                        std::invalid_argument);
    }

    SUBCASE("factors must be densities") {
        ComplexMatrix bad(2);
        bad(0, 0) = 2.0;
        CHECK_THROWS_AS(ProductEnsemble({ProductTerm{1.0, bad, up}}), std::invalid_argument);
    }
}

TEST_CASE("validate reports defects") {
    CHECK(validate(werner(0.3)).ok);

    ComplexMatrix short_trace(4);
    short_trace(0, 0) = 0.9;
    const ValidationReport trace_rep = validate(short_trace, 2, 2);
    CHECK_FALSE(trace_rep.ok);
    CHECK(trace_rep.trace_defect == doctest::Approx(0.1).epsilon(1e-12));

    ComplexMatrix indefinite(4);
    indefinite(0, 0) = 1.2;
    indefinite(1, 1) = -0.2;
    const ValidationReport eig_rep = validate(indefinite, 2, 2);
    CHECK_FALSE(eig_rep.ok);
    CHECK(eig_rep.min_eigenvalue == doctest::Approx(-0.2).epsilon(1e-12));
    CHECK(eig_rep.trace_defect <= 1e-12);

    const ValidationReport dim_rep = validate(ComplexMatrix::identity(3), 2, 2);
    CHECK_FALSE(dim_rep.dims_consistent);
}

TEST_CASE("constructors always produce valid densities") {
    for (int i = 0; i <= 10; ++i) {
        const double x = i / 10.0;
        CHECK(validate(werner(x)).ok);
        CHECK(validate(singlet_plus_polarized(x)).ok);
        CHECK(validate(gisin_family(0.8, cplx(0.0, 0.6), x)).ok);
    }
    std::mt19937_64 rng = make_rng(29);
    for (int trial = 0; trial < 10; ++trial) {
        CHECK(validate(random_bipartite_density(rng, 2, 3)).ok);
        CHECK(validate(random_separable(rng, 3, 2)).ok);
    }
}

TEST_CASE("product mixtures stay PPT") {
    std::mt19937_64 rng = make_rng(31);
    std::uniform_int_distribution<std::size_t> dims(2, 3);
    for (int trial = 0; trial < 50; ++trial) {
        const BipartiteDensity rho = random_separable(rng, dims(rng), dims(rng));
        CHECK(ppt_check(rho).is_ppt);
    }
}
