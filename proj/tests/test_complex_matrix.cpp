#include <doctest.h>

#include <cmath>
#include <random>

#include "qsep/complex_matrix.hpp"
#include "qsep/random_states.hpp"

using namespace qsep;

namespace {

ComplexMatrix random_hermitian(std::mt19937_64& rng, std::size_t dim) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexMatrix m(dim);
    for (std::size_t r = 0; r < dim; ++r) {
        m(r, r) = gauss(rng);
        for (std::size_t c = r + 1; c < dim; ++c) {
            const cplx v(gauss(rng), gauss(rng));
            m(r, c) = v;
            m(c, r) = std::conj(v);
        }
    }
    return m;
}

} // namespace

TEST_CASE("eigenvalues of small closed-form matrices") {
    ComplexMatrix d(2);
    d(0, 0) = 1.0;
    d(1, 1) = -1.0;
    Spectrum s = hermitian_eigenvalues(d);
    CHECK(s.values[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(s.values[1] == doctest::Approx(1.0).epsilon(1e-14));

    ComplexMatrix m(2);
    m(0, 0) = 2.0;
    m(1, 1) = 2.0;
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    s = hermitian_eigenvalues(m);
    CHECK(s.values[0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(s.values[1] == doctest::Approx(3.0).epsilon(1e-13));
}

TEST_CASE("eigenvalue sums match the trace and the residual is reported") {
    std::mt19937_64 rng = make_rng(7);
    for (std::size_t dim : {2u, 3u, 5u, 8u, 16u}) {
        const ComplexMatrix m = random_hermitian(rng, dim);
        const Spectrum s = hermitian_eigenvalues(m);
        REQUIRE(s.values.size() == dim);
        CHECK(s.residual <= kDefaultEigTol);
        double sum = 0.0;
        for (double v : s.values) sum += v;
        CHECK(std::abs(sum - m.trace().real()) <= 1e-10 * static_cast<double>(dim));
        for (std::size_t i = 1; i < dim; ++i) {
            CHECK(s.values[i - 1] <= s.values[i]);
        }
    }
}

TEST_CASE("eigensystem reconstructs the matrix and satisfies the pair residual") {
    std::mt19937_64 rng = make_rng(11);
    for (std::size_t dim : {2u, 4u, 9u, 16u, 33u, 64u}) {
        const ComplexMatrix m = random_hermitian(rng, dim);
        const Eigensystem es = hermitian_eigensystem(m);

        // V diag(values) V^dag reproduces the input.
        ComplexMatrix recon(dim);
        for (std::size_t r = 0; r < dim; ++r) {
            for (std::size_t c = 0; c < dim; ++c) {
                cplx sum = 0.0;
                for (std::size_t k = 0; k < dim; ++k) {
                    sum += es.vectors(r, k) * es.values[k] * std::conj(es.vectors(c, k));
                }
                recon(r, c) = sum;
            }
        }
        CHECK(recon.frobenius_diff(m) <= 1e-8);

        // ||M v - lambda v|| stays within 10x the sweep tolerance.
        for (std::size_t k = 0; k < dim; ++k) {
            double resid2 = 0.0;
            for (std::size_t r = 0; r < dim; ++r) {
                cplx mv = 0.0;
                for (std::size_t c = 0; c < dim; ++c) {
                    mv += m(r, c) * es.vectors(c, k);
                }
                resid2 += std::norm(mv - es.values[k] * es.vectors(r, k));
            }
            CHECK(std::sqrt(resid2) <= 10.0 * kDefaultEigTol);
        }
    }
}

TEST_CASE("non-Hermitian input is rejected with the worst pair named") {
    ComplexMatrix m(3);
    m(0, 1) = 1.0;
    m(1, 0) = 0.5;   // defect at (0,1)
    CHECK_THROWS_WITH_AS(hermitian_eigenvalues(m), doctest::Contains("(0,1)"),
                         std::invalid_argument);
    ComplexMatrix nan_mat(2);
    nan_mat(0, 0) = std::nan("");
    CHECK_THROWS_AS(hermitian_eigenvalues(nan_mat), std::invalid_argument);
    CHECK_THROWS_AS(hermitian_eigenvalues(ComplexMatrix::identity(2), 0.0),
                    std::invalid_argument);
}

TEST_CASE("kron identities") {
    const ComplexMatrix i2 = ComplexMatrix::identity(2);
    CHECK(kron(i2, i2).max_abs_diff(ComplexMatrix::identity(4)) == 0.0);

    ComplexMatrix sz(2);
    sz(0, 0) = 1.0;
    sz(1, 1) = -1.0;
    const ComplexMatrix zz = kron(sz, sz);
    CHECK(zz(0, 0) == cplx(1.0, 0.0));
    CHECK(zz(1, 1) == cplx(-1.0, 0.0));
    CHECK(zz(2, 2) == cplx(-1.0, 0.0));
    CHECK(zz(3, 3) == cplx(1.0, 0.0));
    CHECK(zz.hermiticity_defect() == 0.0);
}

TEST_CASE("kron is associative and multiplies traces") {
    std::mt19937_64 rng = make_rng(13);
    const ComplexMatrix a = random_hermitian(rng, 2);
    const ComplexMatrix b = random_hermitian(rng, 3);
    const ComplexMatrix c = random_hermitian(rng, 2);
    CHECK(kron(kron(a, b), c).max_abs_diff(kron(a, kron(b, c))) <= 1e-14);
    const cplx lhs = kron(a, b).trace();
    const cplx rhs = a.trace() * b.trace();
    CHECK(std::abs(lhs - rhs) <= 1e-12);
}

TEST_CASE("pair-to-party regrouping") {
    std::mt19937_64 rng = make_rng(17);

    SUBCASE("single pair is the identity map") {
        const ComplexMatrix m = random_hermitian(rng, 4);
        CHECK(regroup_pairs_to_parties(m, 1).max_abs_diff(m) == 0.0);
    }

    SUBCASE("n=2 index arithmetic") {
        // (m,n,m',n') = (0,1,1,0): pair-major row 6 lands on party-major
        // row (m*2+m')*4 + (n*2+n') = 6; probe it against a marker entry.
        ComplexMatrix m(16);
        m(6, 0) = 1.0;
        const ComplexMatrix g = regroup_pairs_to_parties(m, 2);
        CHECK(g(6, 0) == cplx(1.0, 0.0));
        // (m,n,m',n') = (1,0,0,1): pair-major row 9 -> party (10;01) = row 9.
        // A non-fixed point: (0,0,0,1) = row 1 -> party (00;01) = row 1?
        // bits (m n m' n') = 0001: alice 00, bob 01 -> row 1. Use
        // (0,1,0,0) = row 4 -> alice 00, bob 10 -> row 2 instead.
        ComplexMatrix probe(16);
        probe(4, 4) = 1.0;
        const ComplexMatrix g2 = regroup_pairs_to_parties(probe, 2);
        CHECK(g2(2, 2) == cplx(1.0, 0.0));
        CHECK(g2(4, 4) == cplx(0.0, 0.0));
    }

    SUBCASE("trace preserved and inverse restores the input") {
        for (std::size_t pairs : {2u, 3u}) {
            ComplexMatrix m(std::size_t{1} << (2 * pairs));
            std::normal_distribution<double> gauss(0.0, 1.0);
            for (std::size_t r = 0; r < m.dim(); ++r) {
                for (std::size_t c = 0; c < m.dim(); ++c) {
                    m(r, c) = cplx(gauss(rng), gauss(rng));
                }
            }
            const ComplexMatrix g = regroup_pairs_to_parties(m, pairs);
            // Diagonal entries are permuted, so only the summation order differs.
            CHECK(std::abs(g.trace() - m.trace()) <= 1e-13);
            CHECK(regroup_parties_to_pairs(g, pairs).max_abs_diff(m) == 0.0);
        }
    }

    SUBCASE("self-inverse only for n <= 2") {
        const ComplexMatrix m2 = random_hermitian(rng, 16);
        CHECK(regroup_pairs_to_parties(regroup_pairs_to_parties(m2, 2), 2).max_abs_diff(m2) ==
              0.0);
        ComplexMatrix m3(64);
        // Pair-major bits (m n m' n' m'' n'') = 010000 (row 16): party-major
        // row (000;100) = 4, which regroups onward to row 2, not back to 16.
        m3(16, 0) = 1.0;
        const ComplexMatrix once = regroup_pairs_to_parties(m3, 3);
        CHECK(once(4, 0) == cplx(1.0, 0.0));
        CHECK(regroup_pairs_to_parties(once, 3).max_abs_diff(m3) != 0.0);
        CHECK(regroup_parties_to_pairs(once, 3).max_abs_diff(m3) == 0.0);
    }

    SUBCASE("wrong order is rejected") {
        CHECK_THROWS_AS(regroup_pairs_to_parties(ComplexMatrix::identity(8), 2),
                        std::invalid_argument);
    }
}

TEST_CASE("unitarity defect") {
    CHECK(unitarity_defect(ComplexMatrix::identity(3)) == 0.0);
    std::mt19937_64 rng = make_rng(19);
    CHECK(unitarity_defect(random_unitary(rng, 4)) <= 1e-13);
    ComplexMatrix not_u = ComplexMatrix::identity(2);
    not_u(0, 0) = 2.0;
    CHECK(unitarity_defect(not_u) == doctest::Approx(3.0));
}
