#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "qsep/states.hpp"

namespace qsep {

inline constexpr std::size_t kMaxPairs = 6;
inline constexpr double kRowsOrthoTol = 1e-12;
inline constexpr double kAnnihilationFloor = 1e-14;

// The two retained rows of a local transformation acting on one party's n
// particles: unit-norm, mutually orthogonal vectors of length 2^n. Only
// these rows survive the postselection on the tested particles, so they
// fully determine the outcome.
class LocalRows {
public:
    LocalRows(std::size_t pairs, std::vector<cplx> u0, std::vector<cplx> u1);

    std::size_t pairs() const noexcept { return pairs_; }
    const std::vector<cplx>& u0() const noexcept { return u0_; }
    const std::vector<cplx>& u1() const noexcept { return u1_; }

private:
    std::size_t pairs_;
    std::vector<cplx> u0_;
    std::vector<cplx> u1_;
};

// Retained rows with single unit components at indices 00..0 and 11..1;
// for n = 2 these are the rows of a controlled-NOT style permutation.
LocalRows xor_rows(std::size_t pairs);

// Bob's rows from Alice's under the one-sided sign convention that
// symmetrizes the singlet: v_nu(b) = (-1)^(nu + popcount(b)) u_nu(b).
LocalRows mirror_rows(const LocalRows& u);

// The same sign map exposed as an explicit basis-change utility; its own
// inverse.
LocalRows basis_flip_rows(const LocalRows& v);

// rho x rho x ... (n factors) reindexed party-major: the entry at
// ((m1..mn)(n1..nn), (s1..sn)(t1..tn)) is the product over pairs of
// rho(mk nk, sk tk). Order 4^n, unit trace; n is capped at 6.
ComplexMatrix pair_power(const BipartiteDensity& rho, std::size_t pairs);

struct PostselectionOutcome {
    BipartiteDensity rho_new;
    double success_probability = 0.0;   // 1/N, trace before renormalization
};

// Raised when the retained block has (numerically) zero trace, i.e. the
// tested spins can never all come out up.
class PostselectionAnnihilated : public std::runtime_error {
public:
    PostselectionAnnihilated()
        : std::runtime_error("postselection annihilates the state") {}
};

// Keep pair 1, test every other particle for spin up: contract the
// party-major n-pair state through the 4 x 4^n retained-row operator
// A((mu,nu),(a,b)) = U(mu,a) V(nu,b) and renormalize.
PostselectionOutcome postselect(const BipartiteDensity& rho, std::size_t pairs,
                                const LocalRows& u, const LocalRows& v);

} // namespace qsep
