#pragma once

#include <cstddef>
#include <vector>

#include "qsep/complex_matrix.hpp"

namespace qsep {

inline constexpr double kDensityHermTol = 1e-12;
inline constexpr double kDensityTraceTol = 1e-12;
inline constexpr double kDensityMinEigFloor = -1e-10;

struct ValidationReport {
    double hermiticity_defect = 0.0;
    double trace_defect = 0.0;   // |trace - 1|
    double min_eigenvalue = 0.0;
    bool dims_consistent = false;
    bool ok = false;
};

// A density matrix over a bipartite system with subsystem dimensions
// (dim_a, dim_b). Composite row index r = m * dim_b + mu, with m indexing
// the first subsystem and mu the second. Construction enforces
// Hermiticity, unit trace and positive semidefiniteness (up to the
// floors above), so a held value is always a physical state.
class BipartiteDensity {
public:
    BipartiteDensity(ComplexMatrix mat, std::size_t dim_a, std::size_t dim_b);

    const ComplexMatrix& matrix() const noexcept { return mat_; }
    std::size_t dim_a() const noexcept { return dim_a_; }
    std::size_t dim_b() const noexcept { return dim_b_; }

    cplx entry(std::size_t m, std::size_t mu, std::size_t n, std::size_t nu) const {
        return mat_(m * dim_b_ + mu, n * dim_b_ + nu);
    }

private:
    ComplexMatrix mat_;
    std::size_t dim_a_;
    std::size_t dim_b_;
};

ValidationReport validate(const ComplexMatrix& mat, std::size_t dim_a, std::size_t dim_b);
ValidationReport validate(const BipartiteDensity& rho);

// One term of a convex mixture of product states: weight * left (x) right.
struct ProductTerm {
    double weight;
    ComplexMatrix left;
    ComplexMatrix right;
};

// Validated list of product terms: positive weights summing to one, each
// factor itself a density matrix, all terms of matching dimensions.
class ProductEnsemble {
public:
    explicit ProductEnsemble(std::vector<ProductTerm> terms);

    const std::vector<ProductTerm>& terms() const noexcept { return terms_; }
    std::size_t dim_a() const noexcept { return dim_a_; }
    std::size_t dim_b() const noexcept { return dim_b_; }

private:
    std::vector<ProductTerm> terms_;
    std::size_t dim_a_;
    std::size_t dim_b_;
};

/// The two-qubit singlet density matrix: entries +1/2 at (01,01), (10,10)
/// and -1/2 at (01,10), (10,01).
BipartiteDensity singlet();

/// x * singlet + (1-x) * I/4, for x in [0, 1].
BipartiteDensity werner(double x);

/// Mixture of a fraction x of the pure state a|01> + b|10> with fractions
/// (1-x)/2 of |00> and |11>. Requires |a|^2 + |b|^2 = 1.
BipartiteDensity gisin_family(cplx a, cplx b, double x);

/// x * singlet + (1-x) * |00><00|, for x in [0, 1].
BipartiteDensity singlet_plus_polarized(double x);

/// Convex mixture of tensor products; separable by construction.
BipartiteDensity from_ensemble(const ProductEnsemble& e);

} // namespace qsep
