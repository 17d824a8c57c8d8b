#include "qsep/states.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace qsep {

namespace {

void require_unit_range(double x, const char* who) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw std::invalid_argument(std::string(who) + ": x must lie in [0, 1], got " +
                                    std::to_string(x));
    }
}

} // namespace

ValidationReport validate(const ComplexMatrix& mat, std::size_t dim_a, std::size_t dim_b) {
    ValidationReport rep;
    rep.dims_consistent = (dim_a >= 1 && dim_b >= 1 && mat.dim() == dim_a * dim_b) && mat.finite();
    if (!rep.dims_consistent) {
        return rep;
    }
    rep.hermiticity_defect = mat.hermiticity_defect();
    rep.trace_defect = std::abs(mat.trace() - cplx(1.0, 0.0));
    if (rep.hermiticity_defect <= kDensityHermTol) {
        rep.min_eigenvalue = hermitian_eigenvalues(mat).values.front();
    } else {
        rep.min_eigenvalue = -1.0;
    }
    rep.ok = rep.hermiticity_defect <= kDensityHermTol &&
             rep.trace_defect <= kDensityTraceTol &&
             rep.min_eigenvalue >= kDensityMinEigFloor;
    return rep;
}

ValidationReport validate(const BipartiteDensity& rho) {
    return validate(rho.matrix(), rho.dim_a(), rho.dim_b());
}

BipartiteDensity::BipartiteDensity(ComplexMatrix mat, std::size_t dim_a, std::size_t dim_b)
    : mat_(std::move(mat)), dim_a_(dim_a), dim_b_(dim_b) {
    const ValidationReport rep = validate(mat_, dim_a_, dim_b_);
    if (!rep.dims_consistent) {
        throw std::invalid_argument("BipartiteDensity: matrix order does not equal dim_a * dim_b");
    }
    if (!rep.ok) {
        throw std::invalid_argument(
            "BipartiteDensity: invariants violated (hermiticity defect " +
            std::to_string(rep.hermiticity_defect) + ", trace defect " +
            std::to_string(rep.trace_defect) + ", min eigenvalue " +
            std::to_string(rep.min_eigenvalue) + ")");
    }
}

ProductEnsemble::ProductEnsemble(std::vector<ProductTerm> terms) : terms_(std::move(terms)) {
    if (terms_.empty()) {
        throw std::invalid_argument("ProductEnsemble: needs at least one term");
    }
    dim_a_ = terms_.front().left.dim();
    dim_b_ = terms_.front().right.dim();
    double weight_sum = 0.0;
    for (const ProductTerm& t : terms_) {
        if (t.left.dim() != dim_a_ || t.right.dim() != dim_b_) {
            throw std::invalid_argument("ProductEnsemble: factor dimensions differ across terms");
        }
        if (!(t.weight > 0.0)) {
            throw std::invalid_argument("ProductEnsemble: weights must be positive");
        }
        weight_sum += t.weight;
        for (const ComplexMatrix* f : {&t.left, &t.right}) {
            if (f->hermiticity_defect() > kDensityHermTol ||
                std::abs(f->trace() - cplx(1.0, 0.0)) > kDensityTraceTol ||
                hermitian_eigenvalues(*f).values.front() < kDensityMinEigFloor) {
                throw std::invalid_argument("ProductEnsemble: factor is not a density matrix");
            }
        }
    }
    if (std::abs(weight_sum - 1.0) > kDensityTraceTol) {
        throw std::invalid_argument("ProductEnsemble: weights sum to " +
                                    std::to_string(weight_sum) + ", expected 1");
    }
}

BipartiteDensity singlet() {
    ComplexMatrix s(4);
    s(1, 1) = 0.5;
    s(2, 2) = 0.5;
    s(1, 2) = -0.5;
    s(2, 1) = -0.5;
    return BipartiteDensity(std::move(s), 2, 2);
}

BipartiteDensity werner(double x) {
    require_unit_range(x, "werner");
    ComplexMatrix m(4);
    const double mixed = (1.0 - x) / 4.0;
    for (std::size_t i = 0; i < 4; ++i) {
        m(i, i) = mixed;
    }
    m(1, 1) += 0.5 * x;
    m(2, 2) += 0.5 * x;
    m(1, 2) -= 0.5 * x;
    m(2, 1) -= 0.5 * x;
    return BipartiteDensity(std::move(m), 2, 2);
}

BipartiteDensity gisin_family(cplx a, cplx b, double x) {
    require_unit_range(x, "gisin_family");
    const double norm2 = std::norm(a) + std::norm(b);
    if (std::abs(norm2 - 1.0) > 1e-12) {
        throw std::invalid_argument("gisin_family: |a|^2 + |b|^2 = " + std::to_string(norm2) +
                                    ", expected 1");
    }
    ComplexMatrix m(4);
    m(0, 0) = (1.0 - x) / 2.0;
    m(3, 3) = (1.0 - x) / 2.0;
    m(1, 1) = x * std::norm(a);
    m(2, 2) = x * std::norm(b);
    m(1, 2) = x * a * std::conj(b);
    m(2, 1) = x * std::conj(a) * b;
    return BipartiteDensity(std::move(m), 2, 2);
}

BipartiteDensity singlet_plus_polarized(double x) {
    require_unit_range(x, "singlet_plus_polarized");
    ComplexMatrix m(4);
    m(0, 0) = 1.0 - x;
    m(1, 1) = 0.5 * x;
    m(2, 2) = 0.5 * x;
    m(1, 2) = -0.5 * x;
    m(2, 1) = -0.5 * x;
    return BipartiteDensity(std::move(m), 2, 2);
}

BipartiteDensity from_ensemble(const ProductEnsemble& e) {
    ComplexMatrix sum(e.dim_a() * e.dim_b());
    for (const ProductTerm& t : e.terms()) {
        ComplexMatrix prod = kron(t.left, t.right);
        prod *= cplx(t.weight, 0.0);
        sum += prod;
    }
    return BipartiteDensity(std::move(sum), e.dim_a(), e.dim_b());
}

} // namespace qsep
