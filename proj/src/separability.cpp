#include "qsep/separability.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qsep {

ComplexMatrix partial_transpose(const ComplexMatrix& mat, std::size_t dim_a, std::size_t dim_b) {
    if (dim_a < 1 || dim_b < 1 || mat.dim() != dim_a * dim_b) {
        throw std::invalid_argument("partial_transpose: matrix order does not equal dim_a * dim_b");
    }
    ComplexMatrix out(mat.dim());
    for (std::size_t m = 0; m < dim_a; ++m) {
        for (std::size_t n = 0; n < dim_a; ++n) {
            for (std::size_t mu = 0; mu < dim_b; ++mu) {
                for (std::size_t nu = 0; nu < dim_b; ++nu) {
                    out(m * dim_b + mu, n * dim_b + nu) = mat(n * dim_b + mu, m * dim_b + nu);
                }
            }
        }
    }
    return out;
}

ComplexMatrix partial_transpose(const BipartiteDensity& rho) {
    return partial_transpose(rho.matrix(), rho.dim_a(), rho.dim_b());
}

PptVerdict ppt_check(const BipartiteDensity& rho, double tol) {
    if (tol < 0.0) {
        throw std::invalid_argument("ppt_check: tol must be >= 0");
    }
    PptVerdict verdict;
    verdict.tol = tol;
    verdict.spectrum = hermitian_eigenvalues(partial_transpose(rho));
    verdict.min_eigenvalue = verdict.spectrum.values.front();
    verdict.is_ppt = verdict.min_eigenvalue >= -tol;
    return verdict;
}

BipartiteDensity local_unitary_conjugate(const BipartiteDensity& rho, const ComplexMatrix& u_a,
                                         const ComplexMatrix& u_b) {
    if (u_a.dim() != rho.dim_a() || u_b.dim() != rho.dim_b()) {
        throw std::invalid_argument("local_unitary_conjugate: factor orders must match (dim_a, dim_b)");
    }
    for (const ComplexMatrix* u : {&u_a, &u_b}) {
        const double defect = unitarity_defect(*u);
        if (defect > kUnitaryDefectTol) {
            throw std::invalid_argument("local_unitary_conjugate: factor is not unitary, defect " +
                                        std::to_string(defect));
        }
    }
    const ComplexMatrix u = kron(u_a, u_b);
    ComplexMatrix conj = u * rho.matrix() * u.adjoint();
    // Conjugation preserves Hermiticity exactly in exact arithmetic; clean
    // the rounding so the density invariants hold on reconstruction.
    for (std::size_t r = 0; r < conj.dim(); ++r) {
        for (std::size_t c = r; c < conj.dim(); ++c) {
            const cplx avg = 0.5 * (conj(r, c) + std::conj(conj(c, r)));
            conj(r, c) = avg;
            conj(c, r) = std::conj(avg);
        }
        conj(r, r) = cplx(conj(r, r).real(), 0.0);
    }
    const double tr = conj.trace().real();
    conj *= cplx(1.0 / tr, 0.0);
    return BipartiteDensity(std::move(conj), rho.dim_a(), rho.dim_b());
}

double gisin_ppt_threshold(cplx a, cplx b) {
    const double norm2 = std::norm(a) + std::norm(b);
    if (std::abs(norm2 - 1.0) > 1e-12) {
        throw std::invalid_argument("gisin_ppt_threshold: |a|^2 + |b|^2 must be 1");
    }
    return 1.0 / (1.0 + 2.0 * std::abs(a) * std::abs(b));
}

} // namespace qsep
