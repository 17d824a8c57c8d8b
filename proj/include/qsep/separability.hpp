#pragma once

#include "qsep/complex_matrix.hpp"
#include "qsep/states.hpp"

namespace qsep {

inline constexpr double kDefaultPptTol = 1e-10;
inline constexpr double kUnitaryDefectTol = 1e-10;

struct PptVerdict {
    double min_eigenvalue = 0.0;
    bool is_ppt = false;
    Spectrum spectrum;
    double tol = kDefaultPptTol;
};

// Transpose of the first subsystem only: sigma(m mu, n nu) = rho(n mu, m nu).
// The result is Hermitian with unit trace but need not be positive, so it
// is returned as a plain matrix; the bipartite split (dim_a, dim_b) is
// unchanged. Applying the map twice restores the input exactly.
ComplexMatrix partial_transpose(const ComplexMatrix& mat, std::size_t dim_a, std::size_t dim_b);
ComplexMatrix partial_transpose(const BipartiteDensity& rho);

// Necessary condition for separability: no negative eigenvalue of the
// partial transpose. The verdict at the exact boundary (min eigenvalue
// zero) is PPT. tol bounds how negative an eigenvalue may be before the
// state is declared non-PPT.
PptVerdict ppt_check(const BipartiteDensity& rho, double tol = kDefaultPptTol);

// (U' x U'') rho (U' x U'')^dag with U' of order dim_a, U'' of order dim_b.
// Rejects factors whose unitarity defect exceeds 1e-10.
BipartiteDensity local_unitary_conjugate(const BipartiteDensity& rho, const ComplexMatrix& u_a,
                                         const ComplexMatrix& u_b);

// PPT boundary of gisin_family(a, b, x): 1 / (1 + 2|ab|). The minimum
// eigenvalue of the partial transpose changes sign there.
double gisin_ppt_threshold(cplx a, cplx b);

} // namespace qsep
