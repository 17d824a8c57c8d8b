#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace qsep {

using cplx = std::complex<double>;

// Dense square complex matrix, row-major. Values are immutable by
// convention once constructed (all library operations are pure functions
// returning fresh matrices), so sharing across threads is safe.
class ComplexMatrix {
public:
    explicit ComplexMatrix(std::size_t dim);
    static ComplexMatrix identity(std::size_t dim);

    std::size_t dim() const noexcept { return dim_; }

    cplx& operator()(std::size_t r, std::size_t c) { return entries_[r * dim_ + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return entries_[r * dim_ + c]; }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    ComplexMatrix conjugate() const;
    cplx trace() const;

    // max over (r,c) of |a(r,c) - conj(a(c,r))|
    double hermiticity_defect() const;
    double max_abs() const;
    double max_abs_diff(const ComplexMatrix& other) const;
    double frobenius_diff(const ComplexMatrix& other) const;
    bool finite() const;

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(cplx s);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(cplx s, ComplexMatrix m) { return m *= s; }
    friend ComplexMatrix operator*(ComplexMatrix m, cplx s) { return m *= s; }
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

    const std::vector<cplx>& data() const noexcept { return entries_; }

private:
    std::size_t dim_;
    std::vector<cplx> entries_;
};

// Eigenvalues of a Hermitian matrix, sorted ascending. residual is the
// largest off-diagonal magnitude left when the Jacobi iteration stopped.
struct Spectrum {
    std::vector<double> values;
    double residual = 0.0;
};

// Spectrum plus the matrix of column eigenvectors, for residual checks.
struct Eigensystem {
    std::vector<double> values;
    ComplexMatrix vectors;
    double residual = 0.0;
};

// Elementwise Hermiticity required of eigensolver inputs.
inline constexpr double kHermitianDefectTol = 1e-12;
inline constexpr double kDefaultEigTol = 1e-12;

// Cyclic Jacobi eigensolver. Complex Hermitian input is embedded as the
// real symmetric matrix [[A,-B],[B,A]] of twice the order, whose spectrum
// holds each eigenvalue of A+iB twice; exactly-real input skips the
// embedding. Sweeps run until every off-diagonal magnitude is below tol.
// Rejects non-Hermitian input, naming the worst entry pair.
Spectrum hermitian_eigenvalues(const ComplexMatrix& m, double tol = kDefaultEigTol);
Eigensystem hermitian_eigensystem(const ComplexMatrix& m, double tol = kDefaultEigTol);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Index regrouping between the pair-major tensor order (m1 n1 m2 n2 ...)
// and the party-major order (m1 m2 ... ; n1 n2 ...) for n two-level pairs,
// pair 1 most significant. A permutation conjugation: trace and spectrum
// are preserved exactly. dim must be 4^pairs.
ComplexMatrix regroup_pairs_to_parties(const ComplexMatrix& m, std::size_t pairs);
ComplexMatrix regroup_parties_to_pairs(const ComplexMatrix& m, std::size_t pairs);

// max over (r,c) of |(U U^dag - I)(r,c)|
double unitarity_defect(const ComplexMatrix& u);

} // namespace qsep
