#include "qsep/complex_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qsep {

ComplexMatrix::ComplexMatrix(std::size_t dim)
    : dim_(dim), entries_(dim * dim, cplx(0.0, 0.0)) {
    if (dim == 0) {
        throw std::invalid_argument("ComplexMatrix: dim must be >= 1");
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(dim_);
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = 0; c < dim_; ++c) {
            out(c, r) = std::conj((*this)(r, c));
        }
    }
    return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix out(dim_);
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = 0; c < dim_; ++c) {
            out(c, r) = (*this)(r, c);
        }
    }
    return out;
}

ComplexMatrix ComplexMatrix::conjugate() const {
    ComplexMatrix out(dim_);
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        out.entries_[i] = std::conj(entries_[i]);
    }
    return out;
}

cplx ComplexMatrix::trace() const {
    cplx t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
        t += (*this)(i, i);
    }
    return t;
}

double ComplexMatrix::hermiticity_defect() const {
    double worst = 0.0;
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = r; c < dim_; ++c) {
            worst = std::max(worst, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
        }
    }
    return worst;
}

double ComplexMatrix::max_abs() const {
    double worst = 0.0;
    for (const cplx& e : entries_) {
        worst = std::max(worst, std::abs(e));
    }
    return worst;
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix& other) const {
    if (other.dim_ != dim_) {
        throw std::invalid_argument("max_abs_diff: dimension mismatch");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        worst = std::max(worst, std::abs(entries_[i] - other.entries_[i]));
    }
    return worst;
}

double ComplexMatrix::frobenius_diff(const ComplexMatrix& other) const {
    if (other.dim_ != dim_) {
        throw std::invalid_argument("frobenius_diff: dimension mismatch");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        sum += std::norm(entries_[i] - other.entries_[i]);
    }
    return std::sqrt(sum);
}

bool ComplexMatrix::finite() const {
    for (const cplx& e : entries_) {
        if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) {
            return false;
        }
    }
    return true;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
    if (other.dim_ != dim_) {
        throw std::invalid_argument("operator+=: dimension mismatch");
    }
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        entries_[i] += other.entries_[i];
    }
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
    if (other.dim_ != dim_) {
        throw std::invalid_argument("operator-=: dimension mismatch");
    }
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        entries_[i] -= other.entries_[i];
    }
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
    for (cplx& e : entries_) {
        e *= s;
    }
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim_ != b.dim_) {
        throw std::invalid_argument("operator*: dimension mismatch");
    }
    const std::size_t n = a.dim_;
    ComplexMatrix out(n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t k = 0; k < n; ++k) {
            const cplx ark = a(r, k);
            if (ark == cplx(0.0, 0.0)) continue;
            for (std::size_t c = 0; c < n; ++c) {
                out(r, c) += ark * b(k, c);
            }
        }
    }
    return out;
}

namespace {

// One cyclic Jacobi pass machinery over a real symmetric matrix stored
// row-major in `a`. Optionally accumulates the rotations into `vec`
// (columns end up as eigenvectors).
class JacobiReal {
public:
    JacobiReal(std::vector<double> a, std::size_t n, bool want_vectors)
        : a_(std::move(a)), n_(n), vectors_(want_vectors ? n * n : 0, 0.0) {
        for (std::size_t i = 0; i < n_ && want_vectors; ++i) {
            vectors_[i * n_ + i] = 1.0;
        }
    }

    void run(double tol) {
        constexpr int kMaxSweeps = 100;
        const double skip_below = tol * 1e-3;
        for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
            residual_ = off_max();
            if (residual_ < tol) {
                return;
            }
            for (std::size_t p = 0; p + 1 < n_; ++p) {
                for (std::size_t q = p + 1; q < n_; ++q) {
                    rotate(p, q, skip_below);
                }
            }
        }
        residual_ = off_max();
        if (residual_ >= tol) {
            throw std::runtime_error("hermitian_eigenvalues: Jacobi sweep limit reached "
                                     "without meeting tolerance");
        }
    }

    double off_max() const {
        double worst = 0.0;
        for (std::size_t r = 0; r + 1 < n_; ++r) {
            for (std::size_t c = r + 1; c < n_; ++c) {
                worst = std::max(worst, std::abs(a_[r * n_ + c]));
            }
        }
        return worst;
    }

    double residual() const { return residual_; }
    double value(std::size_t i) const { return a_[i * n_ + i]; }
    double vector_entry(std::size_t r, std::size_t c) const { return vectors_[r * n_ + c]; }

private:
    void rotate(std::size_t p, std::size_t q, double skip_below) {
        const double apq = a_[p * n_ + q];
        if (std::abs(apq) <= skip_below) {
            return;
        }
        const double app = a_[p * n_ + p];
        const double aqq = a_[q * n_ + q];
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (std::size_t k = 0; k < n_; ++k) {
            if (k == p || k == q) continue;
            const double akp = a_[k * n_ + p];
            const double akq = a_[k * n_ + q];
            a_[k * n_ + p] = a_[p * n_ + k] = c * akp - s * akq;
            a_[k * n_ + q] = a_[q * n_ + k] = s * akp + c * akq;
        }
        a_[p * n_ + p] = app - t * apq;
        a_[q * n_ + q] = aqq + t * apq;
        a_[p * n_ + q] = a_[q * n_ + p] = 0.0;

        if (!vectors_.empty()) {
            for (std::size_t k = 0; k < n_; ++k) {
                const double vkp = vectors_[k * n_ + p];
                const double vkq = vectors_[k * n_ + q];
                vectors_[k * n_ + p] = c * vkp - s * vkq;
                vectors_[k * n_ + q] = s * vkp + c * vkq;
            }
        }
    }

    std::vector<double> a_;
    std::size_t n_;
    std::vector<double> vectors_;
    double residual_ = 0.0;
};

void check_eigensolver_input(const ComplexMatrix& m, double tol) {
    if (tol <= 0.0) {
        throw std::invalid_argument("hermitian_eigenvalues: tol must be > 0");
    }
    if (!m.finite()) {
        throw std::invalid_argument("hermitian_eigenvalues: matrix has non-finite entries");
    }
    double worst = 0.0;
    std::size_t wr = 0, wc = 0;
    for (std::size_t r = 0; r < m.dim(); ++r) {
        for (std::size_t c = r; c < m.dim(); ++c) {
            const double d = std::abs(m(r, c) - std::conj(m(c, r)));
            if (d > worst) {
                worst = d;
                wr = r;
                wc = c;
            }
        }
    }
    if (worst > kHermitianDefectTol) {
        throw std::invalid_argument(
            "hermitian_eigenvalues: matrix is not Hermitian, worst defect " +
            std::to_string(worst) + " between entries (" + std::to_string(wr) + "," +
            std::to_string(wc) + ") and (" + std::to_string(wc) + "," + std::to_string(wr) + ")");
    }
}

bool exactly_real(const ComplexMatrix& m) {
    for (const cplx& e : m.data()) {
        if (e.imag() != 0.0) return false;
    }
    return true;
}

std::vector<double> real_embedding(const ComplexMatrix& m) {
    // [[A,-B],[B,A]] for M = A + iB; symmetric because A = A^T, B = -B^T.
    const std::size_t n = m.dim();
    std::vector<double> e(4 * n * n, 0.0);
    const std::size_t N = 2 * n;
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            const double re = m(r, c).real();
            const double im = m(r, c).imag();
            e[r * N + c] = re;
            e[(r + n) * N + (c + n)] = re;
            e[r * N + (c + n)] = -im;
            e[(r + n) * N + c] = im;
        }
    }
    return e;
}

std::vector<double> real_part(const ComplexMatrix& m) {
    const std::size_t n = m.dim();
    std::vector<double> a(n * n);
    for (std::size_t i = 0; i < n * n; ++i) {
        a[i] = m.data()[i].real();
    }
    return a;
}

} // namespace

Spectrum hermitian_eigenvalues(const ComplexMatrix& m, double tol) {
    check_eigensolver_input(m, tol);
    const std::size_t n = m.dim();
    if (exactly_real(m)) {
        JacobiReal jac(real_part(m), n, /*want_vectors=*/false);
        jac.run(tol);
        Spectrum s;
        s.values.resize(n);
        for (std::size_t i = 0; i < n; ++i) s.values[i] = jac.value(i);
        std::sort(s.values.begin(), s.values.end());
        s.residual = jac.residual();
        return s;
    }
    JacobiReal jac(real_embedding(m), 2 * n, /*want_vectors=*/false);
    jac.run(tol);
    std::vector<double> doubled(2 * n);
    for (std::size_t i = 0; i < 2 * n; ++i) doubled[i] = jac.value(i);
    std::sort(doubled.begin(), doubled.end());
    Spectrum s;
    s.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        // Each eigenvalue appears twice; adjacent after sorting.
        s.values[i] = 0.5 * (doubled[2 * i] + doubled[2 * i + 1]);
    }
    s.residual = jac.residual();
    return s;
}

Eigensystem hermitian_eigensystem(const ComplexMatrix& m, double tol) {
    check_eigensolver_input(m, tol);
    const std::size_t n = m.dim();
    Eigensystem out{std::vector<double>(n), ComplexMatrix(n), 0.0};

    if (exactly_real(m)) {
        JacobiReal jac(real_part(m), n, /*want_vectors=*/true);
        jac.run(tol);
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t i, std::size_t j) { return jac.value(i) < jac.value(j); });
        for (std::size_t k = 0; k < n; ++k) {
            out.values[k] = jac.value(order[k]);
            for (std::size_t r = 0; r < n; ++r) {
                out.vectors(r, k) = jac.vector_entry(r, order[k]);
            }
        }
        out.residual = jac.residual();
        return out;
    }

    JacobiReal jac(real_embedding(m), 2 * n, /*want_vectors=*/true);
    jac.run(tol);
    std::vector<std::size_t> order(2 * n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return jac.value(i) < jac.value(j); });
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t col = order[2 * k];
        out.values[k] = 0.5 * (jac.value(order[2 * k]) + jac.value(order[2 * k + 1]));
        // Embedding eigenvector (x;y) of [[A,-B],[B,A]] maps to x + iy,
        // already unit norm since |x|^2 + |y|^2 = 1.
        for (std::size_t r = 0; r < n; ++r) {
            out.vectors(r, k) = cplx(jac.vector_entry(r, col), jac.vector_entry(r + n, col));
        }
    }
    out.residual = jac.residual();
    return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t da = a.dim();
    const std::size_t db = b.dim();
    ComplexMatrix out(da * db);
    for (std::size_t ar = 0; ar < da; ++ar) {
        for (std::size_t ac = 0; ac < da; ++ac) {
            const cplx av = a(ar, ac);
            if (av == cplx(0.0, 0.0)) continue;
            for (std::size_t br = 0; br < db; ++br) {
                for (std::size_t bc = 0; bc < db; ++bc) {
                    out(ar * db + br, ac * db + bc) = av * b(br, bc);
                }
            }
        }
    }
    return out;
}

namespace {

std::size_t pow4(std::size_t n) {
    return std::size_t{1} << (2 * n);
}

// pair-major bits (m1 n1 m2 n2 ...) -> party-major bits (m1..mn n1..nn)
std::size_t party_index_of_pair_index(std::size_t idx, std::size_t pairs) {
    std::size_t alice = 0, bob = 0;
    for (std::size_t k = 0; k < pairs; ++k) {
        const std::size_t m = (idx >> (2 * pairs - 1 - 2 * k)) & 1u;
        const std::size_t n = (idx >> (2 * pairs - 2 - 2 * k)) & 1u;
        alice = (alice << 1) | m;
        bob = (bob << 1) | n;
    }
    return (alice << pairs) | bob;
}

void check_regroup_dims(const ComplexMatrix& m, std::size_t pairs) {
    if (pairs == 0 || pairs > 16) {
        throw std::invalid_argument("regroup: pairs must be in [1, 16]");
    }
    if (m.dim() != pow4(pairs)) {
        throw std::invalid_argument("regroup: matrix order is not 4^pairs");
    }
}

ComplexMatrix apply_index_permutation(const ComplexMatrix& m, const std::vector<std::size_t>& perm) {
    ComplexMatrix out(m.dim());
    for (std::size_t r = 0; r < m.dim(); ++r) {
        for (std::size_t c = 0; c < m.dim(); ++c) {
            out(perm[r], perm[c]) = m(r, c);
        }
    }
    return out;
}

} // namespace

ComplexMatrix regroup_pairs_to_parties(const ComplexMatrix& m, std::size_t pairs) {
    check_regroup_dims(m, pairs);
    std::vector<std::size_t> perm(m.dim());
    for (std::size_t i = 0; i < m.dim(); ++i) {
        perm[i] = party_index_of_pair_index(i, pairs);
    }
    return apply_index_permutation(m, perm);
}

ComplexMatrix regroup_parties_to_pairs(const ComplexMatrix& m, std::size_t pairs) {
    check_regroup_dims(m, pairs);
    std::vector<std::size_t> perm(m.dim());
    for (std::size_t i = 0; i < m.dim(); ++i) {
        perm[party_index_of_pair_index(i, pairs)] = i;
    }
    return apply_index_permutation(m, perm);
}

double unitarity_defect(const ComplexMatrix& u) {
    const std::size_t n = u.dim();
    double worst = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            cplx dot = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                dot += u(r, k) * std::conj(u(c, k));
            }
            if (r == c) dot -= 1.0;
            worst = std::max(worst, std::abs(dot));
        }
    }
    return worst;
}

} // namespace qsep
