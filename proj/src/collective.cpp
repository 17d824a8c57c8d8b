#include "qsep/collective.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace qsep {

namespace {

void require_pair_count(std::size_t pairs, const char* who) {
    if (pairs < 1 || pairs > kMaxPairs) {
        throw std::invalid_argument(std::string(who) + ": pairs must lie in [1, " +
                                    std::to_string(kMaxPairs) + "]");
    }
}

double norm2(const std::vector<cplx>& v) {
    double s = 0.0;
    for (const cplx& e : v) s += std::norm(e);
    return s;
}

cplx inner(const std::vector<cplx>& u, const std::vector<cplx>& v) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += std::conj(u[i]) * v[i];
    return s;
}

} // namespace

LocalRows::LocalRows(std::size_t pairs, std::vector<cplx> u0, std::vector<cplx> u1)
    : pairs_(pairs), u0_(std::move(u0)), u1_(std::move(u1)) {
    require_pair_count(pairs_, "LocalRows");
    const std::size_t len = std::size_t{1} << pairs_;
    if (u0_.size() != len || u1_.size() != len) {
        throw std::invalid_argument("LocalRows: vectors must have length 2^pairs");
    }
    if (std::abs(norm2(u0_) - 1.0) > kRowsOrthoTol ||
        std::abs(norm2(u1_) - 1.0) > kRowsOrthoTol) {
        throw std::invalid_argument("LocalRows: rows must be unit norm");
    }
    if (std::abs(inner(u0_, u1_)) > kRowsOrthoTol) {
        throw std::invalid_argument("LocalRows: rows must be mutually orthogonal");
    }
}

LocalRows xor_rows(std::size_t pairs) {
    require_pair_count(pairs, "xor_rows");
    const std::size_t len = std::size_t{1} << pairs;
    std::vector<cplx> u0(len, 0.0), u1(len, 0.0);
    u0.front() = 1.0;
    u1.back() = 1.0;
    return LocalRows(pairs, std::move(u0), std::move(u1));
}

namespace {

LocalRows parity_signed(const LocalRows& rows) {
    const std::size_t len = std::size_t{1} << rows.pairs();
    std::vector<cplx> v0(len), v1(len);
    for (std::size_t b = 0; b < len; ++b) {
        const int pop = std::popcount(b);
        const double s = (pop % 2 == 0) ? 1.0 : -1.0;
        v0[b] = s * rows.u0()[b];
        v1[b] = -s * rows.u1()[b];
    }
    return LocalRows(rows.pairs(), std::move(v0), std::move(v1));
}

} // namespace

LocalRows mirror_rows(const LocalRows& u) {
    return parity_signed(u);
}

LocalRows basis_flip_rows(const LocalRows& v) {
    return parity_signed(v);
}

ComplexMatrix pair_power(const BipartiteDensity& rho, std::size_t pairs) {
    require_pair_count(pairs, "pair_power");
    if (rho.dim_a() != 2 || rho.dim_b() != 2) {
        throw std::invalid_argument("pair_power: requires a 2x2 bipartite state");
    }
    const std::size_t half = std::size_t{1} << pairs;   // 2^n single-party indices
    const std::size_t dim = half * half;                // 4^n
    ComplexMatrix out(dim);
    for (std::size_t a = 0; a < half; ++a) {
        for (std::size_t b = 0; b < half; ++b) {
            const std::size_t row = a * half + b;
            for (std::size_t c = 0; c < half; ++c) {
                for (std::size_t d = 0; d < half; ++d) {
                    cplx prod = 1.0;
                    for (std::size_t k = 0; k < pairs; ++k) {
                        const std::size_t shift = pairs - 1 - k;   // pair 1 most significant
                        const std::size_t m = (a >> shift) & 1u;
                        const std::size_t n = (b >> shift) & 1u;
                        const std::size_t s = (c >> shift) & 1u;
                        const std::size_t t = (d >> shift) & 1u;
                        prod *= rho.matrix()(m * 2 + n, s * 2 + t);
                        if (prod == cplx(0.0, 0.0)) break;
                    }
                    out(row, c * half + d) = prod;
                }
            }
        }
    }
    return out;
}

PostselectionOutcome postselect(const BipartiteDensity& rho, std::size_t pairs,
                                const LocalRows& u, const LocalRows& v) {
    require_pair_count(pairs, "postselect");
    if (u.pairs() != pairs || v.pairs() != pairs) {
        throw std::invalid_argument("postselect: row vectors sized for a different pair count");
    }
    const std::size_t half = std::size_t{1} << pairs;
    const std::size_t dim = half * half;
    const ComplexMatrix power = pair_power(rho, pairs);

    // Rows of the retained operator A over composite party indices.
    std::vector<std::vector<cplx>> a_rows(4, std::vector<cplx>(dim));
    for (std::size_t mu = 0; mu < 2; ++mu) {
        const std::vector<cplx>& urow = (mu == 0) ? u.u0() : u.u1();
        for (std::size_t nu = 0; nu < 2; ++nu) {
            const std::vector<cplx>& vrow = (nu == 0) ? v.u0() : v.u1();
            std::vector<cplx>& arow = a_rows[mu * 2 + nu];
            for (std::size_t a = 0; a < half; ++a) {
                const cplx ua = urow[a];
                for (std::size_t b = 0; b < half; ++b) {
                    arow[a * half + b] = ua * vrow[b];
                }
            }
        }
    }

    // W = A * power, then B = W * A^dag.
    std::vector<std::vector<cplx>> w(4, std::vector<cplx>(dim, cplx(0.0, 0.0)));
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t k = 0; k < dim; ++k) {
            const cplx ark = a_rows[r][k];
            if (ark == cplx(0.0, 0.0)) continue;
            const cplx* prow = &power.data()[k * dim];
            std::vector<cplx>& wr = w[r];
            for (std::size_t c = 0; c < dim; ++c) {
                wr[c] += ark * prow[c];
            }
        }
    }
    ComplexMatrix block(4);
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t s = 0; s < 4; ++s) {
            cplx sum = 0.0;
            for (std::size_t c = 0; c < dim; ++c) {
                sum += w[r][c] * std::conj(a_rows[s][c]);
            }
            block(r, s) = sum;
        }
    }

    const double retained_trace = block.trace().real();
    if (retained_trace < kAnnihilationFloor) {
        throw PostselectionAnnihilated();
    }
    block *= cplx(1.0 / retained_trace, 0.0);
    // Contraction rounding can leave the block a hair off Hermitian.
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = r; c < 4; ++c) {
            const cplx avg = 0.5 * (block(r, c) + std::conj(block(c, r)));
            block(r, c) = avg;
            block(c, r) = std::conj(avg);
        }
        block(r, r) = cplx(block(r, r).real(), 0.0);
    }
    return PostselectionOutcome{BipartiteDensity(std::move(block), 2, 2), retained_trace};
}

} // namespace qsep
