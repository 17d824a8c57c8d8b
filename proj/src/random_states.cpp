#include "qsep/random_states.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace qsep {

std::mt19937_64 make_rng(std::uint64_t seed) {
    return std::mt19937_64(seed);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::array<double, 3> random_unit_vector3(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    while (true) {
        std::array<double, 3> v{gauss(rng), gauss(rng), gauss(rng)};
        const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
        if (n > 1e-6) {
            return {v[0] / n, v[1] / n, v[2] / n};
        }
    }
}

namespace {

std::vector<cplx> random_unit_state(std::mt19937_64& rng, std::size_t dim) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    while (true) {
        std::vector<cplx> psi(dim);
        double norm2 = 0.0;
        for (cplx& c : psi) {
            c = cplx(gauss(rng), gauss(rng));
            norm2 += std::norm(c);
        }
        if (norm2 > 1e-12) {
            const double inv = 1.0 / std::sqrt(norm2);
            for (cplx& c : psi) c *= inv;
            return psi;
        }
    }
}

ComplexMatrix outer(const std::vector<cplx>& psi) {
    ComplexMatrix m(psi.size());
    for (std::size_t r = 0; r < psi.size(); ++r) {
        for (std::size_t c = 0; c < psi.size(); ++c) {
            m(r, c) = psi[r] * std::conj(psi[c]);
        }
    }
    return m;
}

} // namespace

ComplexMatrix random_unitary(std::mt19937_64& rng, std::size_t dim) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    // Columns of a Gaussian matrix, Gram-Schmidt orthonormalized.
    std::vector<std::vector<cplx>> cols(dim);
    for (std::size_t c = 0; c < dim; ++c) {
        while (true) {
            std::vector<cplx> v(dim);
            for (cplx& e : v) e = cplx(gauss(rng), gauss(rng));
            for (std::size_t prev = 0; prev < c; ++prev) {
                cplx overlap = 0.0;
                for (std::size_t r = 0; r < dim; ++r) overlap += std::conj(cols[prev][r]) * v[r];
                for (std::size_t r = 0; r < dim; ++r) v[r] -= overlap * cols[prev][r];
            }
            double norm2 = 0.0;
            for (const cplx& e : v) norm2 += std::norm(e);
            if (norm2 > 1e-8) {
                const double inv = 1.0 / std::sqrt(norm2);
                for (cplx& e : v) e *= inv;
                cols[c] = std::move(v);
                break;
            }
        }
    }
    ComplexMatrix u(dim);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            u(r, c) = cols[c][r];
        }
    }
    return u;
}

ComplexMatrix random_density(std::mt19937_64& rng, std::size_t dim) {
    std::uniform_real_distribution<double> uni(0.05, 1.0);
    std::vector<double> weights(dim);
    double sum = 0.0;
    for (double& w : weights) {
        w = uni(rng);
        sum += w;
    }
    const ComplexMatrix u = random_unitary(rng, dim);
    ComplexMatrix d(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        d(i, i) = weights[i] / sum;
    }
    return u * d * u.adjoint();
}

BipartiteDensity random_bipartite_density(std::mt19937_64& rng, std::size_t dim_a,
                                          std::size_t dim_b) {
    ComplexMatrix m = random_density(rng, dim_a * dim_b);
    // Symmetrize away last-bit rounding so construction never trips the
    // Hermiticity floor.
    for (std::size_t r = 0; r < m.dim(); ++r) {
        for (std::size_t c = r; c < m.dim(); ++c) {
            const cplx avg = 0.5 * (m(r, c) + std::conj(m(c, r)));
            m(r, c) = avg;
            m(c, r) = std::conj(avg);
        }
        m(r, r) = cplx(m(r, r).real(), 0.0);
    }
    const cplx tr = m.trace();
    m *= cplx(1.0 / tr.real(), 0.0);
    return BipartiteDensity(std::move(m), dim_a, dim_b);
}

ProductEnsemble random_product_ensemble(std::mt19937_64& rng, std::size_t dim_a,
                                        std::size_t dim_b, std::size_t max_terms) {
    if (max_terms == 0) {
        throw std::invalid_argument("random_product_ensemble: max_terms must be >= 1");
    }
    std::uniform_int_distribution<std::size_t> count(1, max_terms);
    std::uniform_real_distribution<double> uni(0.05, 1.0);
    const std::size_t k = count(rng);
    std::vector<double> weights(k);
    double sum = 0.0;
    for (double& w : weights) {
        w = uni(rng);
        sum += w;
    }
    std::vector<ProductTerm> terms;
    terms.reserve(k);
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        // Make the weights sum to 1 exactly enough for the ensemble check.
        double w = weights[i] / sum;
        if (i + 1 == k) w = 1.0 - acc;
        acc += w;
        terms.push_back(ProductTerm{w, outer(random_unit_state(rng, dim_a)),
                                    outer(random_unit_state(rng, dim_b))});
    }
    return ProductEnsemble(std::move(terms));
}

BipartiteDensity random_separable(std::mt19937_64& rng, std::size_t dim_a, std::size_t dim_b,
                                  std::size_t max_terms) {
    return from_ensemble(random_product_ensemble(rng, dim_a, dim_b, max_terms));
}

} // namespace qsep
