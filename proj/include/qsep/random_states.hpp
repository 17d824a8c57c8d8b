#pragma once

#include <array>
#include <cstdint>
#include <random>

#include "qsep/complex_matrix.hpp"
#include "qsep/states.hpp"

namespace qsep {

// Seeded generators used by property tests, the brute-force CHSH oracle
// and the self test suite. All draw from the supplied engine only, so a
// fixed seed fixes every output.

std::mt19937_64 make_rng(std::uint64_t seed);

// Stable mix of a base seed with a stream index (splitmix64 step), for
// deriving independent per-restart generators.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

std::array<double, 3> random_unit_vector3(std::mt19937_64& rng);

// Haar-ish unitary from Gram-Schmidt of a complex Gaussian matrix.
ComplexMatrix random_unitary(std::mt19937_64& rng, std::size_t dim);

// Full-rank density matrix: random simplex spectrum conjugated by a
// random unitary.
ComplexMatrix random_density(std::mt19937_64& rng, std::size_t dim);

BipartiteDensity random_bipartite_density(std::mt19937_64& rng, std::size_t dim_a,
                                          std::size_t dim_b);

// Mixture of up to max_terms random pure product states.
ProductEnsemble random_product_ensemble(std::mt19937_64& rng, std::size_t dim_a,
                                        std::size_t dim_b, std::size_t max_terms = 6);

BipartiteDensity random_separable(std::mt19937_64& rng, std::size_t dim_a, std::size_t dim_b,
                                  std::size_t max_terms = 6);

} // namespace qsep
