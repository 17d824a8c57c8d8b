#pragma once

#include <array>
#include <cstdint>

#include "qsep/states.hpp"

namespace qsep {

// The 3x3 matrix of Pauli-Pauli expectations t[p][q] = Tr[(sigma_p x
// sigma_q) rho], with p, q running over (x, y, z). Every entry lies in
// [-1, 1] for a physical state.
struct CorrelationMatrix {
    std::array<std::array<double, 3>, 3> t{};
};

// Measurement directions for the four dichotomic spin observables
// A = a.sigma, A' = a'.sigma (Alice) and B, B' (Bob); each unit norm.
struct ChshSettings {
    std::array<double, 3> a{};
    std::array<double, 3> a_prime{};
    std::array<double, 3> b{};
    std::array<double, 3> b_prime{};
};

struct ChshSearchResult {
    double value = 0.0;
    ChshSettings settings;
};

CorrelationMatrix t_matrix(const BipartiteDensity& rho);

// Exact maximum of the Bell operator expectation over all spin settings:
// 2 sqrt(M), M the sum of the two largest eigenvalues of T^T T.
double chsh_max(const CorrelationMatrix& t);
double chsh_max(const BipartiteDensity& rho);

// a.Tb + a.Tb' + a'.Tb - a'.Tb' for the given settings.
double bell_expectation(const BipartiteDensity& rho, const ChshSettings& s);

// Independent search for the same maximum: alternating closed-form
// updates (optimal Alice directions along T(b+b') and T(b-b'), then the
// symmetric Bob update) iterated to a fixed point from seeded random
// starts. Serves as the oracle validating chsh_max.
ChshSearchResult brute_force_chsh(const BipartiteDensity& rho, int restarts = 32,
                                  double tol = 1e-12, std::uint64_t seed = 1);

// Bell-violation boundary of gisin_family under local filtering,
// 1 / (1 + 2|ab| (sqrt(2) - 1)). Reported as a reference constant; no
// relation to chsh_max of the unfiltered family is asserted.
double gisin_filter_threshold(cplx a, cplx b);

} // namespace qsep
