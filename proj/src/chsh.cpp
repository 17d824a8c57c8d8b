#include "qsep/chsh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qsep/random_states.hpp"

namespace qsep {

namespace {

using Vec3 = std::array<double, 3>;

constexpr double kSettingsNormTol = 1e-12;

const ComplexMatrix& pauli(int p) {
    static const ComplexMatrix sx = [] {
        ComplexMatrix m(2);
        m(0, 1) = 1.0;
        m(1, 0) = 1.0;
        return m;
    }();
    static const ComplexMatrix sy = [] {
        ComplexMatrix m(2);
        m(0, 1) = cplx(0.0, -1.0);
        m(1, 0) = cplx(0.0, 1.0);
        return m;
    }();
    static const ComplexMatrix sz = [] {
        ComplexMatrix m(2);
        m(0, 0) = 1.0;
        m(1, 1) = -1.0;
        return m;
    }();
    switch (p) {
        case 0: return sx;
        case 1: return sy;
        default: return sz;
    }
}

void require_two_qubit(const BipartiteDensity& rho, const char* who) {
    if (rho.dim_a() != 2 || rho.dim_b() != 2) {
        throw std::invalid_argument(std::string(who) + ": requires a 2x2 bipartite state");
    }
}

double dot(const Vec3& u, const Vec3& v) {
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
}

double norm(const Vec3& v) {
    return std::sqrt(dot(v, v));
}

Vec3 t_times(const CorrelationMatrix& t, const Vec3& v) {
    Vec3 out{};
    for (int p = 0; p < 3; ++p) {
        out[p] = t.t[p][0] * v[0] + t.t[p][1] * v[1] + t.t[p][2] * v[2];
    }
    return out;
}

Vec3 t_transpose_times(const CorrelationMatrix& t, const Vec3& v) {
    Vec3 out{};
    for (int q = 0; q < 3; ++q) {
        out[q] = t.t[0][q] * v[0] + t.t[1][q] * v[1] + t.t[2][q] * v[2];
    }
    return out;
}

Vec3 add(const Vec3& u, const Vec3& v) {
    return {u[0] + v[0], u[1] + v[1], u[2] + v[2]};
}

Vec3 sub(const Vec3& u, const Vec3& v) {
    return {u[0] - v[0], u[1] - v[1], u[2] - v[2]};
}

// Normalize, keeping the fallback direction when the input is numerically
// zero (a zero image under T leaves the setting unconstrained).
Vec3 unit_or(const Vec3& v, const Vec3& fallback) {
    const double n = norm(v);
    if (n < 1e-14) {
        return fallback;
    }
    return {v[0] / n, v[1] / n, v[2] / n};
}

void require_unit(const Vec3& v, const char* name) {
    if (std::abs(norm(v) - 1.0) > kSettingsNormTol) {
        throw std::invalid_argument(std::string("bell_expectation: setting ") + name +
                                    " is not unit norm");
    }
}

double settings_value(const CorrelationMatrix& t, const ChshSettings& s) {
    const Vec3 tb = t_times(t, s.b);
    const Vec3 tbp = t_times(t, s.b_prime);
    return dot(s.a, tb) + dot(s.a, tbp) + dot(s.a_prime, tb) - dot(s.a_prime, tbp);
}

} // namespace

CorrelationMatrix t_matrix(const BipartiteDensity& rho) {
    require_two_qubit(rho, "t_matrix");
    CorrelationMatrix out;
    for (int p = 0; p < 3; ++p) {
        for (int q = 0; q < 3; ++q) {
            const ComplexMatrix op = kron(pauli(p), pauli(q));
            cplx tr = 0.0;
            for (std::size_t r = 0; r < 4; ++r) {
                for (std::size_t c = 0; c < 4; ++c) {
                    tr += op(r, c) * rho.matrix()(c, r);
                }
            }
            if (std::abs(tr.imag()) > 1e-10) {
                throw std::runtime_error("t_matrix: trace acquired an imaginary part " +
                                         std::to_string(tr.imag()));
            }
            out.t[p][q] = tr.real();
        }
    }
    return out;
}

double chsh_max(const CorrelationMatrix& t) {
    ComplexMatrix gram(3);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            double sum = 0.0;
            for (int k = 0; k < 3; ++k) {
                sum += t.t[k][i] * t.t[k][j];
            }
            gram(i, j) = sum;
        }
    }
    const Spectrum spec = hermitian_eigenvalues(gram);
    const double m = spec.values[1] + spec.values[2];
    return 2.0 * std::sqrt(std::max(m, 0.0));
}

double chsh_max(const BipartiteDensity& rho) {
    require_two_qubit(rho, "chsh_max");
    return chsh_max(t_matrix(rho));
}

double bell_expectation(const BipartiteDensity& rho, const ChshSettings& s) {
    require_two_qubit(rho, "bell_expectation");
    require_unit(s.a, "a");
    require_unit(s.a_prime, "a'");
    require_unit(s.b, "b");
    require_unit(s.b_prime, "b'");
    return settings_value(t_matrix(rho), s);
}

ChshSearchResult brute_force_chsh(const BipartiteDensity& rho, int restarts, double tol,
                                  std::uint64_t seed) {
    require_two_qubit(rho, "brute_force_chsh");
    if (restarts < 1) {
        throw std::invalid_argument("brute_force_chsh: restarts must be >= 1");
    }
    if (!(tol > 0.0)) {
        throw std::invalid_argument("brute_force_chsh: tol must be > 0");
    }
    const CorrelationMatrix t = t_matrix(rho);

    ChshSearchResult best;
    best.value = -1.0;
    constexpr int kMaxIters = 500;

    for (int r = 0; r < restarts; ++r) {
        std::mt19937_64 rng = make_rng(mix_seed(seed, static_cast<std::uint64_t>(r)));
        ChshSettings s;
        s.a = random_unit_vector3(rng);
        s.a_prime = random_unit_vector3(rng);
        s.b = random_unit_vector3(rng);
        s.b_prime = random_unit_vector3(rng);

        double value = settings_value(t, s);
        for (int it = 0; it < kMaxIters; ++it) {
            s.a = unit_or(t_times(t, add(s.b, s.b_prime)), s.a);
            s.a_prime = unit_or(t_times(t, sub(s.b, s.b_prime)), s.a_prime);
            s.b = unit_or(t_transpose_times(t, add(s.a, s.a_prime)), s.b);
            s.b_prime = unit_or(t_transpose_times(t, sub(s.a, s.a_prime)), s.b_prime);
            const double next = settings_value(t, s);
            if (next - value <= tol) {
                value = std::max(value, next);
                break;
            }
            value = next;
        }
        if (value > best.value) {
            best.value = value;
            best.settings = s;
        }
    }
    return best;
}

double gisin_filter_threshold(cplx a, cplx b) {
    const double norm2 = std::norm(a) + std::norm(b);
    if (std::abs(norm2 - 1.0) > 1e-12) {
        throw std::invalid_argument("gisin_filter_threshold: |a|^2 + |b|^2 must be 1");
    }
    const double root2 = std::sqrt(2.0);
    return 1.0 / (1.0 + 2.0 * std::abs(a) * std::abs(b) * (root2 - 1.0));
}

} // namespace qsep
