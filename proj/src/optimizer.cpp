#include "qsep/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

#include "qsep/chsh.hpp"
#include "qsep/random_states.hpp"

namespace qsep {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Real-arithmetic evaluation core. All Werner matrix elements are real,
// and the search is restricted to real row vectors, so the postselected
// block A P A^T and its correlation matrix stay real throughout.
struct Engine {
    std::size_t pairs = 0;
    std::size_t half = 0;          // 2^pairs
    std::size_t dim = 0;           // 4^pairs
    bool independent = false;
    std::vector<double> power;     // party-major Werner pair power, dim x dim
    std::vector<double> parity;    // (-1)^popcount(b), length half

    std::size_t params() const { return (independent ? 4 : 2) * half; }
};

Engine make_engine(double x, std::size_t pairs, bool independent) {
    if (pairs < 1 || pairs > 5) {
        throw std::invalid_argument("optimize: pairs must lie in [1, 5]");
    }
    if (!(x >= 0.0 && x <= 1.0)) {
        throw std::invalid_argument("optimize: x must lie in [0, 1]");
    }
    Engine eng;
    eng.pairs = pairs;
    eng.half = std::size_t{1} << pairs;
    eng.dim = eng.half * eng.half;
    eng.independent = independent;

    // Werner matrix, real entries.
    double rho[4][4] = {};
    const double mixed = (1.0 - x) / 4.0;
    rho[0][0] = rho[3][3] = mixed;
    rho[1][1] = rho[2][2] = mixed + 0.5 * x;
    rho[1][2] = rho[2][1] = -0.5 * x;

    eng.power.assign(eng.dim * eng.dim, 0.0);
    for (std::size_t a = 0; a < eng.half; ++a) {
        for (std::size_t b = 0; b < eng.half; ++b) {
            const std::size_t row = a * eng.half + b;
            for (std::size_t c = 0; c < eng.half; ++c) {
                for (std::size_t d = 0; d < eng.half; ++d) {
                    double prod = 1.0;
                    for (std::size_t k = 0; k < pairs && prod != 0.0; ++k) {
                        const std::size_t shift = pairs - 1 - k;
                        prod *= rho[((a >> shift) & 1u) * 2 + ((b >> shift) & 1u)]
                                   [((c >> shift) & 1u) * 2 + ((d >> shift) & 1u)];
                    }
                    eng.power[row * eng.dim + c * eng.half + d] = prod;
                }
            }
        }
    }

    eng.parity.resize(eng.half);
    for (std::size_t b = 0; b < eng.half; ++b) {
        eng.parity[b] = (std::popcount(b) % 2 == 0) ? 1.0 : -1.0;
    }
    return eng;
}

struct EvalWork {
    std::vector<double> v0, v1;        // mirrored-mode scratch
    std::vector<double> arows;         // 4 * dim
    std::vector<double> w;             // 4 * dim
};

// Point layout: [u0 | u1] or [u0 | u1 | v0 | v1], each block of length half.
double evaluate(const Engine& eng, const double* point, EvalWork& work, double* trace_out) {
    const std::size_t h = eng.half;
    const std::size_t dim = eng.dim;
    const double* u0 = point;
    const double* u1 = point + h;
    const double* v0;
    const double* v1;
    if (eng.independent) {
        v0 = point + 2 * h;
        v1 = point + 3 * h;
    } else {
        work.v0.resize(h);
        work.v1.resize(h);
        for (std::size_t b = 0; b < h; ++b) {
            work.v0[b] = eng.parity[b] * u0[b];
            work.v1[b] = -eng.parity[b] * u1[b];
        }
        v0 = work.v0.data();
        v1 = work.v1.data();
    }

    work.arows.assign(4 * dim, 0.0);
    double* a0 = work.arows.data();
    double* a1 = a0 + dim;
    double* a2 = a1 + dim;
    double* a3 = a2 + dim;
    for (std::size_t a = 0; a < h; ++a) {
        const double ua0 = u0[a];
        const double ua1 = u1[a];
        double* r0 = a0 + a * h;
        double* r1 = a1 + a * h;
        double* r2 = a2 + a * h;
        double* r3 = a3 + a * h;
        for (std::size_t b = 0; b < h; ++b) {
            r0[b] = ua0 * v0[b];
            r1[b] = ua0 * v1[b];
            r2[b] = ua1 * v0[b];
            r3[b] = ua1 * v1[b];
        }
    }

    work.w.assign(4 * dim, 0.0);
    double* w0 = work.w.data();
    double* w1 = w0 + dim;
    double* w2 = w1 + dim;
    double* w3 = w2 + dim;
    for (std::size_t k = 0; k < dim; ++k) {
        const double c0 = a0[k];
        const double c1 = a1[k];
        const double c2 = a2[k];
        const double c3 = a3[k];
        if (c0 == 0.0 && c1 == 0.0 && c2 == 0.0 && c3 == 0.0) continue;
        const double* prow = &eng.power[k * dim];
        for (std::size_t c = 0; c < dim; ++c) {
            const double p = prow[c];
            w0[c] += c0 * p;
            w1[c] += c1 * p;
            w2[c] += c2 * p;
            w3[c] += c3 * p;
        }
    }

    double block[4][4];
    const double* ws[4] = {w0, w1, w2, w3};
    const double* as[4] = {a0, a1, a2, a3};
    for (int r = 0; r < 4; ++r) {
        for (int s = 0; s < 4; ++s) {
            double sum = 0.0;
            const double* wr = ws[r];
            const double* asv = as[s];
            for (std::size_t c = 0; c < dim; ++c) {
                sum += wr[c] * asv[c];
            }
            block[r][s] = sum;
        }
    }

    const double trace = block[0][0] + block[1][1] + block[2][2] + block[3][3];
    if (trace_out) *trace_out = trace;
    if (!(trace > kAnnihilationFloor)) {
        return kNegInf;
    }

    // Correlation matrix of the real symmetric normalized block; the
    // sigma_y cross rows vanish, leaving a 2x2 xz block plus t_yy.
    const double inv = 1.0 / trace;
    const double t11 = (block[0][3] + block[3][0] + block[1][2] + block[2][1]) * inv;
    const double t22 = (block[1][2] + block[2][1] - block[0][3] - block[3][0]) * inv;
    const double t33 = (block[0][0] - block[1][1] - block[2][2] + block[3][3]) * inv;
    const double t13 = (block[0][2] + block[2][0] - block[1][3] - block[3][1]) * inv;
    const double t31 = (block[0][1] + block[1][0] - block[2][3] - block[3][2]) * inv;

    const double g11 = t11 * t11 + t31 * t31;
    const double g22 = t13 * t13 + t33 * t33;
    const double g12 = t11 * t13 + t31 * t33;
    // Eigenvalues of the symmetric xz block via the cancellation-free
    // radius form; the naive discriminant loses eight digits when the
    // block is nearly degenerate.
    const double radius = std::sqrt(0.25 * (g11 - g22) * (g11 - g22) + g12 * g12);
    const double lo = 0.5 * (g11 + g22) - radius;
    const double yy = t22 * t22;
    const double m = g11 + g22 + yy - std::min(lo, yy);
    return 2.0 * std::sqrt(std::max(m, 0.0));
}

// Normalize u0, orthogonalize u1 against it, normalize u1 (per vector
// pair). Returns false when a block collapses below numerical scale.
bool project_pair(double* u0, double* u1, std::size_t h) {
    double n0 = 0.0;
    for (std::size_t i = 0; i < h; ++i) n0 += u0[i] * u0[i];
    if (!(n0 > 1e-24)) return false;
    const double inv0 = 1.0 / std::sqrt(n0);
    for (std::size_t i = 0; i < h; ++i) u0[i] *= inv0;

    double overlap = 0.0;
    for (std::size_t i = 0; i < h; ++i) overlap += u0[i] * u1[i];
    for (std::size_t i = 0; i < h; ++i) u1[i] -= overlap * u0[i];

    double n1 = 0.0;
    for (std::size_t i = 0; i < h; ++i) n1 += u1[i] * u1[i];
    if (!(n1 > 1e-24)) return false;
    const double inv1 = 1.0 / std::sqrt(n1);
    for (std::size_t i = 0; i < h; ++i) u1[i] *= inv1;
    return true;
}

bool project_point(const Engine& eng, std::vector<double>& point) {
    const std::size_t h = eng.half;
    if (!project_pair(point.data(), point.data() + h, h)) return false;
    if (eng.independent) {
        return project_pair(point.data() + 2 * h, point.data() + 3 * h, h);
    }
    return true;
}

std::vector<double> xor_point(const Engine& eng) {
    std::vector<double> p(eng.params(), 0.0);
    const std::size_t h = eng.half;
    p[0] = 1.0;
    p[2 * h - 1] = 1.0;
    if (eng.independent) {
        // Mirror image of the XOR rows.
        p[2 * h] = 1.0;
        p[4 * h - 1] = (eng.pairs % 2 == 0) ? -1.0 : 1.0;
    }
    return p;
}

std::vector<double> random_point(const Engine& eng, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    while (true) {
        std::vector<double> p(eng.params());
        for (double& v : p) v = gauss(rng);
        if (project_point(eng, p)) {
            return p;
        }
    }
}

struct AscentOutcome {
    double value = kNegInf;
    int iterations = 0;
    std::vector<double> point;
};

AscentOutcome ascend(const Engine& eng, const OptimizerConfig& cfg, std::vector<double> point,
                     EvalWork& work) {
    AscentOutcome out;
    double f = evaluate(eng, point.data(), work, nullptr);
    if (f == kNegInf) {
        out.point = std::move(point);
        return out;  // annihilating start, discarded by the caller
    }

    const std::size_t nparams = eng.params();
    std::vector<double> grad(nparams);
    std::vector<double> cand(nparams);
    const double h = cfg.gradient_step;
    double step_init = 0.5;

    int iter = 0;
    for (; iter < cfg.max_iters; ++iter) {
        // Central differences in the ambient coordinates; the probes are
        // evaluated without re-orthonormalization.
        double gnorm2 = 0.0;
        for (std::size_t i = 0; i < nparams; ++i) {
            const double saved = point[i];
            point[i] = saved + h;
            const double fp = evaluate(eng, point.data(), work, nullptr);
            point[i] = saved - h;
            const double fm = evaluate(eng, point.data(), work, nullptr);
            point[i] = saved;
            const double gi =
                (std::isfinite(fp) && std::isfinite(fm)) ? (fp - fm) / (2.0 * h) : 0.0;
            grad[i] = gi;
            gnorm2 += gi * gi;
        }
        const double gnorm = std::sqrt(gnorm2);
        if (gnorm < 1e-14) {
            break;
        }

        bool accepted = false;
        double fc = f;
        double t = step_init;
        for (int ls = 0; ls < 60; ++ls) {
            for (std::size_t i = 0; i < nparams; ++i) {
                cand[i] = point[i] + t * grad[i];
            }
            if (project_point(eng, cand)) {
                fc = evaluate(eng, cand.data(), work, nullptr);
                if (std::isfinite(fc) && fc > f + 1e-4 * t * gnorm2) {
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
            if (t * gnorm < cfg.step_tol) {
                break;
            }
        }
        if (!accepted) {
            break;
        }

        double move2 = 0.0;
        for (std::size_t i = 0; i < nparams; ++i) {
            const double d = cand[i] - point[i];
            move2 += d * d;
        }
        point.swap(cand);
        const double gain = fc - f;
        f = fc;
        step_init = std::min(2.0 * t, 1.0);
        if (gain < cfg.objective_tol || std::sqrt(move2) < cfg.step_tol) {
            ++iter;
            break;
        }
    }

    out.value = f;
    out.iterations = iter;
    out.point = std::move(point);
    return out;
}

LocalRows rows_from_point(const Engine& eng, const std::vector<double>& point, std::size_t offset) {
    const std::size_t h = eng.half;
    std::vector<cplx> u0(h), u1(h);
    for (std::size_t i = 0; i < h; ++i) {
        u0[i] = point[offset + i];
        u1[i] = point[offset + h + i];
    }
    return LocalRows(eng.pairs, std::move(u0), std::move(u1));
}

struct StartSpec {
    int id = 0;
    std::vector<double> point;
};

OptimizerReport run_optimize(double x, std::size_t pairs, const OptimizerConfig& cfg,
                             const std::vector<double>* warm_point) {
    if (cfg.restarts < 1) {
        throw std::invalid_argument("optimize: restarts must be >= 1");
    }
    if (!(cfg.step_tol > 0.0) || !(cfg.objective_tol > 0.0) || !(cfg.gradient_step > 0.0)) {
        throw std::invalid_argument("optimize: tolerances must be > 0");
    }
    const Engine eng = make_engine(x, pairs, cfg.mode == VMode::independent);

    std::vector<StartSpec> starts;
    if (cfg.start_set == StartSet::random_plus_xor) {
        starts.push_back(StartSpec{kXorStartId, xor_point(eng)});
    }
    if (warm_point && warm_point->size() == eng.params()) {
        starts.push_back(StartSpec{kWarmStartId, *warm_point});
    }
    for (int r = 0; r < cfg.restarts; ++r) {
        std::mt19937_64 rng = make_rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(r)));
        starts.push_back(StartSpec{r, random_point(eng, rng)});
    }

    std::vector<AscentOutcome> outcomes(starts.size());
    const int workers = std::max(1, std::min<int>(cfg.threads, static_cast<int>(starts.size())));
    if (workers == 1) {
        EvalWork work;
        for (std::size_t i = 0; i < starts.size(); ++i) {
            outcomes[i] = ascend(eng, cfg, starts[i].point, work);
        }
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            EvalWork work;
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= starts.size()) break;
                outcomes[i] = ascend(eng, cfg, starts[i].point, work);
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    EvalWork work;
    const std::vector<double> xor_start = xor_point(eng);
    const double xor_value = evaluate(eng, xor_start.data(), work, nullptr);

    std::size_t best = 0;
    for (std::size_t i = 1; i < outcomes.size(); ++i) {
        if (outcomes[i].value > outcomes[best].value) best = i;
    }
    if (outcomes[best].value == kNegInf) {
        // Every start annihilated; fall back to the XOR rows.
        outcomes[best].point = xor_start;
        outcomes[best].value = xor_value;
    }

    OptimizerReport report{outcomes[best].value,
                           rows_from_point(eng, outcomes[best].point, 0),
                           std::nullopt,
                           {},
                           xor_value,
                           cfg.start_set == StartSet::random_plus_xor};
    if (eng.independent) {
        report.best_rows_v = rows_from_point(eng, outcomes[best].point, 2 * eng.half);
    }
    report.per_restart.reserve(starts.size());
    for (std::size_t i = 0; i < starts.size(); ++i) {
        report.per_restart.push_back(
            RestartResult{starts[i].id, outcomes[i].value, outcomes[i].iterations});
    }
    return report;
}

std::vector<double> point_from_report(const Engine& eng, const OptimizerReport& report) {
    std::vector<double> p(eng.params());
    for (std::size_t i = 0; i < eng.half; ++i) {
        p[i] = report.best_rows.u0()[i].real();
        p[eng.half + i] = report.best_rows.u1()[i].real();
    }
    if (eng.independent && report.best_rows_v) {
        for (std::size_t i = 0; i < eng.half; ++i) {
            p[2 * eng.half + i] = report.best_rows_v->u0()[i].real();
            p[3 * eng.half + i] = report.best_rows_v->u1()[i].real();
        }
    }
    return p;
}

} // namespace

double objective(double x, std::size_t pairs, const LocalRows& u) {
    return objective(x, pairs, u, mirror_rows(u));
}

double objective(double x, std::size_t pairs, const LocalRows& u, const LocalRows& v) {
    try {
        return chsh_max(postselect(werner(x), pairs, u, v).rho_new);
    } catch (const PostselectionAnnihilated&) {
        return kNegInf;
    }
}

OptimizerReport optimize(double x, std::size_t pairs, const OptimizerConfig& cfg) {
    return run_optimize(x, pairs, cfg, nullptr);
}

std::vector<ScanPoint> scan_curve(std::size_t pairs, const std::vector<double>& x_grid,
                                  const OptimizerConfig& cfg) {
    std::vector<double> grid = x_grid;
    std::sort(grid.begin(), grid.end());
    for (double x : grid) {
        if (!(x >= 0.0 && x <= 1.0)) {
            throw std::invalid_argument("scan_curve: grid values must lie in [0, 1]");
        }
    }
    std::vector<ScanPoint> curve;
    curve.reserve(grid.size());
    std::optional<std::vector<double>> warm;
    for (double x : grid) {
        const Engine eng = make_engine(x, pairs, cfg.mode == VMode::independent);
        const OptimizerReport report = run_optimize(x, pairs, cfg, warm ? &*warm : nullptr);
        warm = point_from_report(eng, report);

        EvalWork work;
        double trace = 0.0;
        evaluate(eng, warm->data(), work, &trace);
        curve.push_back(ScanPoint{x, report.best_value, report.xor_value, trace});
    }
    return curve;
}

std::optional<double> detect_transition(const std::vector<ScanPoint>& curve, double margin) {
    for (const ScanPoint& p : curve) {
        if (p.best_value - p.xor_value > margin) {
            return p.x;
        }
    }
    return std::nullopt;
}

} // namespace qsep
