#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qsep/collective.hpp"

namespace qsep {

enum class VMode {
    mirrored,     // Bob's rows derived from Alice's by the parity sign map
    independent,  // Bob's rows optimized separately
};

enum class StartSet {
    random,
    random_plus_xor,  // the XOR rows always seed one restart
};

struct OptimizerConfig {
    int restarts = 64;
    int max_iters = 2000;
    double step_tol = 1e-10;
    double objective_tol = 1e-9;
    double gradient_step = 1e-6;
    std::uint64_t seed = 0;
    VMode mode = VMode::mirrored;
    StartSet start_set = StartSet::random_plus_xor;
    int threads = 1;  // restarts fan out to this many workers; results are seed-stable
};

// start_id >= 0 labels a random restart; kXorStartId / kWarmStartId mark
// the XOR seed and a warm start carried over from a neighbouring grid
// point.
inline constexpr int kXorStartId = -1;
inline constexpr int kWarmStartId = -2;

struct RestartResult {
    int start_id = 0;
    double value = 0.0;
    int iterations = 0;
};

struct OptimizerReport {
    double best_value = 0.0;
    LocalRows best_rows;
    std::optional<LocalRows> best_rows_v;  // present in independent mode
    std::vector<RestartResult> per_restart;
    double xor_value = 0.0;
    bool used_xor_start = false;
};

// chsh_max of the state left by postselecting n Werner(x) pairs through
// the given rows. Mirrored overload derives Bob's rows by the parity sign
// map. An annihilating postselection yields -infinity.
double objective(double x, std::size_t pairs, const LocalRows& u);
double objective(double x, std::size_t pairs, const LocalRows& u, const LocalRows& v);

// Projected finite-difference ascent over pairs of orthonormal real
// 2^n-vectors, restarted from cfg.restarts random points (plus the XOR
// rows when configured). Central differences in the ambient coordinates,
// backtracking line search, re-orthonormalization after every step.
OptimizerReport optimize(double x, std::size_t pairs, const OptimizerConfig& cfg);

struct ScanPoint {
    double x = 0.0;
    double best_value = 0.0;
    double xor_value = 0.0;
    double success_probability = 0.0;
};

// One optimize call per grid value, warm-starting each point from the
// previous best rows; output ordered by x.
std::vector<ScanPoint> scan_curve(std::size_t pairs, const std::vector<double>& x_grid,
                                  const OptimizerConfig& cfg);

// Smallest grid x whose best value exceeds the XOR value by more than
// margin; empty when the XOR rows stay optimal across the grid.
std::optional<double> detect_transition(const std::vector<ScanPoint>& curve,
                                        double margin = 1e-4);

} // namespace qsep
