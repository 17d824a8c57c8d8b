#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>

namespace qsep {

struct SelftestOptions {
    std::set<int> only;            // empty = run everything
    std::uint64_t seed = 20260808; // drives every randomized check
    int threads = 1;
};

// Runs the acceptance checks, printing one PASS/FAIL line per criterion.
// Returns the number of failures.
int run_selftest(const SelftestOptions& options, std::ostream& out);

} // namespace qsep
