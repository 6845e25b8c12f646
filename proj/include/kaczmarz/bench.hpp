#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kaczmarz/problem.hpp"
#include "kaczmarz/solvers.hpp"

namespace kaczmarz {

/// One (matrix, method) aggregate of a benchmark run.
struct BenchRow {
    std::string label;
    std::size_t m = 0;
    std::size_t n = 0;
    double density = 0.0;
    Method method = Method::gk;
    std::optional<double> theta;  ///< set on rgrk rows only
    double mean_iterations = 0.0;
    double mean_cpu_seconds = 0.0;
    std::size_t repeats = 0;
    bool all_converged = true;
    /// Ratios of the randomized comparators to the deterministic greedy
    /// method on the same matrix: _1 is grk/gk, _2 is rgrk/gk. Present on
    /// every row of a matrix when the pair in question ran; computed from
    /// the in-memory means, so each ratio equals the quotient of the means
    /// exactly.
    std::optional<double> it_speedup_1;
    std::optional<double> it_speedup_2;
    std::optional<double> cpu_speedup_1;
    std::optional<double> cpu_speedup_2;
};

struct BenchTable {
    std::vector<BenchRow> rows;
};

struct BenchOptions {
    std::vector<Method> methods{Method::grk, Method::rgrk, Method::gk};
    std::size_t repeats = 50;
    double theta = 1.0;           ///< rgrk relaxation weight
    std::uint64_t seed_base = 0;  ///< repeat j uses seed seed_base + j
    SolveConfig config{};         ///< trace is forced to none while timing
};

/// Run each requested method on each problem `repeats` times and aggregate
/// mean iteration counts and mean wall-clock solve times. Timing covers the
/// solve call only - no I/O, no spectral work, no trace recording. Repeats
/// are executed sequentially but interleaved round-robin across methods so
/// slow machine drift cancels out of the timing ratios. A problem that
/// fails (e.g. a solver rejects its configuration) is reported on stderr
/// and skipped; the remaining problems still produce rows.
BenchTable run_bench(std::span<const Problem> problems, const BenchOptions& options);

}  // namespace kaczmarz
