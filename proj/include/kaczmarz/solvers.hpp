#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kaczmarz/kernels.hpp"
#include "kaczmarz/matrix.hpp"
#include "kaczmarz/problem.hpp"
#include "kaczmarz/rng.hpp"

namespace kaczmarz {

/// Row-selection rules. All four share the same projection step and differ
/// only in how the working row is chosen from the current residual:
///  - rk:   sample row i with probability ||A^(i)||^2 / ||A||_F^2
///  - grk:  greedy randomized - threshold the residual ratios, then sample
///          the surviving rows with probability proportional to r_i^2
///  - rgrk: grk with a relaxation weight theta on the threshold; theta = 1/2
///          reproduces grk exactly, theta defaults to 1
///  - gk:   deterministic greedy - among the rows with the largest |r_i|,
///          take the one with the largest r_i^2 / ||A^(i)||^2 (smallest
///          index on ties)
enum class Method { rk, grk, rgrk, gk };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

/// Selection rule plus the knobs that only some methods read. theta is only
/// consulted by rgrk; the seed only by the randomized methods.
struct Strategy {
    Method method = Method::gk;
    double theta = 1.0;
    std::uint64_t seed = 0;
};

/// Stopping metric: res is the squared relative solution error
/// ||x_k - x_star||^2 / ||x_star||^2 (requires a known solution);
/// relative_residual is ||b - A x_k||_2 / ||b||_2.
enum class StopMode { res, relative_residual };

enum class TraceLevel { none, indices, full };

struct SolveConfig {
    std::size_t max_iters = 200000;
    double res_tol = 1e-6;
    StopMode stop_mode = StopMode::res;
    TraceLevel trace = TraceLevel::full;
    kernels::Exec exec = kernels::Exec::serial;
};

/// Mutable state threaded through one solve: current iterate, current
/// residual and the iteration counter.
struct SolveState {
    Vector x;
    Vector r;
    std::size_t k = 0;
};

/// One iteration of the trace. At TraceLevel::indices only k, chosen and
/// set_size are meaningful; the double fields are NaN. err_sq is NaN when
/// the problem has no known solution.
struct IterationRecord {
    std::size_t k = 0;
    std::size_t chosen = 0;
    std::size_t set_size = 0;
    double set_norm_sum = 0.0;  ///< sum of ||A^(i)||^2 over the candidate set
    double err_sq = 0.0;        ///< ||x_k - x_star||^2 before the step
    double step_sq = 0.0;       ///< ||x_{k+1} - x_k||^2 = r_i^2 / ||A^(i)||^2
    double res_norm_sq = 0.0;   ///< ||b - A x_k||^2 before the step
    double zeroed_abs = 0.0;    ///< |b_i - A^(i) x_{k+1}| for the chosen row
};

struct SolveReport {
    Method method = Method::gk;
    std::size_t iterations = 0;  ///< projection steps actually applied
    bool converged = false;
    double final_res = 0.0;     ///< stop-mode metric at exit
    double final_err_sq = 0.0;  ///< ||x_final - x_star||^2 (NaN without x_star)
    Vector solution;
    TraceLevel trace_level = TraceLevel::none;
    std::vector<IterationRecord> trace;
};

// --- selection primitives -------------------------------------------------
//
// These are the public, composable forms used by tests and the analysis
// layer. The solve loop runs algebraically identical fused versions of the
// same rules (see solvers.cpp) that avoid redundant passes over the residual.

/// Greedy randomized threshold
///   eps = 1/2 * ( max_i(r_i^2/||A^(i)||^2) / ||r||^2 + 1/||A||_F^2 ).
/// Requires a nonzero residual; calling it with r = 0 is a contract
/// violation (every stopping rule fires before that can happen).
double grk_threshold(std::span<const double> r, const MatrixHandle& A);

/// Relaxed threshold
///   eps = theta * max_i(r_i^2/||A^(i)||^2) / ||r||^2 + (1-theta)/||A||_F^2,
/// theta in [0,1]; theta = 1/2 gives grk_threshold exactly.
double rgrk_threshold(std::span<const double> r, const MatrixHandle& A, double theta);

/// Rows passing the greedy test r_i^2 >= eps * ||r||^2 * ||A^(i)||^2,
/// in ascending index order.
std::vector<std::size_t> grk_index_set(std::span<const double> r, const MatrixHandle& A,
                                       double eps);

/// Draw one index from the set with probability proportional to r_i^2,
/// via an ascending-index inverse-CDF scan fed by one uniform deviate.
std::size_t weighted_sample(std::span<const double> r, std::span<const std::size_t> index_set,
                            Rng& rng);

/// Rows attaining max_i |r_i| under exact floating-point comparison,
/// ascending. Nonempty whenever r is nonzero.
std::vector<std::size_t> gk_candidate_set(std::span<const double> r);

/// The greedy pick: the candidate with the largest r_i^2 / ||A^(i)||^2,
/// smallest index on ties. Touches row norms only for rows in the set.
std::size_t gk_pick(std::span<const double> r, const MatrixHandle& A,
                    std::span<const std::size_t> candidates);

/// Sample a row with probability ||A^(i)||^2 / ||A||_F^2.
std::size_t rk_pick(const MatrixHandle& A, Rng& rng);

/// Orthogonal projection of x onto the hyperplane of row i:
///   x + (b_i - A^(i) x) / ||A^(i)||^2 * (A^(i))^T.
Vector kaczmarz_step(std::span<const double> x, const MatrixHandle& A, std::span<const double> b,
                     std::size_t i);

/// Run one method until the stopping rule fires or max_iters steps are done.
/// The residual is recomputed from scratch as b - A x every iteration for
/// every method, and row norms are cached at most once per solve: grk/rgrk
/// and rk fill the whole cache up front, gk touches only the rows its
/// candidate sets visit. An exactly zero residual exits as converged.
SolveReport solve(const Problem& problem, const Strategy& strategy, const SolveConfig& config);

}  // namespace kaczmarz
