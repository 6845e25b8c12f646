#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "kaczmarz/matrix.hpp"
#include "kaczmarz/problem.hpp"
#include "kaczmarz/solvers.hpp"

namespace kaczmarz {

/// Spectral quantities of A obtained from a full singular value
/// decomposition. rank counts singular values above
/// sigma_max * max(m, n) * machine-epsilon; lambda_min_pos is the square of
/// the smallest singular value still above that cutoff, i.e. the smallest
/// positive eigenvalue of A^T A.
struct SpectralInfo {
    double lambda_min_pos = 0.0;
    std::size_t rank = 0;
    double sigma_max = 0.0;
};

SpectralInfo spectral_info(const MatrixHandle& A);

/// Minimum-norm solution of a consistent system A x = b (the pseudoinverse
/// applied to b). Throws InconsistentSystemError when the best achievable
/// residual exceeds 1e-8 * ||b||_2.
Vector min_norm_solution(const MatrixHandle& A, std::span<const double> b);

// --- contraction factors for the deterministic greedy method ---------------
//
// The factors depend on the candidate set only through its size and the sum
// of its squared row norms, so each comes in two forms: a core taking those
// summaries (fed from recorded traces) and a convenience overload taking an
// explicit index set.

/// First-step factor 1 - lambda / (|R| * sum_nu(R) * m).
double gk_bound_initial(double lambda_min_pos, std::size_t m, std::size_t set_size,
                        double set_norm_sum);
double gk_bound_initial(const MatrixHandle& A, std::span<const std::size_t> candidate_set);

/// Later-step factor 1 - lambda / (|R| * sum_nu(R) * (m - 1)).
/// Undefined for a single-row system (DomainError).
double gk_bound_step(double lambda_min_pos, std::size_t m, std::size_t set_size,
                     double set_norm_sum);
double gk_bound_step(const MatrixHandle& A, std::span<const std::size_t> candidate_set);

/// Error envelope after k >= 1 steps:
///   (1 - lambda / (alpha * beta * (m-1)))^(k-1) * (first-step factor of R0),
/// where alpha bounds the candidate-set sizes and beta the candidate-set
/// norm sums observed over the run. k = 1 reduces to the first-step factor;
/// for m = 1 only k = 1 is defined.
double gk_bound_envelope(double lambda_min_pos, std::size_t m, std::size_t alpha, double beta,
                         std::size_t k, std::size_t r0_size, double r0_norm_sum);
double gk_bound_envelope(const MatrixHandle& A, std::size_t alpha, double beta, std::size_t k,
                         std::span<const std::size_t> r0);

/// Expected contraction of the greedy randomized method:
///   1 - 1/2 * (1/(F - nu_min) + 1/F) * lambda, with F = ||A||_F^2 and
/// nu_min the smallest squared row norm. Undefined for m = 1.
double grk_expected_factor(const MatrixHandle& A);

/// Relaxed variant: 1 - (theta/(F - nu_min) + (1-theta)/F) * lambda.
/// theta = 1/2 gives grk_expected_factor exactly.
double rgrk_expected_factor(const MatrixHandle& A, double theta);

/// Bound summary for one recorded greedy run (full trace required).
struct BoundReport {
    SpectralInfo spectral;
    std::size_t alpha = 0;  ///< largest candidate-set size in the trace
    double beta = 0.0;      ///< largest candidate-set norm sum in the trace
    double factor_initial = 0.0;
    std::vector<double> factor_step;        ///< per-iteration factors for k >= 1
    std::optional<double> factor_envelope;  ///< nullopt when m = 1 and k > 1
    std::optional<double> grk_factor;       ///< nullopt when m = 1
    std::optional<double> rgrk_factor;      ///< nullopt when m = 1
    double rgrk_theta = 1.0;
};

BoundReport compute_bound_report(const Problem& problem, const SolveReport& report,
                                 const SpectralInfo& spectral, double rgrk_theta = 1.0);

/// One verification check over a recorded run.
struct CheckResult {
    bool applicable = false;
    bool pass = true;
    double worst_gap = 0.0;       ///< largest violation-side margin observed
    std::size_t worst_iter = 0;   ///< iteration where it occurred
};

/// Identity and bound checks over a full recorded trace:
///  - pythagoras: err_{k+1} = err_k - step_k to 1e-10 relative
///  - zeroed_row: the projected row's residual entry is 0 to 1e-12 * ||b||_inf
///  - monotone:   the squared error never increases (1e-12 relative slack
///                for rounding on steps with a negligible exact decrease)
///  - step_factor (gk only): err_{k+1}/err_k within the per-step factor +1e-10
///  - envelope    (gk only): err_final/err_0 within the envelope +1e-10
struct VerificationSummary {
    CheckResult pythagoras;
    CheckResult zeroed_row;
    CheckResult monotone;
    CheckResult step_factor;
    CheckResult envelope;
    bool all_pass() const;
};

/// Verify a recorded run. The report must carry a full trace and the problem
/// a known solution; pass a precomputed SpectralInfo to skip the SVD. The
/// greedy bound checks assume the known solution is reachable from x0
/// (x_star - x0 in the row space), which holds for any full-column-rank
/// system.
VerificationSummary verify_run(const Problem& problem, const SolveReport& report,
                               const SpectralInfo* spectral = nullptr);

}  // namespace kaczmarz
