#include "kaczmarz/analysis.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <limits>

#include "kaczmarz/kernels.hpp"

namespace kaczmarz {

namespace {

Eigen::MatrixXd to_eigen(const MatrixHandle& A) {
    const auto m = static_cast<Eigen::Index>(A.rows());
    const auto n = static_cast<Eigen::Index>(A.cols());
    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(m, n);
    if (A.storage() == Storage::dense) {
        for (Eigen::Index i = 0; i < m; ++i) {
            auto row = A.dense_row(static_cast<std::size_t>(i));
            for (Eigen::Index j = 0; j < n; ++j) e(i, j) = row[static_cast<std::size_t>(j)];
        }
    } else {
        for (Eigen::Index i = 0; i < m; ++i) {
            auto cols = A.csr_row_cols(static_cast<std::size_t>(i));
            auto vals = A.csr_row_vals(static_cast<std::size_t>(i));
            for (std::size_t k = 0; k < vals.size(); ++k)
                e(i, static_cast<Eigen::Index>(cols[k])) += vals[k];
        }
    }
    return e;
}

std::size_t svd_rank(const Eigen::VectorXd& sv, std::size_t m, std::size_t n) {
    const double cutoff = sv(0) * static_cast<double>(std::max(m, n)) *
                          std::numeric_limits<double>::epsilon();
    std::size_t rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++rank;
    return rank;
}

void check_set_summary(std::size_t set_size, double set_norm_sum) {
    if (set_size == 0) throw ParamError("candidate set must be nonempty");
    if (!(set_norm_sum > 0.0)) throw ParamError("candidate-set norm sum must be positive");
}

double set_norm_sum_of(const MatrixHandle& A, std::span<const std::size_t> set) {
    double s = 0.0;
    for (const std::size_t i : set) s += A.row_sq_norm(i);
    return s;
}

void require_verifiable(const Problem& problem, const SolveReport& report) {
    if (report.trace_level != TraceLevel::full)
        throw ParamError("verification needs a run recorded with a full trace");
    if (!problem.x_star)
        throw ParamError("verification needs a problem with a known solution");
}

}  // namespace

SpectralInfo spectral_info(const MatrixHandle& A) {
    const Eigen::MatrixXd e = to_eigen(A);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(e);
    const Eigen::VectorXd sv = svd.singularValues();
    SpectralInfo info;
    info.sigma_max = sv(0);
    if (!(info.sigma_max > 0.0))
        throw ValidationError("matrix has no positive singular value");
    info.rank = svd_rank(sv, A.rows(), A.cols());
    const double smallest_pos = sv(static_cast<Eigen::Index>(info.rank) - 1);
    info.lambda_min_pos = smallest_pos * smallest_pos;
    return info;
}

Vector min_norm_solution(const MatrixHandle& A, std::span<const double> b) {
    if (b.size() != A.rows())
        throw ShapeError("b has size " + std::to_string(b.size()) + ", expected " +
                         std::to_string(A.rows()));
    const Eigen::MatrixXd e = to_eigen(A);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(e, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd sv = svd.singularValues();
    const std::size_t rank = svd_rank(sv, A.rows(), A.cols());
    Eigen::VectorXd be(static_cast<Eigen::Index>(b.size()));
    for (std::size_t i = 0; i < b.size(); ++i) be(static_cast<Eigen::Index>(i)) = b[i];
    Eigen::VectorXd coeff = svd.matrixU().leftCols(static_cast<Eigen::Index>(rank)).transpose() * be;
    for (Eigen::Index i = 0; i < coeff.size(); ++i) coeff(i) /= sv(i);
    const Eigen::VectorXd xe = svd.matrixV().leftCols(static_cast<Eigen::Index>(rank)) * coeff;
    Vector x(xe.data(), xe.data() + xe.size());

    Vector ax(A.rows());
    kernels::matvec(A, x, ax);
    const double gap = std::sqrt(kernels::dist_sq(ax, b));
    const double b_norm = std::sqrt(kernels::sum_sq(b));
    if (gap > 1e-8 * b_norm)
        throw InconsistentSystemError("system is inconsistent: best achievable residual " +
                                      std::to_string(gap) + " exceeds 1e-8 * ||b||");
    return x;
}

double gk_bound_initial(double lambda_min_pos, std::size_t m, std::size_t set_size,
                        double set_norm_sum) {
    check_set_summary(set_size, set_norm_sum);
    return 1.0 - lambda_min_pos / (static_cast<double>(set_size) * set_norm_sum *
                                   static_cast<double>(m));
}

double gk_bound_initial(const MatrixHandle& A, std::span<const std::size_t> candidate_set) {
    return gk_bound_initial(spectral_info(A).lambda_min_pos, A.rows(), candidate_set.size(),
                            set_norm_sum_of(A, candidate_set));
}

double gk_bound_step(double lambda_min_pos, std::size_t m, std::size_t set_size,
                     double set_norm_sum) {
    if (m < 2) throw DomainError("per-step factor undefined for a single-row system");
    check_set_summary(set_size, set_norm_sum);
    return 1.0 - lambda_min_pos / (static_cast<double>(set_size) * set_norm_sum *
                                   static_cast<double>(m - 1));
}

double gk_bound_step(const MatrixHandle& A, std::span<const std::size_t> candidate_set) {
    return gk_bound_step(spectral_info(A).lambda_min_pos, A.rows(), candidate_set.size(),
                         set_norm_sum_of(A, candidate_set));
}

double gk_bound_envelope(double lambda_min_pos, std::size_t m, std::size_t alpha, double beta,
                         std::size_t k, std::size_t r0_size, double r0_norm_sum) {
    if (k < 1) throw ParamError("envelope needs k >= 1");
    const double initial = gk_bound_initial(lambda_min_pos, m, r0_size, r0_norm_sum);
    if (k == 1) return initial;
    if (m < 2) throw DomainError("multi-step envelope undefined for a single-row system");
    check_set_summary(alpha, beta);
    const double step = 1.0 - lambda_min_pos / (static_cast<double>(alpha) * beta *
                                                static_cast<double>(m - 1));
    return std::pow(step, static_cast<double>(k - 1)) * initial;
}

double gk_bound_envelope(const MatrixHandle& A, std::size_t alpha, double beta, std::size_t k,
                         std::span<const std::size_t> r0) {
    return gk_bound_envelope(spectral_info(A).lambda_min_pos, A.rows(), alpha, beta, k,
                             r0.size(), set_norm_sum_of(A, r0));
}

double grk_expected_factor(const MatrixHandle& A) {
    return rgrk_expected_factor(A, 0.5);
}

double rgrk_expected_factor(const MatrixHandle& A, double theta) {
    if (!(theta >= 0.0 && theta <= 1.0))
        throw ParamError("theta must lie in [0, 1], got " + std::to_string(theta));
    if (A.rows() < 2)
        throw DomainError("expected contraction factor undefined for a single-row system");
    const double frob = A.frobenius_sq();
    const double nu_min = A.min_row_sq_norm();
    const double lambda = spectral_info(A).lambda_min_pos;
    return 1.0 - (theta / (frob - nu_min) + (1.0 - theta) / frob) * lambda;
}

BoundReport compute_bound_report(const Problem& problem, const SolveReport& report,
                                 const SpectralInfo& spectral, double rgrk_theta) {
    if (report.method != Method::gk)
        throw ParamError("bound report is defined for greedy (gk) runs");
    if (report.trace_level != TraceLevel::full || report.trace.empty())
        throw ParamError("bound report needs a nonempty full trace");
    const std::size_t m = problem.A.rows();
    const std::size_t k = report.trace.size();

    BoundReport out;
    out.spectral = spectral;
    out.rgrk_theta = rgrk_theta;
    out.alpha = 0;
    out.beta = 0.0;
    for (const auto& rec : report.trace) {
        out.alpha = std::max(out.alpha, rec.set_size);
        out.beta = std::max(out.beta, rec.set_norm_sum);
    }
    const auto& first = report.trace.front();
    out.factor_initial =
        gk_bound_initial(spectral.lambda_min_pos, m, first.set_size, first.set_norm_sum);
    if (m >= 2) {
        out.factor_step.reserve(k - 1);
        for (std::size_t j = 1; j < k; ++j)
            out.factor_step.push_back(gk_bound_step(spectral.lambda_min_pos, m,
                                                    report.trace[j].set_size,
                                                    report.trace[j].set_norm_sum));
    }
    if (m >= 2 || k == 1)
        out.factor_envelope = gk_bound_envelope(spectral.lambda_min_pos, m, out.alpha, out.beta,
                                                k, first.set_size, first.set_norm_sum);
    if (m >= 2) {
        out.grk_factor = grk_expected_factor(problem.A);
        out.rgrk_factor = rgrk_expected_factor(problem.A, rgrk_theta);
    }
    return out;
}

bool VerificationSummary::all_pass() const {
    for (const CheckResult* c : {&pythagoras, &zeroed_row, &monotone, &step_factor, &envelope})
        if (c->applicable && !c->pass) return false;
    return true;
}

VerificationSummary verify_run(const Problem& problem, const SolveReport& report,
                               const SpectralInfo* spectral) {
    require_verifiable(problem, report);
    VerificationSummary out;
    if (report.trace.empty()) return out;  // zero-iteration run: nothing to check

    const std::size_t steps = report.trace.size();
    // err[k] for k = 0..steps, stitched from the per-step records plus the
    // final error measured at exit.
    std::vector<double> err(steps + 1);
    for (std::size_t j = 0; j < steps; ++j) {
        err[j] = report.trace[j].err_sq;
        if (!std::isfinite(err[j]))
            throw ParamError("trace does not carry solution errors; record with a full trace "
                             "against a known solution");
    }
    err[steps] = report.final_err_sq;

    auto worse = [](CheckResult& c, double gap, std::size_t k) {
        if (gap > c.worst_gap) {
            c.worst_gap = gap;
            c.worst_iter = k;
        }
    };
    // Each applicable check sees at least one update (steps >= 1 here), so
    // the worst gap genuinely reflects the run even when every gap is
    // negative.
    constexpr double kLowest = -std::numeric_limits<double>::infinity();

    // Pythagoras: the projection step removes exactly its own squared length.
    out.pythagoras.applicable = true;
    out.pythagoras.worst_gap = kLowest;
    for (std::size_t j = 0; j < steps; ++j) {
        const double expected = err[j] - report.trace[j].step_sq;
        const double gap = std::fabs(err[j + 1] - expected) / err[j];
        worse(out.pythagoras, gap, j);
    }
    out.pythagoras.pass = out.pythagoras.worst_gap <= 1e-10;

    // The projected row's residual entry is (numerically) zero afterwards.
    double b_inf = 0.0;
    for (const double v : problem.b) b_inf = std::max(b_inf, std::fabs(v));
    out.zeroed_row.applicable = true;
    out.zeroed_row.worst_gap = kLowest;
    for (std::size_t j = 0; j < steps; ++j) worse(out.zeroed_row, report.trace[j].zeroed_abs, j);
    out.zeroed_row.pass = out.zeroed_row.worst_gap <= 1e-12 * b_inf;

    // Squared error never increases. Judged with relative rounding slack: a
    // projection whose exact decrease is below the error's own ulp (a
    // sampled row can carry a rounding-level residual entry) may tick the
    // recomputed error up by one ulp.
    out.monotone.applicable = true;
    out.monotone.worst_gap = kLowest;
    for (std::size_t j = 0; j < steps; ++j)
        worse(out.monotone, (err[j + 1] - err[j]) / err[j], j);
    out.monotone.pass = out.monotone.worst_gap <= 1e-12;

    if (report.method == Method::gk) {
        const SpectralInfo sp = spectral ? *spectral : spectral_info(problem.A);
        const std::size_t m = problem.A.rows();

        out.step_factor.applicable = true;
        out.step_factor.worst_gap = kLowest;
        for (std::size_t j = 0; j < steps; ++j) {
            const auto& rec = report.trace[j];
            const double factor =
                j == 0 ? gk_bound_initial(sp.lambda_min_pos, m, rec.set_size, rec.set_norm_sum)
                       : gk_bound_step(sp.lambda_min_pos, m, rec.set_size, rec.set_norm_sum);
            worse(out.step_factor, err[j + 1] / err[j] - factor, j);
        }
        out.step_factor.pass = out.step_factor.worst_gap <= 1e-10;

        if (m >= 2 || steps == 1) {
            std::size_t alpha = 0;
            double beta = 0.0;
            for (const auto& rec : report.trace) {
                alpha = std::max(alpha, rec.set_size);
                beta = std::max(beta, rec.set_norm_sum);
            }
            const double env =
                gk_bound_envelope(sp.lambda_min_pos, m, alpha, beta, steps,
                                  report.trace.front().set_size,
                                  report.trace.front().set_norm_sum);
            out.envelope.applicable = true;
            out.envelope.worst_gap = err[steps] / err[0] - env;
            out.envelope.worst_iter = steps;
            out.envelope.pass = out.envelope.worst_gap <= 1e-10;
        }
    }
    return out;
}

}  // namespace kaczmarz
