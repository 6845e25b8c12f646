#include "kaczmarz/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace kaczmarz {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_residual_size(std::span<const double> r, const MatrixHandle& A) {
    if (r.size() != A.rows())
        throw ShapeError("residual has size " + std::to_string(r.size()) + ", expected " +
                         std::to_string(A.rows()));
}

void check_theta(double theta) {
    if (!(theta >= 0.0 && theta <= 1.0))
        throw ParamError("theta must lie in [0, 1], got " + std::to_string(theta));
}

/// Largest residual-to-norm ratio max_i r_i^2 / ||A^(i)||^2.
double max_ratio(std::span<const double> r, const MatrixHandle& A) {
    double best = -1.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double q = r[i] * r[i] / A.row_sq_norm(i);
        if (q > best) best = q;
    }
    return best;
}

/// Greedy pick among ascending candidates: largest r_i^2 / ||A^(i)||^2,
/// first (smallest) index on ties. Accumulates the set's norm sum.
std::size_t gk_pick_core(std::span<const double> r, const MatrixHandle& A,
                         std::span<const std::size_t> candidates, double& norm_sum) {
    if (candidates.empty()) throw std::logic_error("gk_pick: empty candidate set");
    std::size_t best_idx = candidates[0];
    double nu = A.row_sq_norm(best_idx);
    double best_ratio = r[best_idx] * r[best_idx] / nu;
    norm_sum = nu;
    for (std::size_t c = 1; c < candidates.size(); ++c) {
        const std::size_t i = candidates[c];
        nu = A.row_sq_norm(i);
        norm_sum += nu;
        const double ratio = r[i] * r[i] / nu;
        if (ratio > best_ratio) {
            best_ratio = ratio;
            best_idx = i;
        }
    }
    return best_idx;
}

void collect_equal_abs(std::span<const double> r, double value, std::vector<std::size_t>& out) {
    out.clear();
    for (std::size_t i = 0; i < r.size(); ++i)
        if (std::fabs(r[i]) == value) out.push_back(i);
}

/// One-pass variant of max_abs + collect_equal_abs: returns the largest
/// |r_i| and fills `out` with every index attaining it, ascending. Restarting
/// the collection whenever a strictly larger value appears yields exactly the
/// two-pass set (ties are exact floating-point equality).
double max_abs_collect(std::span<const double> r, std::vector<std::size_t>& out) {
    out.clear();
    double best = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double a = std::fabs(r[i]);
        if (a > best) {
            best = a;
            out.clear();
            out.push_back(i);
        } else if (a == best && best > 0.0) {
            out.push_back(i);
        }
    }
    return best;
}

}  // namespace

std::string method_name(Method m) {
    switch (m) {
        case Method::rk: return "rk";
        case Method::grk: return "grk";
        case Method::rgrk: return "rgrk";
        case Method::gk: return "gk";
    }
    throw std::logic_error("method_name: bad enum value");
}

Method method_from_name(const std::string& name) {
    if (name == "rk") return Method::rk;
    if (name == "grk") return Method::grk;
    if (name == "rgrk") return Method::rgrk;
    if (name == "gk") return Method::gk;
    throw ParamError("unknown method '" + name + "' (expected rk, grk, rgrk or gk)");
}

double rgrk_threshold(std::span<const double> r, const MatrixHandle& A, double theta) {
    check_theta(theta);
    check_residual_size(r, A);
    const double rsq = kernels::sum_sq(r);
    if (rsq == 0.0)
        throw std::logic_error("greedy threshold undefined for a zero residual; the solve loop "
                               "stops before selection can see one");
    return theta * (max_ratio(r, A) / rsq) + (1.0 - theta) / A.frobenius_sq();
}

double grk_threshold(std::span<const double> r, const MatrixHandle& A) {
    // The greedy randomized rule is the theta = 1/2 relaxation; sharing the
    // implementation keeps the two methods bit-identical at that setting.
    return rgrk_threshold(r, A, 0.5);
}

std::vector<std::size_t> grk_index_set(std::span<const double> r, const MatrixHandle& A,
                                       double eps) {
    check_residual_size(r, A);
    const double rsq = kernels::sum_sq(r);
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < r.size(); ++i)
        if (r[i] * r[i] >= eps * rsq * A.row_sq_norm(i)) out.push_back(i);
    return out;
}

std::size_t weighted_sample(std::span<const double> r, std::span<const std::size_t> index_set,
                            Rng& rng) {
    if (index_set.empty()) throw std::logic_error("weighted_sample: empty index set");
    std::vector<double> weights(index_set.size());
    for (std::size_t c = 0; c < index_set.size(); ++c) {
        const double ri = r[index_set[c]];
        weights[c] = ri * ri;
    }
    return index_set[inverse_cdf_pick(weights, rng.uniform())];
}

std::vector<std::size_t> gk_candidate_set(std::span<const double> r) {
    if (r.empty()) throw std::logic_error("gk_candidate_set: empty residual");
    double best = -1.0;
    for (std::size_t i = 0; i < r.size(); ++i) best = std::max(best, std::fabs(r[i]));
    if (best == 0.0)
        throw std::logic_error("gk candidate set undefined for a zero residual; the solve loop "
                               "stops before selection can see one");
    std::vector<std::size_t> out;
    collect_equal_abs(r, best, out);
    return out;
}

std::size_t gk_pick(std::span<const double> r, const MatrixHandle& A,
                    std::span<const std::size_t> candidates) {
    check_residual_size(r, A);
    double norm_sum = 0.0;
    return gk_pick_core(r, A, candidates, norm_sum);
}

std::size_t rk_pick(const MatrixHandle& A, Rng& rng) {
    std::vector<double> weights(A.rows());
    for (std::size_t i = 0; i < A.rows(); ++i) weights[i] = A.row_sq_norm(i);
    return inverse_cdf_pick(weights, rng.uniform());
}

Vector kaczmarz_step(std::span<const double> x, const MatrixHandle& A, std::span<const double> b,
                     std::size_t i) {
    if (b.size() != A.rows())
        throw ShapeError("b has size " + std::to_string(b.size()) + ", expected " +
                         std::to_string(A.rows()));
    const double ri = b[i] - kernels::row_dot(A, i, x);
    const double s = ri / A.row_sq_norm(i);
    Vector out(x.begin(), x.end());
    kernels::row_axpy(A, i, s, out);
    return out;
}

SolveReport solve(const Problem& problem, const Strategy& strategy, const SolveConfig& config) {
    const MatrixHandle& A = problem.A;
    const std::size_t m = A.rows();
    const Method method = strategy.method;

    if (config.max_iters < 1) throw ParamError("max_iters must be at least 1");
    if (!(config.res_tol > 0.0) || !std::isfinite(config.res_tol))
        throw ParamError("res_tol must be positive and finite");
    if (method == Method::rgrk) check_theta(strategy.theta);
    if (config.stop_mode == StopMode::res && !problem.x_star)
        throw ParamError("the relative-solution-error stopping rule needs a known solution");

    const Vector* xs = problem.x_star ? &*problem.x_star : nullptr;
    const double xstar_sq = xs ? kernels::sum_sq(*xs) : 0.0;
    if (config.stop_mode == StopMode::res && xstar_sq == 0.0)
        throw ParamError("the relative-solution-error stopping rule is undefined for x_star = 0");
    const double b_norm = std::sqrt(kernels::sum_sq(problem.b));

    SolveReport rep;
    rep.method = method;
    rep.trace_level = config.trace;
    Vector x = problem.x0;

    const auto res_of = [&](const Vector& v) { return kernels::dist_sq(v, *xs) / xstar_sq; };

    // The start iterate may already satisfy the solution-error rule; that
    // counts as zero iterations. The residual rule is checked at the top of
    // the loop and needs no special case.
    if (config.stop_mode == StopMode::res && res_of(x) <= config.res_tol) {
        rep.converged = true;
        rep.final_res = res_of(x);
        rep.final_err_sq = kernels::dist_sq(x, *xs);
        rep.solution = std::move(x);
        return rep;
    }

    Rng rng(strategy.seed);
    const bool greedy_randomized = method == Method::grk || method == Method::rgrk;

    // Row-norm policy: the randomized rules consult every row's norm, so the
    // cache is filled once up front; gk touches norms only through its
    // candidate sets and fills lazily.
    if (method != Method::gk) kernels::fill_row_sq_norms(A, config.exec);
    const double frob_sq = greedy_randomized ? A.frobenius_sq() : 0.0;
    const double theta = method == Method::grk ? 0.5 : strategy.theta;

    // rk draws against the fixed row-norm distribution; precomputing the
    // running sums keeps each draw at one binary search while matching
    // inverse_cdf_pick (same ascending accumulation order) bit for bit.
    std::vector<double> rk_cumulative;
    if (method == Method::rk) {
        rk_cumulative.resize(m);
        double cum = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            cum += A.row_sq_norm(i);
            rk_cumulative[i] = cum;
        }
    }

    const bool record = config.trace != TraceLevel::none;
    const bool record_full = config.trace == TraceLevel::full;
    const bool need_rsq = greedy_randomized || method == Method::rk ||
                          config.stop_mode == StopMode::relative_residual || record_full;

    SolveState st{std::move(x), Vector(m), 0};
    std::vector<double> ratios(greedy_randomized ? m : 0);
    std::vector<double> weights;
    std::vector<std::size_t> cand;
    cand.reserve(std::min<std::size_t>(m, 64));

    bool converged = false;
    std::size_t steps = 0;

    for (std::size_t k = 0; k < config.max_iters; ++k) {
        st.k = k;
        kernels::residual(A, problem.b, st.x, st.r, config.exec);

        double rsq = kNaN;
        if (need_rsq) {
            rsq = kernels::sum_sq(st.r);
            if (rsq == 0.0) {  // exact solution of A x = b; nothing left to project
                converged = true;
                break;
            }
        }
        if (config.stop_mode == StopMode::relative_residual &&
            std::sqrt(rsq) / b_norm <= config.res_tol) {
            converged = true;
            break;
        }

        // --- row selection ---------------------------------------------
        std::size_t chosen = 0;
        double norm_sum = 0.0;
        if (method == Method::gk) {
            const double mr = max_abs_collect(st.r, cand);
            if (mr == 0.0) {  // exact solution (res stopping mode)
                converged = true;
                break;
            }
            chosen = gk_pick_core(st.r, A, cand, norm_sum);
        } else if (greedy_randomized) {
            // Fused form of threshold + index set + sample. Membership is
            // tested on the cached ratios against t = eps * ||r||^2, which
            // is algebraically the displayed rule but keeps the argmax row
            // in the set even at theta = 1, where re-rounding through
            // eps * ||r||^2 * nu_i could otherwise exclude it.
            double mq = -1.0;
            for (std::size_t i = 0; i < m; ++i) {
                const double q = st.r[i] * st.r[i] / A.row_sq_norm(i);
                ratios[i] = q;
                if (q > mq) mq = q;
            }
            const double t = theta * mq + (1.0 - theta) * (rsq / frob_sq);
            cand.clear();
            norm_sum = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                if (ratios[i] >= t) {
                    cand.push_back(i);
                    norm_sum += A.row_sq_norm(i);
                }
            }
            if (cand.empty())
                throw std::logic_error("greedy index set empty despite a nonzero residual");
            weights.clear();
            for (const std::size_t i : cand) weights.push_back(st.r[i] * st.r[i]);
            chosen = cand[inverse_cdf_pick(weights, rng.uniform())];
        } else {  // rk
            const double u = rng.uniform();
            const double target = u * rk_cumulative.back();
            const auto it =
                std::upper_bound(rk_cumulative.begin(), rk_cumulative.end(), target);
            chosen = it == rk_cumulative.end() ? m - 1
                                               : static_cast<std::size_t>(it - rk_cumulative.begin());
            cand.assign(1, chosen);
            norm_sum = A.row_sq_norm(chosen);
        }

        IterationRecord rec;
        if (record) {
            rec.k = k;
            rec.chosen = chosen;
            rec.set_size = cand.size();
            rec.set_norm_sum = record_full ? norm_sum : kNaN;
            rec.err_sq = record_full && xs ? kernels::dist_sq(st.x, *xs) : kNaN;
            rec.res_norm_sq = record_full ? rsq : kNaN;
        }

        // --- projection step ---------------------------------------------
        const double ri = st.r[chosen];
        const double nu = A.row_sq_norm(chosen);
        kernels::row_axpy(A, chosen, ri / nu, st.x);
        ++steps;

        if (record) {
            if (record_full) {
                rec.step_sq = ri * ri / nu;
                rec.zeroed_abs = std::fabs(problem.b[chosen] -
                                           kernels::row_dot(A, chosen, st.x));
            } else {
                rec.step_sq = kNaN;
                rec.zeroed_abs = kNaN;
            }
            rep.trace.push_back(rec);
        }

        if (config.stop_mode == StopMode::res && res_of(st.x) <= config.res_tol) {
            converged = true;
            break;
        }
    }

    rep.iterations = steps;
    rep.converged = converged;
    if (config.stop_mode == StopMode::res) {
        rep.final_res = res_of(st.x);
    } else {
        kernels::residual(A, problem.b, st.x, st.r, config.exec);
        const double rsq = kernels::sum_sq(st.r);
        rep.final_res = rsq == 0.0 ? 0.0 : std::sqrt(rsq) / b_norm;
    }
    rep.final_err_sq = xs ? kernels::dist_sq(st.x, *xs) : kNaN;
    rep.solution = std::move(st.x);
    return rep;
}

}  // namespace kaczmarz
