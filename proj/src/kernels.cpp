#include "kaczmarz/kernels.hpp"

#include <cmath>
#include <string>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace kaczmarz::kernels {

namespace {

// Shared contraction cores. Every kernel that consumes a row goes through
// one of these, so a given row always produces the same bits no matter which
// entry point asked for it. The dense core keeps four accumulators to break
// the FMA dependency chain; the order (s0+s1)+(s2+s3) plus a sequential tail
// is fixed and identical on the serial and OpenMP paths.

inline double dot_dense(const double* a, const double* x, std::size_t n) {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        s0 += a[j] * x[j];
        s1 += a[j + 1] * x[j + 1];
        s2 += a[j + 2] * x[j + 2];
        s3 += a[j + 3] * x[j + 3];
    }
    double s = (s0 + s1) + (s2 + s3);
    for (; j < n; ++j) s += a[j] * x[j];
    return s;
}

inline double dot_csr(const std::size_t* cols, const double* vals, std::size_t len,
                      const double* x) {
    double s = 0.0;
    for (std::size_t k = 0; k < len; ++k) s += vals[k] * x[cols[k]];
    return s;
}

inline double dot_row(const MatrixHandle& A, std::size_t i, const double* x) {
    if (A.storage() == Storage::dense) {
        auto row = A.dense_row(i);
        return dot_dense(row.data(), x, row.size());
    }
    auto cols = A.csr_row_cols(i);
    auto vals = A.csr_row_vals(i);
    return dot_csr(cols.data(), vals.data(), vals.size(), x);
}

void check_vec(std::span<const double> v, std::size_t want, const char* name) {
    if (v.size() != want)
        throw ShapeError(std::string(name) + " has size " + std::to_string(v.size()) +
                         ", expected " + std::to_string(want));
}

bool use_openmp(Exec exec) {
#if defined(_OPENMP)
    return exec == Exec::openmp;
#else
    (void)exec;
    return false;
#endif
}

}  // namespace

double row_dot(const MatrixHandle& A, std::size_t i, std::span<const double> x) {
    check_vec(x, A.cols(), "x");
    return dot_row(A, i, x.data());
}

void row_axpy(const MatrixHandle& A, std::size_t i, double s, std::span<double> x) {
    check_vec(x, A.cols(), "x");
    if (A.storage() == Storage::dense) {
        auto row = A.dense_row(i);
        for (std::size_t j = 0; j < row.size(); ++j) x[j] += s * row[j];
    } else {
        auto cols = A.csr_row_cols(i);
        auto vals = A.csr_row_vals(i);
        for (std::size_t k = 0; k < vals.size(); ++k) x[cols[k]] += s * vals[k];
    }
}

void residual(const MatrixHandle& A, std::span<const double> b, std::span<const double> x,
              std::span<double> r, Exec exec) {
    check_vec(b, A.rows(), "b");
    check_vec(x, A.cols(), "x");
    check_vec(r, A.rows(), "r");
    const auto m = static_cast<std::ptrdiff_t>(A.rows());
    const double* xp = x.data();
    if (use_openmp(exec)) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < m; ++i)
            r[static_cast<std::size_t>(i)] =
                b[static_cast<std::size_t>(i)] - dot_row(A, static_cast<std::size_t>(i), xp);
    } else {
        for (std::ptrdiff_t i = 0; i < m; ++i)
            r[static_cast<std::size_t>(i)] =
                b[static_cast<std::size_t>(i)] - dot_row(A, static_cast<std::size_t>(i), xp);
    }
}

void matvec(const MatrixHandle& A, std::span<const double> x, std::span<double> y, Exec exec) {
    check_vec(x, A.cols(), "x");
    check_vec(y, A.rows(), "y");
    const auto m = static_cast<std::ptrdiff_t>(A.rows());
    const double* xp = x.data();
    if (use_openmp(exec)) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < m; ++i)
            y[static_cast<std::size_t>(i)] = dot_row(A, static_cast<std::size_t>(i), xp);
    } else {
        for (std::ptrdiff_t i = 0; i < m; ++i)
            y[static_cast<std::size_t>(i)] = dot_row(A, static_cast<std::size_t>(i), xp);
    }
}

void fill_row_sq_norms(const MatrixHandle& A, Exec exec) {
    const auto m = static_cast<std::ptrdiff_t>(A.rows());
    if (use_openmp(exec)) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < m; ++i) A.row_sq_norm(static_cast<std::size_t>(i));
    } else {
        for (std::ptrdiff_t i = 0; i < m; ++i) A.row_sq_norm(static_cast<std::size_t>(i));
    }
}

MaxAbsResult max_abs(std::span<const double> r, Exec exec) {
    if (r.empty()) throw std::logic_error("max_abs: empty vector");
    if (use_openmp(exec)) {
#if defined(_OPENMP)
        const std::size_t len = r.size();
        MaxAbsResult best{-1.0, 0};
#pragma omp parallel
        {
            const auto nt = static_cast<std::size_t>(omp_get_num_threads());
            const auto t = static_cast<std::size_t>(omp_get_thread_num());
            // Contiguous ascending chunks so the in-order merge below keeps
            // the smallest attaining index, exactly like the serial scan.
            const std::size_t lo = len * t / nt;
            const std::size_t hi = len * (t + 1) / nt;
            MaxAbsResult local{-1.0, lo};
            for (std::size_t i = lo; i < hi; ++i) {
                const double a = std::fabs(r[i]);
                if (a > local.value) local = {a, i};
            }
#pragma omp critical(kaczmarz_max_abs)
            {
                if (local.value > best.value ||
                    (local.value == best.value && local.index < best.index))
                    best = local;
            }
        }
        return best;
#endif
    }
    MaxAbsResult best{std::fabs(r[0]), 0};
    for (std::size_t i = 1; i < r.size(); ++i) {
        const double a = std::fabs(r[i]);
        if (a > best.value) best = {a, i};
    }
    return best;
}

double sum_sq(std::span<const double> r) {
    double s = 0.0;
    for (double v : r) s += v * v;
    return s;
}

double dist_sq(std::span<const double> a, std::span<const double> b) {
    check_vec(b, a.size(), "b");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

}  // namespace kaczmarz::kernels
