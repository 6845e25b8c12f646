// Micro-benchmark for the row-action kernels: times the serial reference
// implementation against the OpenMP variant and verifies that both produce
// bit-identical results (the parallel kernels split work by whole rows and
// share the per-row dot-product core, so no floating-point reassociation
// can occur).

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "kaczmarz/io.hpp"
#include "kaczmarz/kernels.hpp"
#include "kaczmarz/matrix.hpp"
#include "kaczmarz/rng.hpp"

namespace {

using namespace kaczmarz;
using Clock = std::chrono::steady_clock;

double time_of(const std::function<void()>& f, int reps) {
    // One warm-up pass, then the best of `reps` timed passes.
    f();
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = Clock::now();
        f();
        const auto t1 = Clock::now();
        best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
    }
    return best;
}

bool bits_equal(const Vector& a, const Vector& b) {
    return a.size() == b.size() &&
           (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

MatrixHandle make_sparse(std::size_t m, std::size_t n, std::size_t per_row, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::size_t> offsets(m + 1, 0);
    std::vector<std::size_t> cols;
    std::vector<double> vals;
    for (std::size_t i = 0; i < m; ++i) {
        // `per_row` distinct ascending columns, always including one so no row is empty.
        std::size_t c = static_cast<std::size_t>(rng.uniform() * static_cast<double>(n / 2));
        for (std::size_t k = 0; k < per_row && c < n; ++k) {
            cols.push_back(c);
            vals.push_back(rng.gaussian());
            c += 1 + static_cast<std::size_t>(rng.uniform() * 3.0);
        }
        offsets[i + 1] = cols.size();
    }
    return MatrixHandle::csr(m, n, std::move(offsets), std::move(cols), std::move(vals));
}

void bench_case(const std::string& name, const std::function<MatrixHandle()>& make, int reps) {
    const MatrixHandle A = make();
    const MatrixHandle A2 = make();  // second handle for the norm-cache comparison
    const std::size_t m = A.rows(), n = A.cols();
    Rng rng(7);
    const Vector x = rng.gaussian_vector(n);
    const Vector b = rng.gaussian_vector(m);
    Vector r_serial(m), r_omp(m), y_serial(m), y_omp(m);

    struct Row {
        const char* kernel;
        double serial_s;
        double omp_s;
        bool identical;
    };
    std::vector<Row> rows;

    kernels::residual(A, b, x, r_serial, kernels::Exec::serial);
    kernels::residual(A, b, x, r_omp, kernels::Exec::openmp);
    rows.push_back({"residual",
                    time_of([&] { kernels::residual(A, b, x, r_serial, kernels::Exec::serial); },
                            reps),
                    time_of([&] { kernels::residual(A, b, x, r_omp, kernels::Exec::openmp); },
                            reps),
                    bits_equal(r_serial, r_omp)});

    kernels::matvec(A, x, y_serial, kernels::Exec::serial);
    kernels::matvec(A, x, y_omp, kernels::Exec::openmp);
    rows.push_back({"matvec",
                    time_of([&] { kernels::matvec(A, x, y_serial, kernels::Exec::serial); },
                            reps),
                    time_of([&] { kernels::matvec(A, x, y_omp, kernels::Exec::openmp); }, reps),
                    bits_equal(y_serial, y_omp)});

    // The norm fill caches inside the handle, so time the first (cold) fill on
    // each handle and compare the cached values bitwise afterwards.
    {
        const auto t0 = Clock::now();
        kernels::fill_row_sq_norms(A, kernels::Exec::serial);
        const auto t1 = Clock::now();
        kernels::fill_row_sq_norms(A2, kernels::Exec::openmp);
        const auto t2 = Clock::now();
        bool same = true;
        for (std::size_t i = 0; i < m; ++i)
            same = same && A.row_sq_norm(i) == A2.row_sq_norm(i);
        rows.push_back({"row_sq_norms (cold)", std::chrono::duration<double>(t1 - t0).count(),
                        std::chrono::duration<double>(t2 - t1).count(), same});
    }

    const auto ms = kernels::max_abs(r_serial, kernels::Exec::serial);
    const auto mo = kernels::max_abs(r_omp, kernels::Exec::openmp);
    rows.push_back({"max_abs",
                    time_of([&] { (void)kernels::max_abs(r_serial, kernels::Exec::serial); },
                            reps),
                    time_of([&] { (void)kernels::max_abs(r_omp, kernels::Exec::openmp); }, reps),
                    ms.value == mo.value && ms.index == mo.index});

    std::printf("%s (%zux%zu, nnz %zu)\n", name.c_str(), m, n, A.nnz());
    std::printf("  %-20s %12s %12s %9s %s\n", "kernel", "serial (s)", "openmp (s)", "speedup",
                "bitwise");
    for (const Row& row : rows)
        std::printf("  %-20s %12.3e %12.3e %8.2fx %s\n", row.kernel, row.serial_s, row.omp_s,
                    row.serial_s / row.omp_s, row.identical ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    std::size_t m = 4000, n = 1500;
    int reps = 20;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--rows" && i + 1 < argc)
            m = static_cast<std::size_t>(std::stoull(argv[++i]));
        else if (arg == "--cols" && i + 1 < argc)
            n = static_cast<std::size_t>(std::stoull(argv[++i]));
        else if (arg == "--reps" && i + 1 < argc)
            reps = std::stoi(argv[++i]);
        else {
            std::fprintf(stderr, "usage: kernel_bench [--rows M] [--cols N] [--reps R]\n");
            return 64;
        }
    }

#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not available; the openmp execution mode falls back to serial\n");
#endif

    bench_case("dense", [&] { return gen_gaussian(m, n, 1); }, reps);
    bench_case("csr", [&] { return make_sparse(m * 4, n, 12, 2); }, reps);
    return 0;
}
