// Shared problem builders for the unit and acceptance tests.
#pragma once

#include <cstdint>
#include <vector>

#include "kaczmarz/analysis.hpp"
#include "kaczmarz/io.hpp"
#include "kaczmarz/kernels.hpp"
#include "kaczmarz/matrix.hpp"
#include "kaczmarz/problem.hpp"
#include "kaczmarz/rng.hpp"

namespace fixtures {

/// Vertex-edge incidence matrix of the "non-attacking rooks" graph on a
/// board with `board_rows` x `board_cols` squares: one row per unordered
/// pair of squares lying in distinct rows and distinct columns, carrying -1
/// at the smaller vertex and +1 at the larger. For a 7x8 board this has the
/// exact shape and density of the ch7-8-b1 collection matrix (1176 x 56,
/// 2352 stored entries) and is rank-deficient (rank 55).
inline kaczmarz::MatrixHandle chessboard_incidence(std::size_t board_rows = 7,
                                                   std::size_t board_cols = 8) {
    const std::size_t v = board_rows * board_cols;
    std::vector<std::size_t> offsets{0};
    std::vector<std::size_t> cols;
    std::vector<double> vals;
    for (std::size_t a = 0; a < v; ++a) {
        const std::size_t ra = a / board_cols, ca = a % board_cols;
        for (std::size_t b = a + 1; b < v; ++b) {
            const std::size_t rb = b / board_cols, cb = b % board_cols;
            if (ra == rb || ca == cb) continue;  // attacking pair: not a face
            cols.push_back(a);
            vals.push_back(-1.0);
            cols.push_back(b);
            vals.push_back(1.0);
            offsets.push_back(cols.size());
        }
    }
    const std::size_t rows = offsets.size() - 1;  // read before the move below
    return kaczmarz::MatrixHandle::csr(rows, v, std::move(offsets), std::move(cols),
                                       std::move(vals));
}

/// Consistent rank-deficient system: a Gaussian base block stacked on top of
/// a copy of itself (every row duplicated), with the reference solution set
/// to the minimum-norm solution so the solution-error stopping rule measures
/// distance to it.
inline kaczmarz::Problem duplicated_row_problem(std::size_t base_rows, std::size_t n,
                                                std::uint64_t seed) {
    const kaczmarz::MatrixHandle base = kaczmarz::gen_gaussian(base_rows, n, seed);
    std::vector<double> data;
    data.reserve(2 * base_rows * n);
    for (std::size_t pass = 0; pass < 2; ++pass)
        for (std::size_t i = 0; i < base_rows; ++i) {
            const auto row = base.dense_row(i);
            data.insert(data.end(), row.begin(), row.end());
        }
    kaczmarz::MatrixHandle A = kaczmarz::MatrixHandle::dense(2 * base_rows, n, std::move(data));

    kaczmarz::Rng rng(seed ^ 0xabcdef123456ull);
    const kaczmarz::Vector x_tilde = rng.gaussian_vector(n);
    kaczmarz::Vector b(A.rows());
    kaczmarz::kernels::matvec(A, x_tilde, b);

    kaczmarz::Vector x_dagger = kaczmarz::min_norm_solution(A, b);
    return kaczmarz::make_problem(std::move(A), std::move(b), std::move(x_dagger));
}

/// Small dense consistent problem from the seeded Gaussian family.
inline kaczmarz::Problem gaussian_problem(std::size_t m, std::size_t n, std::uint64_t seed) {
    return kaczmarz::make_consistent_problem(kaczmarz::gen_gaussian(m, n, seed), seed);
}

}  // namespace fixtures
