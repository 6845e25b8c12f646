#pragma once

#include <atomic>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "kaczmarz/error.hpp"

namespace kaczmarz {

using Vector = std::vector<double>;

enum class Storage { dense, csr };

/// Row-access matrix shared by every solver: dense row-major or CSR, plus a
/// lazily filled cache of squared row 2-norms and the squared Frobenius norm.
///
/// The matrix itself is immutable after construction; only the norm cache
/// mutates. Cache slots are relaxed atomics written with the same value by
/// every filler (the computation is deterministic), so concurrent readers
/// need no further synchronization. Each row norm is computed at most once
/// per handle and never invalidated.
///
/// Construction validates the data: both dimensions at least 1, every stored
/// value finite, and no row without a nonzero entry (row projections divide
/// by the row norm, so zero rows are rejected up front, naming the row).
class MatrixHandle {
public:
    /// Build a dense handle from row-major data of size m*n.
    static MatrixHandle dense(std::size_t m, std::size_t n, std::vector<double> row_major);

    /// Build a CSR handle. offsets has size m+1 with offsets[0] == 0,
    /// nondecreasing, offsets[m] == cols.size() == vals.size(); column
    /// indices lie in [0, n). Entries keep their stored order within a row.
    static MatrixHandle csr(std::size_t m, std::size_t n, std::vector<std::size_t> offsets,
                            std::vector<std::size_t> cols, std::vector<double> vals);

    // Move-only: the handle owns the data buffers and the atomic cache.
    MatrixHandle(MatrixHandle&& other) noexcept;
    MatrixHandle& operator=(MatrixHandle&& other) noexcept;
    MatrixHandle(const MatrixHandle&) = delete;
    MatrixHandle& operator=(const MatrixHandle&) = delete;

    std::size_t rows() const { return m_; }
    std::size_t cols() const { return n_; }
    Storage storage() const { return storage_; }

    /// Number of stored entries: m*n for dense, the CSR value count otherwise.
    std::size_t nnz() const;

    /// nnz / (m*n).
    double density() const;

    /// Squared 2-norm of row i, computed on first use and cached.
    double row_sq_norm(std::size_t i) const;

    /// Sum of all squared row norms; forces the whole cache.
    double frobenius_sq() const;

    /// Smallest squared row norm; forces the whole cache.
    double min_row_sq_norm() const;

    // Raw row access. dense_* require dense storage, csr_* require CSR;
    // violations are programming errors and throw std::logic_error.
    std::span<const double> dense_row(std::size_t i) const;
    std::span<const double> dense_data() const;
    std::span<const std::size_t> csr_row_cols(std::size_t i) const;
    std::span<const double> csr_row_vals(std::size_t i) const;

    /// Single entry; O(row nnz) for CSR. Convenience for I/O and tests.
    double entry(std::size_t i, std::size_t j) const;

private:
    MatrixHandle(std::size_t m, std::size_t n, Storage storage);

    void check_row(std::size_t i) const;
    double compute_row_sq(std::size_t i) const;

    std::size_t m_ = 0;
    std::size_t n_ = 0;
    Storage storage_ = Storage::dense;

    std::vector<double> dense_;          // dense: row-major values
    std::vector<std::size_t> offsets_;   // csr: size m+1
    std::vector<std::size_t> cols_;
    std::vector<double> vals_;

    // Norm cache: -1.0 marks an empty slot. Slots are only ever overwritten
    // with the one deterministic value for that row, so relaxed ordering is
    // enough and concurrent fills are idempotent.
    mutable std::unique_ptr<std::atomic<double>[]> row_sq_;
    mutable std::atomic<double> frob_sq_{-1.0};
};

}  // namespace kaczmarz
