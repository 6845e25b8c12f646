#include "kaczmarz/matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace kaczmarz {

namespace {

void check_dims(std::size_t m, std::size_t n) {
    if (m < 1 || n < 1)
        throw ValidationError("matrix dimensions must be at least 1x1, got " + std::to_string(m) +
                              "x" + std::to_string(n));
}

void check_finite(const std::vector<double>& vals) {
    for (std::size_t i = 0; i < vals.size(); ++i)
        if (!std::isfinite(vals[i]))
            throw ValidationError("matrix contains a non-finite value at stored entry " +
                                  std::to_string(i));
}

}  // namespace

MatrixHandle::MatrixHandle(std::size_t m, std::size_t n, Storage storage)
    : m_(m), n_(n), storage_(storage) {
    row_sq_ = std::make_unique<std::atomic<double>[]>(m_);
    for (std::size_t i = 0; i < m_; ++i) row_sq_[i].store(-1.0, std::memory_order_relaxed);
}

MatrixHandle::MatrixHandle(MatrixHandle&& other) noexcept
    : m_(other.m_),
      n_(other.n_),
      storage_(other.storage_),
      dense_(std::move(other.dense_)),
      offsets_(std::move(other.offsets_)),
      cols_(std::move(other.cols_)),
      vals_(std::move(other.vals_)),
      row_sq_(std::move(other.row_sq_)),
      frob_sq_(other.frob_sq_.load(std::memory_order_relaxed)) {}

MatrixHandle& MatrixHandle::operator=(MatrixHandle&& other) noexcept {
    if (this != &other) {
        m_ = other.m_;
        n_ = other.n_;
        storage_ = other.storage_;
        dense_ = std::move(other.dense_);
        offsets_ = std::move(other.offsets_);
        cols_ = std::move(other.cols_);
        vals_ = std::move(other.vals_);
        row_sq_ = std::move(other.row_sq_);
        frob_sq_.store(other.frob_sq_.load(std::memory_order_relaxed), std::memory_order_relaxed);
    }
    return *this;
}

MatrixHandle MatrixHandle::dense(std::size_t m, std::size_t n, std::vector<double> row_major) {
    check_dims(m, n);
    if (row_major.size() != m * n)
        throw ShapeError("dense data has " + std::to_string(row_major.size()) +
                         " values, expected " + std::to_string(m * n));
    check_finite(row_major);
    for (std::size_t i = 0; i < m; ++i) {
        bool nonzero = false;
        for (std::size_t j = 0; j < n && !nonzero; ++j) nonzero = row_major[i * n + j] != 0.0;
        if (!nonzero)
            throw ValidationError("row " + std::to_string(i) +
                                  " is identically zero; row projections are undefined");
    }
    MatrixHandle a(m, n, Storage::dense);
    a.dense_ = std::move(row_major);
    return a;
}

MatrixHandle MatrixHandle::csr(std::size_t m, std::size_t n, std::vector<std::size_t> offsets,
                               std::vector<std::size_t> cols, std::vector<double> vals) {
    check_dims(m, n);
    if (offsets.size() != m + 1)
        throw ValidationError("CSR offsets array has size " + std::to_string(offsets.size()) +
                              ", expected " + std::to_string(m + 1));
    if (offsets.front() != 0) throw ValidationError("CSR offsets must start at 0");
    for (std::size_t i = 0; i < m; ++i)
        if (offsets[i] > offsets[i + 1])
            throw ValidationError("CSR offsets decrease at row " + std::to_string(i));
    if (offsets.back() != cols.size() || cols.size() != vals.size())
        throw ValidationError("CSR arrays disagree: final offset " +
                              std::to_string(offsets.back()) + ", " + std::to_string(cols.size()) +
                              " columns, " + std::to_string(vals.size()) + " values");
    for (std::size_t k = 0; k < cols.size(); ++k)
        if (cols[k] >= n)
            throw ValidationError("CSR column index " + std::to_string(cols[k]) +
                                  " out of range at stored entry " + std::to_string(k));
    // Canonical CSR only: ascending columns rule out duplicate entries, which
    // row norms could not account for (squares do not add across duplicates).
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = offsets[i] + 1; k < offsets[i + 1]; ++k)
            if (cols[k] <= cols[k - 1])
                throw ValidationError("CSR columns must be strictly ascending within row " +
                                      std::to_string(i));
    check_finite(vals);
    for (std::size_t i = 0; i < m; ++i) {
        bool nonzero = false;
        for (std::size_t k = offsets[i]; k < offsets[i + 1] && !nonzero; ++k)
            nonzero = vals[k] != 0.0;
        if (!nonzero)
            throw ValidationError("row " + std::to_string(i) +
                                  " is identically zero; row projections are undefined");
    }
    MatrixHandle a(m, n, Storage::csr);
    a.offsets_ = std::move(offsets);
    a.cols_ = std::move(cols);
    a.vals_ = std::move(vals);
    return a;
}

std::size_t MatrixHandle::nnz() const {
    return storage_ == Storage::dense ? m_ * n_ : vals_.size();
}

double MatrixHandle::density() const {
    return static_cast<double>(nnz()) / (static_cast<double>(m_) * static_cast<double>(n_));
}

void MatrixHandle::check_row(std::size_t i) const {
    if (i >= m_)
        throw std::out_of_range("row index " + std::to_string(i) + " out of range for " +
                                std::to_string(m_) + " rows");
}

double MatrixHandle::compute_row_sq(std::size_t i) const {
    double s = 0.0;
    if (storage_ == Storage::dense) {
        const double* row = dense_.data() + i * n_;
        for (std::size_t j = 0; j < n_; ++j) s += row[j] * row[j];
    } else {
        for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) s += vals_[k] * vals_[k];
    }
    return s;
}

double MatrixHandle::row_sq_norm(std::size_t i) const {
    check_row(i);
    double v = row_sq_[i].load(std::memory_order_relaxed);
    if (v >= 0.0) return v;
    v = compute_row_sq(i);
    row_sq_[i].store(v, std::memory_order_relaxed);
    return v;
}

double MatrixHandle::frobenius_sq() const {
    double f = frob_sq_.load(std::memory_order_relaxed);
    if (f >= 0.0) return f;
    f = 0.0;
    for (std::size_t i = 0; i < m_; ++i) f += row_sq_norm(i);
    frob_sq_.store(f, std::memory_order_relaxed);
    return f;
}

double MatrixHandle::min_row_sq_norm() const {
    double best = row_sq_norm(0);
    for (std::size_t i = 1; i < m_; ++i) best = std::min(best, row_sq_norm(i));
    return best;
}

std::span<const double> MatrixHandle::dense_row(std::size_t i) const {
    if (storage_ != Storage::dense) throw std::logic_error("dense_row called on CSR matrix");
    check_row(i);
    return {dense_.data() + i * n_, n_};
}

std::span<const double> MatrixHandle::dense_data() const {
    if (storage_ != Storage::dense) throw std::logic_error("dense_data called on CSR matrix");
    return {dense_.data(), dense_.size()};
}

std::span<const std::size_t> MatrixHandle::csr_row_cols(std::size_t i) const {
    if (storage_ != Storage::csr) throw std::logic_error("csr_row_cols called on dense matrix");
    check_row(i);
    return {cols_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
}

std::span<const double> MatrixHandle::csr_row_vals(std::size_t i) const {
    if (storage_ != Storage::csr) throw std::logic_error("csr_row_vals called on dense matrix");
    check_row(i);
    return {vals_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
}

double MatrixHandle::entry(std::size_t i, std::size_t j) const {
    check_row(i);
    if (j >= n_)
        throw std::out_of_range("column index " + std::to_string(j) + " out of range for " +
                                std::to_string(n_) + " columns");
    if (storage_ == Storage::dense) return dense_[i * n_ + j];
    for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k)
        if (cols_[k] == j) return vals_[k];
    return 0.0;
}

}  // namespace kaczmarz
