#pragma once

#include <cstddef>
#include <span>

#include "kaczmarz/matrix.hpp"

namespace kaczmarz::kernels {

/// Execution policy for the data-parallel kernels. The OpenMP variants
/// parallelize over whole rows and never split a summation, so their results
/// are bit-identical to the serial reference; tests assert exact equality.
/// When the build has no OpenMP support, openmp degrades to serial.
enum class Exec { serial, openmp };

/// Dot product of row i with x. One shared implementation backs this and the
/// residual/matvec kernels so the same row always contracts in the same
/// order, bit for bit.
double row_dot(const MatrixHandle& A, std::size_t i, std::span<const double> x);

/// x += s * (row i of A).
void row_axpy(const MatrixHandle& A, std::size_t i, double s, std::span<double> x);

/// r = b - A*x.
void residual(const MatrixHandle& A, std::span<const double> b, std::span<const double> x,
              std::span<double> r, Exec exec = Exec::serial);

/// y = A*x.
void matvec(const MatrixHandle& A, std::span<const double> x, std::span<double> y,
            Exec exec = Exec::serial);

/// Force the squared-row-norm cache for every row of A.
void fill_row_sq_norms(const MatrixHandle& A, Exec exec = Exec::serial);

struct MaxAbsResult {
    double value;       ///< max_i |r[i]|
    std::size_t index;  ///< smallest index attaining it
};

/// Maximum absolute entry with first-index tie-breaking. Max-reductions are
/// order-insensitive (no rounding), so this kernel has a true parallel path.
MaxAbsResult max_abs(std::span<const double> r, Exec exec = Exec::serial);

/// Sum of squares of r. Kept serial on purpose: a parallel reduction would
/// reassociate the sum and change low-order bits between runs.
double sum_sq(std::span<const double> r);

/// Squared Euclidean distance between two equal-length vectors; serial for
/// the same reason as sum_sq.
double dist_sq(std::span<const double> a, std::span<const double> b);

}  // namespace kaczmarz::kernels
