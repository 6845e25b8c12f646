#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>

#include "kaczmarz/bench.hpp"
#include "kaczmarz/matrix.hpp"
#include "kaczmarz/problem.hpp"

namespace kaczmarz {

/// Parsed Matrix Market banner plus the size line.
/// Supported: object "matrix", format "coordinate" or "array", field "real",
/// "integer" or "pattern", symmetry "general" or "symmetric". nnz is the
/// declared entry count for coordinate files and m*n for array files.
struct MatrixMarketHeader {
    std::string object;
    std::string format;
    std::string field;
    std::string symmetry;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t nnz = 0;
};

/// Parse the banner, comments and size line, leaving the stream at the first
/// entry. Errors carry 1-based line numbers.
MatrixMarketHeader read_matrix_market_header(std::istream& in);

/// Read a full Matrix Market matrix into CSR (coordinate files) or dense
/// (array files) storage. Symmetric storage is expanded by mirroring
/// off-diagonal entries, pattern entries get the value 1.0, 1-based indices
/// become 0-based, and duplicate coordinate entries are summed. A row left
/// without any nonzero entry after assembly is reported with the file's
/// 1-based row number.
MatrixHandle read_matrix_market(std::istream& in);
MatrixHandle read_matrix_market_file(const std::string& path);

/// Write dense matrices in array format, CSR matrices in coordinate format,
/// both "real general" with 17 significant digits (value round-trip exact).
void write_matrix_market(std::ostream& out, const MatrixHandle& A);
void write_matrix_market_file(const std::string& path, const MatrixHandle& A);

/// Dense m x n matrix of i.i.d. standard normals drawn row-major from
/// Rng(seed) (Box-Muller; see rng.hpp). Same seed, same matrix, bit for bit.
MatrixHandle gen_gaussian(std::size_t m, std::size_t n, std::uint64_t seed);

/// Consistent problem in the benchmark style: x_star of i.i.d. standard
/// normals, b = A x_star, x0 = 0. The solution stream is decorrelated from
/// gen_gaussian(seed) by a fixed internal seed mix, so gen_gaussian(m, n, s)
/// and make_consistent_problem(A, s) never share draws.
Problem make_consistent_problem(MatrixHandle A, std::uint64_t seed, std::string label = {});

/// One-column CSV with header "value", 17 significant digits.
void write_vector_csv(std::ostream& out, std::span<const double> v);
Vector read_vector_csv(std::istream& in);

/// Benchmark table as CSV: fixed header
///   label,m,n,density,method,theta,mean_IT,mean_CPU_seconds,
///   IT_speedup_1,IT_speedup_2,CPU_speedup_1,CPU_speedup_2
/// with '\n' line endings, '.' decimal separator and 6 significant digits.
/// theta and absent ratios render as empty fields.
void write_report_csv(std::ostream& out, const BenchTable& table);

}  // namespace kaczmarz
