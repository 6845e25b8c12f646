#include "kaczmarz/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <tuple>
#include <utility>

#include "kaczmarz/kernels.hpp"
#include "kaczmarz/rng.hpp"

namespace kaczmarz {

namespace {

// Seed mix for the solution stream so a problem's x_star never replays the
// entries of gen_gaussian with the same seed (golden-ratio constant).
constexpr std::uint64_t kSolutionStreamTag = 0x9e3779b97f4a7c15ull;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

bool blank(const std::string& s) {
    return std::all_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::isspace(c) != 0; });
}

struct LineReader {
    std::istream& in;
    long line_no = 0;

    bool next(std::string& out) {
        if (!std::getline(in, out)) return false;
        ++line_no;
        if (!out.empty() && out.back() == '\r') out.pop_back();
        return true;
    }

    /// Next data line: skips blank lines and '%' comments.
    bool next_data(std::string& out) {
        while (next(out))
            if (!blank(out) && out[0] != '%') return true;
        return false;
    }
};

[[noreturn]] void fail(const std::string& msg, long line) { throw ParseError(msg, line); }

MatrixMarketHeader parse_header(LineReader& lr) {
    std::string line;
    if (!lr.next(line)) fail("empty stream; expected '%%MatrixMarket' banner", 1);
    std::istringstream banner(lower(line));
    std::string tag;
    MatrixMarketHeader h;
    banner >> tag >> h.object >> h.format >> h.field >> h.symmetry;
    if (tag != "%%matrixmarket") fail("missing '%%MatrixMarket' banner", lr.line_no);
    if (h.object != "matrix") fail("unsupported object '" + h.object + "'; expected 'matrix'",
                                   lr.line_no);
    if (h.format != "coordinate" && h.format != "array")
        fail("unsupported format '" + h.format + "'; expected 'coordinate' or 'array'",
             lr.line_no);
    if (h.field != "real" && h.field != "integer" && h.field != "pattern")
        fail("unsupported field '" + h.field + "'; complex data is out of scope", lr.line_no);
    if (h.symmetry != "general" && h.symmetry != "symmetric")
        fail("unsupported symmetry '" + h.symmetry + "'; expected 'general' or 'symmetric'",
             lr.line_no);
    if (h.format == "array" && h.field == "pattern")
        fail("array format cannot carry a pattern field", lr.line_no);

    if (!lr.next_data(line)) fail("missing size line", lr.line_no + 1);
    std::istringstream size(line);
    std::string extra;
    if (h.format == "coordinate") {
        long long m = 0, n = 0, nz = 0;
        if (!(size >> m >> n >> nz) || (size >> extra) || m < 1 || n < 1 || nz < 0)
            fail("malformed coordinate size line '" + line + "'", lr.line_no);
        h.rows = static_cast<std::size_t>(m);
        h.cols = static_cast<std::size_t>(n);
        h.nnz = static_cast<std::size_t>(nz);
    } else {
        long long m = 0, n = 0;
        if (!(size >> m >> n) || (size >> extra) || m < 1 || n < 1)
            fail("malformed array size line '" + line + "'", lr.line_no);
        h.rows = static_cast<std::size_t>(m);
        h.cols = static_cast<std::size_t>(n);
        h.nnz = h.rows * h.cols;
    }
    if (h.symmetry == "symmetric" && h.rows != h.cols)
        fail("symmetric matrix must be square, got " + std::to_string(h.rows) + "x" +
                 std::to_string(h.cols),
             lr.line_no);
    return h;
}

/// Rows with no nonzero value are diagnosed with the file's 1-based
/// numbering, matching how Matrix Market entries are written.
void check_file_rows_nonzero(std::size_t m, const std::vector<bool>& row_has_nonzero) {
    for (std::size_t i = 0; i < m; ++i)
        if (!row_has_nonzero[i])
            throw ValidationError("row " + std::to_string(i + 1) +
                                  " of the assembled matrix has no nonzero entries");
}

MatrixHandle read_coordinate(LineReader& lr, const MatrixMarketHeader& h) {
    using Triplet = std::tuple<std::size_t, std::size_t, double>;
    std::vector<Triplet> entries;
    entries.reserve(h.symmetry == "symmetric" ? 2 * h.nnz : h.nnz);

    std::string line;
    for (std::size_t k = 0; k < h.nnz; ++k) {
        if (!lr.next_data(line))
            fail("file ends after " + std::to_string(k) + " of " + std::to_string(h.nnz) +
                     " declared entries",
                 lr.line_no + 1);
        std::istringstream es(line);
        long long i = 0, j = 0;
        double v = 1.0;
        std::string extra;
        bool ok = static_cast<bool>(es >> i >> j);
        if (ok && h.field != "pattern") ok = static_cast<bool>(es >> v);
        if (!ok || (es >> extra)) fail("malformed entry '" + line + "'", lr.line_no);
        if (i < 1 || static_cast<std::size_t>(i) > h.rows)
            fail("row index " + std::to_string(i) + " outside [1, " + std::to_string(h.rows) +
                     "]",
                 lr.line_no);
        if (j < 1 || static_cast<std::size_t>(j) > h.cols)
            fail("column index " + std::to_string(j) + " outside [1, " +
                     std::to_string(h.cols) + "]",
                 lr.line_no);
        if (!std::isfinite(v)) fail("non-finite value in entry '" + line + "'", lr.line_no);
        if (h.symmetry == "symmetric" && i < j)
            fail("symmetric file must store the lower triangle only (got entry " +
                     std::to_string(i) + " " + std::to_string(j) + ")",
                 lr.line_no);
        const auto r = static_cast<std::size_t>(i - 1);
        const auto c = static_cast<std::size_t>(j - 1);
        entries.emplace_back(r, c, v);
        if (h.symmetry == "symmetric" && r != c) entries.emplace_back(c, r, v);
    }
    if (lr.next_data(line)) fail("more entries than the declared " + std::to_string(h.nnz), lr.line_no);

    // Stable by (row, col) so duplicates are summed in file order.
    std::stable_sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return std::get<0>(a) != std::get<0>(b) ? std::get<0>(a) < std::get<0>(b)
                                                : std::get<1>(a) < std::get<1>(b);
    });

    std::vector<std::size_t> offsets(h.rows + 1, 0);
    std::vector<std::size_t> cols;
    std::vector<double> vals;
    cols.reserve(entries.size());
    vals.reserve(entries.size());
    std::vector<bool> row_has_nonzero(h.rows, false);
    for (std::size_t k = 0; k < entries.size();) {
        const std::size_t r = std::get<0>(entries[k]);
        const std::size_t c = std::get<1>(entries[k]);
        double v = std::get<2>(entries[k]);
        for (++k; k < entries.size() && std::get<0>(entries[k]) == r &&
                  std::get<1>(entries[k]) == c;
             ++k)
            v += std::get<2>(entries[k]);
        cols.push_back(c);
        vals.push_back(v);
        ++offsets[r + 1];
        if (v != 0.0) row_has_nonzero[r] = true;
    }
    for (std::size_t i = 0; i < h.rows; ++i) offsets[i + 1] += offsets[i];
    check_file_rows_nonzero(h.rows, row_has_nonzero);
    return MatrixHandle::csr(h.rows, h.cols, std::move(offsets), std::move(cols),
                             std::move(vals));
}

MatrixHandle read_array(LineReader& lr, const MatrixMarketHeader& h) {
    const std::size_t m = h.rows, n = h.cols;
    std::vector<double> data(m * n, 0.0);
    std::string line;
    auto next_value = [&]() -> double {
        if (!lr.next_data(line)) fail("file ends before all array values are given", lr.line_no + 1);
        std::istringstream vs(line);
        double v = 0.0;
        std::string extra;
        if (!(vs >> v) || (vs >> extra)) fail("malformed array value '" + line + "'", lr.line_no);
        if (!std::isfinite(v)) fail("non-finite array value '" + line + "'", lr.line_no);
        return v;
    };
    if (h.symmetry == "symmetric") {
        // Lower triangle (including the diagonal), column-major.
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = j; i < m; ++i) {
                const double v = next_value();
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
    } else {
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < m; ++i) data[i * n + j] = next_value();
    }
    if (lr.next_data(line)) fail("more values than the declared " + std::to_string(m * n), lr.line_no);

    std::vector<bool> row_has_nonzero(m, false);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (data[i * n + j] != 0.0) row_has_nonzero[i] = true;
    check_file_rows_nonzero(m, row_has_nonzero);
    return MatrixHandle::dense(m, n, std::move(data));
}

void csv_field(std::ostream& out, const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        out << s;
        return;
    }
    out << '"';
    for (const char c : s) {
        if (c == '"') out << '"';
        out << c;
    }
    out << '"';
}

}  // namespace

MatrixMarketHeader read_matrix_market_header(std::istream& in) {
    LineReader lr{in};
    return parse_header(lr);
}

MatrixHandle read_matrix_market(std::istream& in) {
    LineReader lr{in};
    const MatrixMarketHeader h = parse_header(lr);
    return h.format == "coordinate" ? read_coordinate(lr, h) : read_array(lr, h);
}

MatrixHandle read_matrix_market_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open '" + path + "' for reading");
    return read_matrix_market(f);
}

void write_matrix_market(std::ostream& out, const MatrixHandle& A) {
    const std::size_t m = A.rows(), n = A.cols();
    if (A.storage() == Storage::dense) {
        out << "%%MatrixMarket matrix array real general\n" << m << ' ' << n << '\n';
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < m; ++i) out << fmt17(A.dense_row(i)[j]) << '\n';
    } else {
        out << "%%MatrixMarket matrix coordinate real general\n"
            << m << ' ' << n << ' ' << A.nnz() << '\n';
        for (std::size_t i = 0; i < m; ++i) {
            auto cols = A.csr_row_cols(i);
            auto vals = A.csr_row_vals(i);
            for (std::size_t k = 0; k < vals.size(); ++k)
                out << i + 1 << ' ' << cols[k] + 1 << ' ' << fmt17(vals[k]) << '\n';
        }
    }
    if (!out) throw IoError("write failure while emitting Matrix Market data");
}

void write_matrix_market_file(const std::string& path, const MatrixHandle& A) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    write_matrix_market(f, A);
    f.flush();
    if (!f) throw IoError("write failure on '" + path + "'");
}

MatrixHandle gen_gaussian(std::size_t m, std::size_t n, std::uint64_t seed) {
    if (m < 1 || n < 1)
        throw ParamError("matrix dimensions must be at least 1x1, got " + std::to_string(m) +
                         "x" + std::to_string(n));
    Rng rng(seed);
    std::vector<double> data(m * n);
    for (double& v : data) v = rng.gaussian();  // row-major fill order
    return MatrixHandle::dense(m, n, std::move(data));
}

Problem make_consistent_problem(MatrixHandle A, std::uint64_t seed, std::string label) {
    Rng rng(seed ^ kSolutionStreamTag);
    Vector x_star = rng.gaussian_vector(A.cols());
    Vector b(A.rows());
    kernels::matvec(A, x_star, b);
    return make_problem(std::move(A), std::move(b), std::move(x_star), {}, std::move(label));
}

void write_vector_csv(std::ostream& out, std::span<const double> v) {
    out << "value\n";
    for (const double x : v) out << fmt17(x) << '\n';
    if (!out) throw IoError("write failure while emitting vector CSV");
}

Vector read_vector_csv(std::istream& in) {
    LineReader lr{in};
    std::string line;
    if (!lr.next(line)) fail("empty stream; expected 'value' header", 1);
    if (line != "value") fail("expected header 'value', got '" + line + "'", lr.line_no);
    Vector v;
    while (lr.next(line)) {
        if (blank(line)) continue;
        std::istringstream vs(line);
        double x = 0.0;
        std::string extra;
        if (!(vs >> x) || (vs >> extra)) fail("malformed value '" + line + "'", lr.line_no);
        v.push_back(x);
    }
    return v;
}

void write_report_csv(std::ostream& out, const BenchTable& table) {
    out << "label,m,n,density,method,theta,mean_IT,mean_CPU_seconds,"
           "IT_speedup_1,IT_speedup_2,CPU_speedup_1,CPU_speedup_2\n";
    for (const BenchRow& row : table.rows) {
        csv_field(out, row.label);
        out << ',' << row.m << ',' << row.n << ',' << fmt6(row.density) << ','
            << method_name(row.method) << ',';
        if (row.theta) out << fmt6(*row.theta);
        out << ',' << fmt6(row.mean_iterations) << ',' << fmt6(row.mean_cpu_seconds) << ',';
        if (row.it_speedup_1) out << fmt6(*row.it_speedup_1);
        out << ',';
        if (row.it_speedup_2) out << fmt6(*row.it_speedup_2);
        out << ',';
        if (row.cpu_speedup_1) out << fmt6(*row.cpu_speedup_1);
        out << ',';
        if (row.cpu_speedup_2) out << fmt6(*row.cpu_speedup_2);
        out << '\n';
    }
    if (!out) throw IoError("write failure while emitting benchmark CSV");
}

}  // namespace kaczmarz
