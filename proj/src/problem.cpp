#include "kaczmarz/problem.hpp"

#include <cmath>
#include <utility>

#include "kaczmarz/kernels.hpp"

namespace kaczmarz {

namespace {

void check_finite(const Vector& v, const char* name) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!std::isfinite(v[i]))
            throw ValidationError(std::string(name) + " has a non-finite entry at index " +
                                  std::to_string(i));
}

}  // namespace

Problem make_problem(MatrixHandle A, Vector b, std::optional<Vector> x_star, Vector x0,
                     std::string label) {
    const std::size_t m = A.rows();
    const std::size_t n = A.cols();
    if (b.size() != m)
        throw ShapeError("b has size " + std::to_string(b.size()) + ", expected " +
                         std::to_string(m));
    check_finite(b, "b");
    if (x0.empty()) x0.assign(n, 0.0);
    if (x0.size() != n)
        throw ShapeError("x0 has size " + std::to_string(x0.size()) + ", expected " +
                         std::to_string(n));
    check_finite(x0, "x0");
    if (x_star) {
        if (x_star->size() != n)
            throw ShapeError("x_star has size " + std::to_string(x_star->size()) + ", expected " +
                             std::to_string(n));
        check_finite(*x_star, "x_star");
        Vector ax(m);
        kernels::matvec(A, *x_star, ax);
        const double gap = std::sqrt(kernels::dist_sq(ax, b));
        const double bnorm = std::sqrt(kernels::sum_sq(b));
        if (gap > 1e-10 * std::max(1.0, bnorm))
            throw ValidationError("x_star does not solve the system: ||A x_star - b|| = " +
                                  std::to_string(gap));
    }
    return Problem{std::move(A), std::move(b), std::move(x_star), std::move(x0),
                   std::move(label)};
}

}  // namespace kaczmarz
