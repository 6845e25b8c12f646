#pragma once

#include <optional>
#include <string>

#include "kaczmarz/matrix.hpp"

namespace kaczmarz {

/// A linear system A x = b to solve, optionally with a known solution used
/// for error tracking and the relative-solution-error stopping rule.
///
/// Build instances with make_problem, which validates the shapes, checks all
/// vectors are finite, and (when x_star is present) verifies consistency:
/// ||A x_star - b||_2 <= 1e-10 * max(1, ||b||_2). Like MatrixHandle this
/// type is move-only.
struct Problem {
    MatrixHandle A;
    Vector b;
    std::optional<Vector> x_star;
    Vector x0;  ///< start iterate; zeros(n) unless the caller overrides it
    std::string label;
};

Problem make_problem(MatrixHandle A, Vector b, std::optional<Vector> x_star = std::nullopt,
                     Vector x0 = {}, std::string label = {});

}  // namespace kaczmarz
