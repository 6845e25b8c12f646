#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace kaczmarz {

/// Deterministic random source used throughout the library.
///
/// All draws reduce mt19937_64 output through fixed arithmetic: uniforms take
/// the top 53 bits of one engine word, normals come from an explicit
/// Box-Muller transform. std::uniform_real_distribution and friends are
/// avoided on purpose because their engine-to-value mapping is
/// implementation-defined; with this class a seed pins the exact stream on
/// any platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();

    /// Standard normal deviate. Box-Muller produces pairs; the second value
    /// is cached, so consecutive calls consume engine words in a fixed
    /// pattern (2, 0, 2, 0, ...).
    double gaussian();

    std::vector<double> gaussian_vector(std::size_t n);

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Inverse-CDF draw over nonnegative weights: returns the smallest index i
/// with w[0] + ... + w[i] > u * (total weight), scanning in ascending index
/// order. Falls back to the last index if rounding pushes the target to the
/// total. The weights must be nonempty with a positive sum.
std::size_t inverse_cdf_pick(std::span<const double> weights, double u);

}  // namespace kaczmarz
