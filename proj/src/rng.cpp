#include "kaczmarz/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kaczmarz {

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // u1 lies in (0, 1] so the logarithm stays finite; u2 in [0, 1).
    const double u1 = static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
    const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

std::vector<double> Rng::gaussian_vector(std::size_t n) {
    std::vector<double> out(n);
    for (auto& v : out) v = gaussian();
    return out;
}

std::size_t inverse_cdf_pick(std::span<const double> weights, double u) {
    if (weights.empty()) throw std::logic_error("inverse_cdf_pick: empty weight vector");
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0)) throw std::logic_error("inverse_cdf_pick: weights must have positive sum");
    const double target = u * total;
    double cum = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        cum += weights[i];
        if (cum > target) return i;
    }
    return weights.size() - 1;
}

}  // namespace kaczmarz
