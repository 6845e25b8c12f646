#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "kaczmarz/error.hpp"
#include "kaczmarz/rng.hpp"

using kaczmarz::Rng;

TEST_CASE("uniform draws follow the documented mt19937_64 mapping") {
    Rng rng(42);
    std::mt19937_64 engine(42);
    for (int i = 0; i < 100; ++i) {
        const double expected = static_cast<double>(engine() >> 11) * 0x1.0p-53;
        CHECK(rng.uniform() == expected);
    }
}

TEST_CASE("uniform stays in [0, 1) with the right mean") {
    Rng rng(7);
    double sum = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("gaussian pairs come from the documented Box-Muller transform") {
    // First pair: u1 from the first engine word (shifted into (0, 1]), u2
    // from the second; the two outputs share the radius.
    std::mt19937_64 engine(123);
    const double u1 = (static_cast<double>(engine() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double z0 = radius * std::cos(2.0 * M_PI * u2);
    const double z1 = radius * std::sin(2.0 * M_PI * u2);

    Rng rng(123);
    CHECK(rng.gaussian() == z0);
    CHECK(rng.gaussian() == z1);
}

TEST_CASE("gaussian moments and determinism") {
    Rng a(99), b(99);
    double sum = 0.0, sq = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double z = a.gaussian();
        CHECK(z == b.gaussian());
        sum += z;
        sq += z * z;
    }
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    CHECK(std::fabs(mean) < 0.03);
    CHECK(var == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("gaussian_vector matches sequential draws") {
    Rng a(5), b(5);
    const std::vector<double> v = a.gaussian_vector(17);
    REQUIRE(v.size() == 17);
    for (const double z : v) CHECK(z == b.gaussian());
}

TEST_CASE("inverse_cdf_pick splits [0,1) by cumulative weight") {
    const std::vector<double> w{1.0, 3.0};
    CHECK(kaczmarz::inverse_cdf_pick(w, 0.0) == 0);
    CHECK(kaczmarz::inverse_cdf_pick(w, 0.2499) == 0);
    // At exactly the boundary the first cumulative (1.0) is not > 1.0.
    CHECK(kaczmarz::inverse_cdf_pick(w, 0.25) == 1);
    CHECK(kaczmarz::inverse_cdf_pick(w, 0.999) == 1);

    const std::vector<double> single{2.5};
    CHECK(kaczmarz::inverse_cdf_pick(single, 0.9999) == 0);
}

TEST_CASE("inverse_cdf_pick empirical frequencies") {
    const std::vector<double> w{1.0, 1.0, 2.0};
    Rng rng(11);
    int counts[3] = {0, 0, 0};
    const int n = 40000;
    for (int i = 0; i < n; ++i) ++counts[kaczmarz::inverse_cdf_pick(w, rng.uniform())];
    CHECK(static_cast<double>(counts[0]) / n == doctest::Approx(0.25).epsilon(0.05));
    CHECK(static_cast<double>(counts[1]) / n == doctest::Approx(0.25).epsilon(0.05));
    CHECK(static_cast<double>(counts[2]) / n == doctest::Approx(0.50).epsilon(0.05));
}

TEST_CASE("inverse_cdf_pick rejects degenerate inputs") {
    CHECK_THROWS_AS(kaczmarz::inverse_cdf_pick({}, 0.5), std::logic_error);
    const std::vector<double> zeros{0.0, 0.0};
    CHECK_THROWS_AS(kaczmarz::inverse_cdf_pick(zeros, 0.5), std::logic_error);
}
