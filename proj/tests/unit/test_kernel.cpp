#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "tvscb/kernel.hpp"

using namespace tvscb;
using Catch::Matchers::WithinAbs;

TEST_CASE("epanechnikov moments match closed forms") {
    const Kernel k = Kernel::epanechnikov();
    CHECK_THAT(kernel_moment(k, 0), WithinAbs(1.0, 1e-10));
    CHECK_THAT(kernel_moment(k, 1), WithinAbs(0.0, 1e-12));
    CHECK_THAT(kernel_moment(k, 2), WithinAbs(0.2, 1e-10));
    CHECK_THAT(kernel_moment(k, 0, true), WithinAbs(0.6, 1e-10));
    CHECK_THAT(kernel_derivative_energy(k), WithinAbs(1.5, 1e-10));
}

TEST_CASE("jackknife kernel is fourth order") {
    const Kernel kt = Kernel::jackknife();
    CHECK_THAT(kernel_moment(kt, 0), WithinAbs(1.0, 1e-10));
    CHECK_THAT(kernel_moment(kt, 2), WithinAbs(0.0, 1e-10));
    // 2 sqrt2 K(sqrt2 x) - K(x) at 0: (2 sqrt2 - 1) * 3/4
    CHECK_THAT(kt(0.0), WithinAbs((2.0 * std::sqrt(2.0) - 1.0) * 0.75, 1e-14));
    CHECK(kt(0.9) == -Kernel::epanechnikov()(0.9));
}

TEST_CASE("uniform kernel") {
    const Kernel u = Kernel::uniform();
    CHECK_THAT(kernel_moment(u, 0), WithinAbs(1.0, 1e-10));
    CHECK_THAT(kernel_moment(u, 2), WithinAbs(1.0 / 3.0, 1e-10));
}

TEST_CASE("interval moments agree with quadrature") {
    const Kernel k = Kernel::epanechnikov();
    for (int j = 0; j <= 4; ++j) {
        for (double lo : {-1.0, -0.7, -0.2}) {
            for (double hi : {0.1, 0.5, 1.0}) {
                const double q = integrate([&](double x) { return k(x) * std::pow(x, j); }, lo, hi);
                CHECK_THAT(interval_moment(k, j, lo, hi), WithinAbs(q, 1e-10));
            }
        }
    }
}

TEST_CASE("boundary factor is one in the interior and small at the edge") {
    const Kernel k = Kernel::epanechnikov();
    CHECK_THAT(boundary_factor(k, 0, 0.2, 0.5), WithinAbs(1.0, 1e-12));
    CHECK_THAT(boundary_factor(k, 0, 0.2, 0.2), WithinAbs(1.0, 1e-12));
    const double edge = boundary_factor(k, 0, 0.2, 0.001);
    CHECK(edge > 0.0);
    CHECK(edge < 0.5);
    // at t = 0 the window is [0, 1]: (mu0 mu2 - mu1^2) / mu2 with half moments
    const double m0 = 0.5, m1 = 3.0 / 16.0, m2 = 0.1;
    CHECK_THAT(boundary_factor(k, 0, 0.3, 0.0), WithinAbs((m0 * m2 - m1 * m1) / m2, 1e-12));
}

TEST_CASE("gumbel constants for s = 1, b = 0.1") {
    const GumbelConstants g = gumbel_constants(Kernel::epanechnikov(), 1, 0.1);
    const double ck = std::sqrt(1.5 / (0.6 * std::numbers::pi)) / std::sqrt(std::numbers::pi);
    const double r = std::sqrt(2.0 * std::log(10.0));
    CHECK_THAT(g.C_K, WithinAbs(ck, 1e-9));
    CHECK_THAT(g.B, WithinAbs(r + (std::log(ck) - std::log(2.0)) / r, 1e-9));
    CHECK_THAT(g.B, WithinAbs(1.503, 1e-3));
    CHECK_THAT(g.C_K, WithinAbs(0.5033, 1e-4));
}

TEST_CASE("gumbel constants reject bad input") {
    CHECK_THROWS_AS(gumbel_constants(Kernel::epanechnikov(), 0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(gumbel_constants(Kernel::epanechnikov(), 1, 1.0), std::invalid_argument);
}

TEST_CASE("custom kernel goes through quadrature") {
    const Kernel tri = Kernel::custom([](double x) { return std::abs(x) <= 1 ? 1 - std::abs(x) : 0.0; },
                                      [](double x) { return std::abs(x) <= 1 ? (x < 0 ? 1.0 : -1.0) : 0.0; },
                                      {0.0}, "triangular");
    CHECK_THAT(kernel_moment(tri, 0), WithinAbs(1.0, 1e-10));
    CHECK_THAT(kernel_moment(tri, 2), WithinAbs(1.0 / 6.0, 1e-10));
    CHECK_THAT(interval_moment(tri, 0, 0.0, 1.0), WithinAbs(0.5, 1e-10));
}
