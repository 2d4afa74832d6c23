#include <cmath>
#include <numbers>
#include <stdexcept>

#include <doctest.h>

#include "iscat/specfun.hpp"

using iscat::cylinder_functions;

namespace {

// Independent plain-double ascending series, good to ~1e-13 for x <= 4.
double j0_series_oracle(double x) {
    const double q = 0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 40; ++k) {
        term *= -q / (static_cast<double>(k) * k);
        sum += term;
    }
    return sum;
}

double envelope(double x) { return std::sqrt(2.0 / (std::numbers::pi * x)); }

}  // namespace

TEST_CASE("rejects out-of-domain arguments") {
    CHECK_THROWS_AS(cylinder_functions(1e-12), std::domain_error);
    CHECK_THROWS_AS(cylinder_functions(0.0), std::domain_error);
    CHECK_THROWS_AS(cylinder_functions(-1.0), std::domain_error);
    CHECK_THROWS_AS(cylinder_functions(std::nan("")), std::domain_error);
    CHECK_THROWS_AS(cylinder_functions(std::numeric_limits<double>::infinity()),
                    std::domain_error);
}

TEST_CASE("J0 vanishes at its first zero") {
    const double x = 2.404825557695773;
    const auto value = cylinder_functions(x);
    CHECK(std::abs(value.j0) < 1e-9);
    CHECK(std::abs(value.j0 - j0_series_oracle(x)) < 1e-12);
}

TEST_CASE("Wronskian identity J1 Y0 - J0 Y1 = 2/(pi x) over a log sweep") {
    const int points = 1000;
    const double lo = std::log(1e-6), hi = std::log(1e4);
    for (int i = 0; i < points; ++i) {
        const double x = std::exp(lo + (hi - lo) * (i + 0.5) / points);
        const auto v = cylinder_functions(x);
        const double expected = 2.0 / (std::numbers::pi * x);
        const double wronskian = v.j1 * v.y0 - v.j0 * v.y1;
        CHECK(std::abs(wronskian - expected) <= 1e-10 * expected);
    }
}

TEST_CASE("no seam between the series and asymptotic branches") {
    const double x = 16.0;
    const double eps = 1e-9 * x;
    const auto lo = cylinder_functions(x - eps);
    const auto hi = cylinder_functions(x + eps);
    const auto mid = cylinder_functions(x);
    // derivatives: J0' = -J1, Y0' = -Y1, J1' = J0 - J1/x, Y1' = Y0 - Y1/x
    const double dj0 = -mid.j1, dy0 = -mid.y1;
    const double dj1 = mid.j0 - mid.j1 / x, dy1 = mid.y0 - mid.y1 / x;
    const double h = 2.0 * eps;
    CHECK(std::abs(hi.j0 - lo.j0 - dj0 * h) < 1e-11);
    CHECK(std::abs(hi.j1 - lo.j1 - dj1 * h) < 1e-11);
    CHECK(std::abs(hi.y0 - lo.y0 - dy0 * h) < 1e-11);
    CHECK(std::abs(hi.y1 - lo.y1 - dy1 * h) < 1e-11);
}

TEST_CASE("agrees with the standard library over a range of arguments") {
    for (const double x : {1e-6, 1e-3, 0.1, 0.5, 1.0, 2.0, 5.0, 8.0, 12.0, 15.0, 15.99,
                           16.01, 20.0, 50.0}) {
        const auto v = cylinder_functions(x);
        const double tol = 1e-9 * (1.0 + envelope(x));
        CHECK(std::abs(v.j0 - std::cyl_bessel_j(0.0, x)) <
              tol * (1.0 + std::abs(std::cyl_bessel_j(0.0, x))));
        CHECK(std::abs(v.j1 - std::cyl_bessel_j(1.0, x)) <
              tol * (1.0 + std::abs(std::cyl_bessel_j(1.0, x))));
        if (x >= 0.1) {  // Y0/Y1 blow up below; the Wronskian sweep covers that range
            CHECK(std::abs(v.y0 - std::cyl_neumann(0.0, x)) <
                  tol * (1.0 + std::abs(std::cyl_neumann(0.0, x))));
            CHECK(std::abs(v.y1 - std::cyl_neumann(1.0, x)) <
                  tol * (1.0 + std::abs(std::cyl_neumann(1.0, x))));
        }
    }
}

TEST_CASE("small-argument limits") {
    const auto v = cylinder_functions(1e-7);
    CHECK(v.j0 == doctest::Approx(1.0));
    CHECK(std::abs(v.j1) < 1e-6);
    CHECK(v.y0 < 0.0);
    CHECK(v.y1 < 0.0);
}

TEST_CASE("Hankel accessors combine the components") {
    const auto v = cylinder_functions(3.0);
    CHECK(v.h1_0() == std::complex<double>(v.j0, v.y0));
    CHECK(v.h1_1() == std::complex<double>(v.j1, v.y1));
}
