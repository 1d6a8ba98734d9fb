#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fgig/errors.hpp"
#include "fgig/quadrature.hpp"

using namespace fgig;

TEST_CASE("gauss_legendre nodes and weights") {
    for (int n : {2, 8, 16, 64}) {
        const auto rule = quad::gauss_legendre(n);
        REQUIRE(rule.x.size() == static_cast<std::size_t>(n));
        double wsum = 0.0;
        for (double w : rule.w) wsum += w;
        CHECK(std::abs(wsum - 2.0) < 1e-14);
        // symmetry of the nodes about 0
        for (int i = 0; i < n; ++i)
            CHECK(std::abs(rule.x[static_cast<std::size_t>(i)] +
                           rule.x[static_cast<std::size_t>(n - 1 - i)]) < 1e-14);
    }
}

TEST_CASE("polynomials integrate exactly") {
    const double i2 = quad::integrate([](double x) { return x * x; }, 0.0, 1.0, 2);
    CHECK(std::abs(i2 - 1.0 / 3.0) < 1e-15);
    const double i5 = quad::integrate([](double x) { return x * x * x * x * x; }, -1.0, 1.0, 8);
    CHECK(std::abs(i5) < 1e-15);
    // degree 2n-1 exactness boundary: x^3 with n = 2
    const double i3 = quad::integrate([](double x) { return x * x * x; }, 0.0, 2.0, 2);
    CHECK(std::abs(i3 - 4.0) < 1e-13);
}

TEST_CASE("adaptive integration of smooth functions") {
    const double e1 = quad::integrate_adaptive([](double x) { return std::exp(x); }, 0.0, 1.0, 1e-13);
    CHECK(std::abs(e1 - (std::numbers::e - 1.0)) < 1e-12);
    const double s = quad::integrate_adaptive([](double x) { return std::sin(x); }, 0.0,
                                              std::numbers::pi, 1e-13);
    CHECK(std::abs(s - 2.0) < 1e-12);
    // oscillatory but resolvable
    const double o = quad::integrate_adaptive([](double x) { return std::cos(40.0 * x); }, 0.0,
                                              1.0, 1e-12);
    CHECK(std::abs(o - std::sin(40.0) / 40.0) < 1e-11);
}

TEST_CASE("adaptive integration refuses a non-integrable singularity") {
    CHECK_THROWS_AS(quad::integrate_adaptive([](double x) { return 1.0 / x; }, 0.0, 1.0, 1e-10),
                    QuadratureError);
}
