#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "fgig/distributions.hpp"
#include "fgig/errors.hpp"
#include "fgig/quadrature.hpp"
#include "fgig/rng.hpp"

using namespace fgig;
using dist::FreeGigParams;
using dist::MarchenkoPasturParams;
using complex = std::complex<double>;

namespace {

const std::vector<FreeGigParams> kSweep = {
    {2.0, 1.0, 1.0}, {3.0, 2.0, 0.5}, {1.5, 1.0, 2.0}};

} // namespace

TEST_CASE("closed-form support of mu(0,1,1)") {
    const auto s = dist::solve_support(FreeGigParams{0.0, 1.0, 1.0});
    CHECK(std::abs(s.a - (2.0 - std::sqrt(3.0))) < 1e-12);
    CHECK(std::abs(s.b - (2.0 + std::sqrt(3.0))) < 1e-12);
}

TEST_CASE("support residuals across a parameter grid") {
    for (double la : {-3.0, -1.0, 0.0, 2.0, 4.0})
        for (double al : {0.5, 1.0, 2.0, 4.0, 8.0})
            for (double be : {0.5, 1.0, 2.0, 4.0, 8.0}) {
                const auto s = dist::solve_support(FreeGigParams{la, al, be});
                CHECK(s.a > 0.0);
                CHECK(s.b > s.a);
                CHECK(std::abs(s.residual1) < 1e-10);
                CHECK(std::abs(s.residual2) < 1e-10);
            }
}

TEST_CASE("support of the inverse law is the reciprocal interval") {
    for (const auto& p : kSweep) {
        const auto s = dist::solve_support(p);
        const auto si = dist::solve_support(dist::invert_params(p));
        CHECK(std::abs(si.a - 1.0 / s.b) < 1e-12 * (1.0 + 1.0 / s.b));
        CHECK(std::abs(si.b - 1.0 / s.a) < 1e-12 * (1.0 + 1.0 / s.a));
    }
}

TEST_CASE("density integrates to one") {
    for (const auto& p : kSweep)
        CHECK(std::abs(dist::fgig_moment(p, 0) - 1.0) < 1e-10);
    for (double la : {-2.5, 0.0, 4.0})
        CHECK(std::abs(dist::fgig_moment(FreeGigParams{la, 3.0, 0.7}, 0) - 1.0) < 1e-10);
}

TEST_CASE("density is nonnegative and vanishes at the edges") {
    for (const auto& p : kSweep) {
        const auto s = dist::solve_support(p);
        CHECK(dist::fgig_density(p, s, s.a) == 0.0);
        CHECK(dist::fgig_density(p, s, s.b) == 0.0);
        CHECK(dist::fgig_density(p, s, s.a - 0.1) == 0.0);
        for (int i = 1; i < 40; ++i) {
            const double x = s.a + (s.b - s.a) * i / 40.0;
            CHECK(dist::fgig_density(p, s, x) >= 0.0);
        }
    }
}

TEST_CASE("closed-form mean") {
    for (const auto& p : kSweep)
        CHECK(std::abs(dist::fgig_mean(p) - dist::fgig_moment(p, 1)) < 1e-10);
}

TEST_CASE("gamma constant closed case and inverse-moment identity") {
    // At (0,1,1): a b = 1, a + b = 4, so
    // gamma = (1*1 + 1/1 - 2*(4/1 - 1) - 1) / 4 = (2 - 6 - 1)/4 = -5/4.
    const auto p0 = FreeGigParams{0.0, 1.0, 1.0};
    const auto s0 = dist::solve_support(p0);
    CHECK(std::abs(dist::gamma_const(p0, s0).value + 1.25) < 1e-12);
    // For lambda > 1 the first inverse moment equals -gamma.
    for (const auto& p : kSweep) {
        const auto s = dist::solve_support(p);
        CHECK(std::abs(dist::fgig_moment(p, -1) + dist::gamma_const(p, s).value) < 1e-10);
    }
}

TEST_CASE("self-inverse law has symmetric moments") {
    const auto p = FreeGigParams{0.0, 1.0, 1.0}; // inverse law is itself
    CHECK(std::abs(dist::fgig_moment(p, 1) - dist::fgig_moment(p, -1)) < 1e-10);
    CHECK(std::abs(dist::fgig_moment(p, 2) - dist::fgig_moment(p, -2)) < 1e-10);
}

TEST_CASE("Cauchy transform behaves like 1/z at infinity") {
    for (const auto& p : kSweep) {
        const auto s = dist::solve_support(p);
        const complex z6(0.0, 1e6);
        CHECK(std::abs(z6 * dist::fgig_cauchy(p, s, z6) - 1.0) < 1e-5);
        const complex z7(0.0, 1e7);
        CHECK(std::abs(z7 * dist::fgig_cauchy(p, s, z7) - 1.0) < 1e-6);
    }
}

TEST_CASE("Cauchy transform maps the upper half-plane down and is real off support") {
    const auto p = kSweep[0];
    const auto s = dist::solve_support(p);
    for (double x : {0.5, 2.0, 6.0})
        for (double y : {0.1, 1.0, 4.0})
            CHECK(dist::fgig_cauchy(p, s, complex(x, y)).imag() < 0.0);
    const complex left = dist::fgig_cauchy(p, s, complex(s.a * 0.5, 0.0));
    const complex right = dist::fgig_cauchy(p, s, complex(s.b * 2.0, 0.0));
    CHECK(std::abs(left.imag()) < 1e-12);
    CHECK(std::abs(right.imag()) < 1e-12);
    CHECK(left.real() < 0.0);  // left of a positive law
    CHECK(right.real() > 0.0);
    CHECK_THROWS_AS(dist::fgig_cauchy(p, s, complex(0.5 * (s.a + s.b), 0.0)), SingularityError);
}

TEST_CASE("boundary values of the Cauchy transform recover the density") {
    for (const auto& p : kSweep) {
        const auto s = dist::solve_support(p);
        for (int i = 2; i <= 8; ++i) {
            const double x = s.a + (s.b - s.a) * i / 10.0;
            const double from_g = -dist::fgig_cauchy(p, s, complex(x, 1e-8)).imag() /
                                  std::numbers::pi;
            CHECK(std::abs(from_g - dist::fgig_density(p, s, x)) < 1e-5);
        }
    }
}

TEST_CASE("R-transform at the origin is the mean") {
    for (const auto& p : kSweep) {
        const auto s = dist::solve_support(p);
        const auto ev = dist::make_rtransform(p, s);
        CHECK(ev.radius > 0.0);
        CHECK(std::abs(ev(complex(0.0, 0.0)) - dist::fgig_mean(p)) < 1e-12);
    }
}

TEST_CASE("R and Cauchy transforms are mutually inverse") {
    for (const auto& p : kSweep) {
        const auto s = dist::solve_support(p);
        const auto ev = dist::make_rtransform(p, s);
        // |z| small enough that r(z) + 1/z stays far outside the support; at
        // larger |z| the argument can cross [a, b], where the identity has no
        // meaning. 1/0.05 = 20 clears every b in the sweep.
        const double rho = std::min(0.05, 0.5 * ev.radius);
        for (int j = 0; j < 8; ++j) {
            const double th = 2.0 * std::numbers::pi * j / 8.0;
            const complex z = rho * complex(std::cos(th), std::sin(th));
            const complex back = dist::fgig_cauchy(p, s, ev(z) + 1.0 / z);
            CHECK(std::abs(back - z) < 1e-10 * (1.0 + std::abs(z)));
        }
        for (double x : {1.0, 3.0})
            for (double y : {0.5, 2.0}) {
                const complex z(x, y);
                const complex g = dist::fgig_cauchy(p, s, z);
                CHECK(std::abs(ev(g) + 1.0 / g - z) < 1e-9 * (1.0 + std::abs(z)));
            }
    }
}

TEST_CASE("CDF is monotone with the right limits") {
    const auto p = kSweep[1];
    const auto s = dist::solve_support(p);
    CHECK(dist::fgig_cdf(p, s, s.a - 0.5) == 0.0);
    CHECK(dist::fgig_cdf(p, s, s.b + 0.5) == 1.0);
    double prev = 0.0;
    for (int i = 0; i <= 30; ++i) {
        const double x = s.a + (s.b - s.a) * i / 30.0;
        const double c = dist::fgig_cdf(p, s, x);
        CHECK(c >= prev - 1e-12);
        prev = c;
    }
    CHECK(std::abs(dist::fgig_cdf(p, s, s.b) - 1.0) < 1e-9);
}

TEST_CASE("spectrum sampler is deterministic and matches the law") {
    const auto p = kSweep[0];
    const auto s = dist::solve_support(p);
    RngStream s1(99), s2(99), s3(100);
    const auto d1 = dist::sample_spectrum(p, 512, s1);
    const auto d2 = dist::sample_spectrum(p, 512, s2);
    const auto d3 = dist::sample_spectrum(p, 512, s3);
    CHECK(d1 == d2);
    CHECK(d1 != d3);
    for (double x : d1) {
        CHECK(x >= s.a);
        CHECK(x <= s.b);
    }

    RngStream big(2024);
    auto draws = dist::sample_spectrum(p, 20000, big);
    double mean = 0.0;
    for (double x : draws) mean += x;
    mean /= static_cast<double>(draws.size());
    const double m1 = dist::fgig_moment(p, 1), m2 = dist::fgig_moment(p, 2);
    const double se = std::sqrt((m2 - m1 * m1) / static_cast<double>(draws.size()));
    CHECK(std::abs(mean - m1) < 4.0 * se);

    std::sort(draws.begin(), draws.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < draws.size(); ++i) {
        const double F = dist::fgig_cdf(p, s, draws[i]);
        ks = std::max(ks, std::abs(F - (static_cast<double>(i) + 1.0) / draws.size()));
        ks = std::max(ks, std::abs(F - static_cast<double>(i) / draws.size()));
    }
    CHECK(ks < 0.02);
}

TEST_CASE("vanishing beta degenerates to Marchenko-Pastur") {
    const FreeGigParams p{1.5, 1.0, 1e-6};
    const MarchenkoPasturParams q{1.5, 1.0};
    const auto s = dist::solve_support(p);
    const auto [qa, qb] = dist::mp_support(q);
    CHECK(std::abs(s.a - qa) < 1e-2);
    CHECK(std::abs(s.b - qb) < 1e-2);
    for (double x : {1.0, 2.0, 3.5, 4.5})
        CHECK(std::abs(dist::fgig_density(p, s, x) - dist::mp_density(q, x).continuous) < 1e-3);
}

TEST_CASE("Marchenko-Pastur basics") {
    for (double rate : {0.5, 1.0, 2.0}) {
        const MarchenkoPasturParams p{rate, 1.0};
        CHECK(std::abs(dist::mp_moment(p, 0) - 1.0) < 1e-8);           // total mass with atom
        CHECK(std::abs(dist::mp_moment(p, 1) - rate) < 1e-10);         // mean = rate * jump
        CHECK(std::abs(dist::mp_moment(p, 2) - (rate + rate * rate)) < 1e-9);
        CHECK(dist::mp_density(p, -0.5).continuous == 0.0);
    }
    const MarchenkoPasturParams half{0.5, 1.0};
    CHECK(dist::mp_density(half, 0.0).atom_at_zero == 0.5);
    CHECK_THROWS_AS(dist::mp_moment(half, -1), DomainError);
    const MarchenkoPasturParams two{2.0, 1.0};
    CHECK(std::abs(dist::mp_moment(two, -1) - 1.0) < 1e-10); // 1/(jump (rate-1))
}

TEST_CASE("Marchenko-Pastur transforms") {
    const MarchenkoPasturParams p{2.0, 1.0};
    const complex z6(0.0, 1e6);
    CHECK(std::abs(z6 * dist::mp_cauchy(p, z6) - 1.0) < 1e-5);
    CHECK(std::abs(dist::mp_cauchy(p, complex(0.0, 0.0)) - complex(-1.0, 0.0)) < 1e-12);
    // r(z) = rate jump / (1 - jump z) and the inversion identity
    for (const complex z : {complex(0.05, 0.0), complex(0.02, 0.03)}) {
        CHECK(std::abs(dist::mp_rtransform(p, z) - 2.0 / (1.0 - z)) < 1e-14);
        const complex back = dist::mp_cauchy(p, dist::mp_rtransform(p, z) + 1.0 / z);
        CHECK(std::abs(back - z) < 1e-10);
    }
    // cumulants
    const auto r = dist::mp_cumulants(MarchenkoPasturParams{0.5, 2.0}, 4);
    CHECK(r[0] == 1.0);
    CHECK(r[1] == 2.0);
    CHECK(r[2] == 4.0);
    CHECK(r[3] == 8.0);
}

TEST_CASE("Marchenko-Pastur CDF") {
    const MarchenkoPasturParams half{0.5, 1.0};
    CHECK(dist::mp_cdf(half, -1.0) == 0.0);
    CHECK(std::abs(dist::mp_cdf(half, 0.0) - 0.5) < 1e-12); // the atom
    CHECK(std::abs(dist::mp_cdf(half, 10.0) - 1.0) < 1e-12);
    const MarchenkoPasturParams two{2.0, 1.0};
    const auto [a, b] = dist::mp_support(two);
    CHECK(dist::mp_cdf(two, a * 0.5) == 0.0);
    CHECK(std::abs(dist::mp_cdf(two, b) - 1.0) < 1e-8);
    double prev = 0.0;
    for (int i = 0; i <= 20; ++i) {
        const double x = a + (b - a) * i / 20.0;
        const double c = dist::mp_cdf(two, x);
        CHECK(c >= prev - 1e-12);
        prev = c;
    }
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(dist::validate(FreeGigParams{1.0, -1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(dist::validate(FreeGigParams{1.0, 1.0, 0.0}), DomainError);
    CHECK_THROWS_AS(dist::validate(MarchenkoPasturParams{-0.5, 1.0}), DomainError);
    CHECK_THROWS_AS(dist::validate(MarchenkoPasturParams{1.0, 0.0}), DomainError);
    CHECK_THROWS_AS(dist::fgig_moment(FreeGigParams{2.0, 1.0, 1.0}, 33), DomainError);
}
