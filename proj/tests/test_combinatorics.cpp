#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "fgig/combinatorics.hpp"
#include "fgig/errors.hpp"
#include "fgig/rng.hpp"

using namespace fgig;

namespace {

nc::SetPartition make_partition(int n, std::vector<std::vector<int>> blocks) {
    nc::SetPartition p;
    p.n = n;
    p.blocks = std::move(blocks);
    return p;
}

std::string key_of(const nc::SetPartition& p) {
    std::string s;
    for (const auto& b : p.blocks) {
        for (int e : b) s += std::to_string(e) + ",";
        s += "|";
    }
    return s;
}

// All set partitions of {1..n} via restricted growth strings.
std::vector<nc::SetPartition> all_partitions(int n) {
    std::vector<nc::SetPartition> out;
    std::vector<int> rgs(static_cast<std::size_t>(n), 0);
    for (;;) {
        int nblocks = 0;
        for (int v : rgs) nblocks = std::max(nblocks, v + 1);
        nc::SetPartition p;
        p.n = n;
        p.blocks.assign(static_cast<std::size_t>(nblocks), {});
        for (int i = 0; i < n; ++i)
            p.blocks[static_cast<std::size_t>(rgs[static_cast<std::size_t>(i)])].push_back(i + 1);
        out.push_back(p);
        // next restricted growth string
        int i = n - 1;
        for (; i > 0; --i) {
            int maxpre = 0;
            for (int j = 0; j < i; ++j) maxpre = std::max(maxpre, rgs[static_cast<std::size_t>(j)]);
            if (rgs[static_cast<std::size_t>(i)] <= maxpre) break;
        }
        if (i == 0) break;
        ++rgs[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < n; ++j) rgs[static_cast<std::size_t>(j)] = 0;
    }
    return out;
}

} // namespace

TEST_CASE("catalan numbers") {
    const std::uint64_t expected[] = {1,    1,    2,     5,     14,    42,   132,
                                      429,  1430, 4862,  16796, 58786, 208012};
    for (int n = 0; n <= 12; ++n)
        CHECK(nc::catalan(n) == expected[n]);
    CHECK_THROWS_AS(nc::catalan(-1), DomainError);
}

TEST_CASE("crossing detector") {
    CHECK(nc::is_noncrossing(make_partition(4, {{1, 4}, {2, 3}})));
    CHECK_FALSE(nc::is_noncrossing(make_partition(4, {{1, 3}, {2, 4}})));
    CHECK(nc::is_noncrossing(make_partition(5, {{1, 2, 5}, {3, 4}})));
    CHECK_FALSE(nc::is_noncrossing(make_partition(5, {{1, 3, 5}, {2, 4}})));
    CHECK(nc::is_noncrossing(make_partition(6, {{1, 6}, {2, 3}, {4, 5}})));
    CHECK_FALSE(nc::is_noncrossing(make_partition(6, {{1, 4}, {2, 5}, {3, 6}})));
    CHECK(nc::is_noncrossing(make_partition(1, {{1}})));
    CHECK(nc::is_noncrossing(make_partition(3, {{1}, {2}, {3}})));
}

TEST_CASE("enumeration counts match Catalan numbers") {
    for (int n = 1; n <= 9; ++n)
        CHECK(nc::enumerate_nc(n).size() == nc::catalan(n));
}

TEST_CASE("enumeration equals brute-force filter") {
    for (int n = 1; n <= 8; ++n) {
        std::set<std::string> brute;
        for (const auto& p : all_partitions(n))
            if (nc::is_noncrossing(p)) brute.insert(key_of(p));
        std::set<std::string> enumerated;
        for (const auto& p : nc::enumerate_nc(n)) {
            CHECK(nc::is_noncrossing(p));
            enumerated.insert(key_of(p));
        }
        CHECK(enumerated.size() == nc::enumerate_nc(n).size()); // canonical, no duplicates
        CHECK(brute == enumerated);
    }
}

TEST_CASE("free Poisson moments from unit cumulants") {
    // R_n = 1 for all n gives the moment sequence of the free Poisson(1) law.
    const std::vector<double> r(10, 1.0);
    const auto m = nc::moments_from_cumulants(r, 5);
    const double expected[] = {1, 2, 5, 14, 42};
    for (int n = 1; n <= 5; ++n)
        CHECK(m[static_cast<std::size_t>(n - 1)] == expected[n - 1]);
}

TEST_CASE("semicircle moments from the variance cumulant") {
    // R_2 = 1, all others 0: even moments are Catalan, odd vanish.
    const std::vector<double> r = {0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    const auto m = nc::moments_from_cumulants(r, 8);
    const double expected[] = {0, 1, 0, 2, 0, 5, 0, 14};
    for (int n = 1; n <= 8; ++n)
        CHECK(m[static_cast<std::size_t>(n - 1)] == expected[n - 1]);
}

TEST_CASE("moment-cumulant round trip") {
    // Cumulants sized so intermediate moments stay O(100); the inverse
    // recursion amplifies rounding by the moment magnitude, and uniform
    // [-1,1] inputs push order-10 moments past 1e4 where an absolute 1e-12
    // comparison stops being meaningful.
    RngStream st(4242);
    for (int rep = 0; rep < 5; ++rep) {
        std::vector<double> r(10);
        for (double& v : r) v = 0.5 * st.uniform01() - 0.25;
        const auto m = nc::moments_from_cumulants(r, 10);
        const auto r2 = nc::cumulants_from_moments(m, 10);
        for (std::size_t i = 0; i < r.size(); ++i)
            CHECK(std::abs(r[i] - r2[i]) < 1e-12);
        const auto m2 = nc::moments_from_cumulants(r2, 10);
        for (std::size_t i = 0; i < m.size(); ++i)
            CHECK(std::abs(m[i] - m2[i]) < 1e-12 * std::max(1.0, std::abs(m[i])));
    }
}

TEST_CASE("mixed inverse cumulants against the partition oracle") {
    // V free Poisson with rate 2, jump 1: phi(V^k) from the cumulant sum,
    // phi(V^-1 V^k) = phi(V^{k-1}), and phi(V^-1) = 1/(rate - 1) = 1.
    const std::vector<double> rv(12, 2.0);
    const auto mv = nc::moments_from_cumulants(rv, 12);
    const auto vm = [&](int k) -> double { // phi(V^k), k >= -1
        if (k == -1) return 1.0;
        if (k == 0) return 1.0;
        return mv[static_cast<std::size_t>(k - 1)];
    };
    const nc::JointMomentFn joint = [&](bool has_inverse, int v_count) {
        return has_inverse ? vm(v_count - 1) : vm(v_count);
    };
    const auto c = nc::mixed_inverse_cumulants(1.0, rv, 6);
    for (int n = 1; n <= 6; ++n) {
        const double oracle = nc::mixed_cumulant_oracle(joint, n);
        CHECK(std::abs(c[static_cast<std::size_t>(n - 1)] - oracle) <
              1e-10 * std::max(1.0, std::abs(oracle)));
    }
}

TEST_CASE("mixed cumulants beyond the first do not depend on the inverse moment") {
    // The generating identity forces C_n (n >= 2) to be a function of the
    // plain cumulants only; the declared phi(V^-1) enters C_1 alone.
    const std::vector<double> rv = {1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125};
    const auto ca = nc::mixed_inverse_cumulants(0.7, rv, 6);
    const auto cb = nc::mixed_inverse_cumulants(-0.3, rv, 6);
    CHECK(std::abs(ca[0] - 0.7) < 1e-15);
    CHECK(std::abs(cb[0] + 0.3) < 1e-15);
    for (std::size_t n = 1; n < 6; ++n) {
        // C_2 = 1 - C_1 R_1 does depend on C_1; from C_3 on the dependence
        // is linear through the chain, so check the defining recursion instead.
        double sa = (n == 1 ? 1.0 : 0.0), sb = sa;
        for (std::size_t j = 1; j <= n; ++j) {
            sa -= ca[n - j] * rv[j - 1];
            sb -= cb[n - j] * rv[j - 1];
        }
        CHECK(std::abs(ca[n] - sa) < 1e-14);
        CHECK(std::abs(cb[n] - sb) < 1e-14);
    }
}

TEST_CASE("bls expansion base cases") {
    const std::vector<double> m = {2.0, 5.0, 14.0, 42.0, 132.0, 429.0, 1430.0, 4862.0};
    // C = (c, 0, 0, ...): beta_n = c * m_n
    const std::vector<double> c1 = {0.75};
    for (int n = 0; n <= 6; ++n) {
        const double mn = (n == 0) ? 1.0 : m[static_cast<std::size_t>(n - 1)];
        CHECK(std::abs(nc::bls_expand(c1, m, n) - 0.75 * mn) < 1e-12 * std::max(1.0, mn));
    }
    // C = (0, 1, 0, ...): beta_n = sum_{k1 + k2 = n-1} m_{k1} m_{k2}
    const std::vector<double> c2 = {0.0, 1.0};
    CHECK(nc::bls_expand(c2, m, 1) == 1.0);                       // m_0 m_0
    CHECK(nc::bls_expand(c2, m, 2) == 2.0 * m[0]);                // m_0 m_1 + m_1 m_0
    CHECK(nc::bls_expand(c2, m, 3) == 2.0 * m[1] + m[0] * m[0]);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(nc::enumerate_nc(nc::kMaxN + 1), DomainError);
    CHECK_THROWS_AS(nc::enumerate_nc(-1), DomainError);
    CHECK_THROWS_AS(nc::cumulants_from_moments({1.0}, 5), DomainError); // too few moments
    // a short cumulant vector is zero-extended, not rejected
    const auto m = nc::moments_from_cumulants({1.0}, 3);
    CHECK(m[0] == 1.0);
    CHECK(m[1] == 1.0); // only the all-singleton partition survives
    CHECK(m[2] == 1.0);
}
