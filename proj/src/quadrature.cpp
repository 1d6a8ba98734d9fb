#include "fgig/quadrature.hpp"

#include "fgig/errors.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace fgig::quad {

namespace {

std::mutex cache_mutex;
std::map<int, GLRule>& rule_cache() {
    static std::map<int, GLRule> cache;
    return cache;
}

// Nodes are the roots of P_n, found by Newton from the Chebyshev estimate.
GLRule compute_rule(int n) {
    GLRule r;
    r.x.resize(n);
    r.w.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.x[i] = -x;
        r.x[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        r.w[i] = w;
        r.w[n - 1 - i] = w;
    }
    return r;
}

} // namespace

const GLRule& gauss_legendre(int n) {
    if (n < 1) throw DomainError("gauss_legendre: node count must be positive");
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto& cache = rule_cache();
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_rule(n)).first;
    return it->second;
}

double integrate(const std::function<double(double)>& f, double a, double b, int n) {
    const GLRule& r = gauss_legendre(n);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += r.w[i] * f(mid + half * r.x[i]);
    return s * half;
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, int n0, int nmax) {
    double prev = integrate(f, a, b, n0);
    for (int n = 2 * n0; n <= nmax; n *= 2) {
        const double cur = integrate(f, a, b, n);
        if (std::abs(cur - prev) <= rel_tol * std::max(1.0, std::abs(cur))) return cur;
        prev = cur;
    }
    throw QuadratureError("integrate_adaptive: node doubling did not stabilize");
}

} // namespace fgig::quad
