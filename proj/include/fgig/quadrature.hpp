#pragma once

#include <functional>
#include <vector>

namespace fgig::quad {

// Gauss-Legendre rule on [-1, 1].
struct GLRule {
    std::vector<double> x;
    std::vector<double> w;
};

// Cached rule with n nodes; exact for polynomials of degree 2n-1.
const GLRule& gauss_legendre(int n);

double integrate(const std::function<double(double)>& f, double a, double b, int n);

// Node count doubles from n0 until two consecutive estimates agree to
// rel_tol * max(1, |I|); throws QuadratureError past nmax.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, int n0 = 64, int nmax = 4096);

} // namespace fgig::quad
