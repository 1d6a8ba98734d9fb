#pragma once

#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "fgig/rng.hpp"

namespace fgig::dist {

using complex = std::complex<double>;

// Free GIG law mu(lambda, alpha, beta): compactly supported on [a,b] with
// 0 < a < b, density (1/2pi) sqrt((x-a)(b-x)) (alpha/x + beta/(sqrt(ab) x^2)).
struct FreeGigParams {
    double lambda = 0.0;
    double alpha = 1.0;
    double beta = 1.0;
};

// Marchenko-Pastur / free Poisson law with rate >= 0 and jump > 0:
// atom max{0, 1-rate} at 0 plus a continuous part on
// [jump(1-sqrt(rate))^2, jump(1+sqrt(rate))^2]; free cumulants R_n = rate*jump^n.
struct MarchenkoPasturParams {
    double rate = 1.0;
    double jump = 1.0;
};

struct SupportInterval {
    double a = 0.0;
    double b = 0.0;
    // Residuals of the two defining edge equations at the returned (a,b).
    double residual1 = 0.0;
    double residual2 = 0.0;
};

struct GammaConst {
    double value = 0.0;
};

struct MpDensity {
    double continuous = 0.0;
    double atom_at_zero = 0.0;
};

void validate(const FreeGigParams& p);
void validate(const MarchenkoPasturParams& p);

// Solves the coupled edge equations
//   1 - lambda + alpha sqrt(ab) - beta (a+b)/(2ab) = 0
//   1 + lambda + beta/sqrt(ab) - alpha (a+b)/2     = 0
// for 0 < a < b.  In s = sqrt(ab) the system collapses to a quartic with a
// single positive root, found by bracketed Newton; deterministic.
SupportInterval solve_support(const FreeGigParams& p);

// Density at x; 0 outside [a,b].
double fgig_density(const FreeGigParams& p, const SupportInterval& s, double x);

// The scalar constant
//   (alpha^2 ab + beta^2/(ab) - 2 alpha beta ((a+b)/sqrt(ab) - 1) - (lambda-1)^2) / (4 beta)
// entering the R-transform; for lambda > 1 its negative equals the first
// inverse moment of the law.
GammaConst gamma_const(const FreeGigParams& p, const SupportInterval& s);

// Closed-form Cauchy transform
//   G(z) = (alpha z^2 - (lambda-1) z - beta - (alpha z + beta/sqrt(ab)) w(z)) / (2 z^2),
// w(z) = sqrt(z-a) sqrt(z-b) with principal square roots (w ~ z at infinity).
// Analytic off [a,b]; maps the upper half-plane into the lower one.
complex fgig_cauchy(const FreeGigParams& p, const SupportInterval& s, complex z);

// R-transform evaluator with precomputed constants; prefer this inside loops.
// r(z) = (-alpha + z(lambda+1) + sqrt(D(z))) / (2 z (alpha - z)) where
//   D(z) = (alpha + z(lambda-1))^2 - 4 beta z (z - alpha)(z - gamma)
// and the square-root branch is tracked along a path from 0 (where
// sqrt(D) = +alpha) so that r is analytic at the origin.  Inside the disk
// |z| <= radius the branch is guaranteed single-valued; outside, evaluation
// is attempted by the same continuation and errors out if the tracking
// cannot settle (genuine branch trouble).
struct RtransformEvaluator {
    FreeGigParams p;
    SupportInterval s;
    double gamma = 0.0;  // gamma_const value
    double radius = 0.0; // 0.9 * smallest positive root of D
    complex operator()(complex z) const;
};

RtransformEvaluator make_rtransform(const FreeGigParams& p, const SupportInterval& s);

// One-shot wrappers around RtransformEvaluator.
complex fgig_rtransform(const FreeGigParams& p, const SupportInterval& s, complex z);
double fgig_rtransform_radius(const FreeGigParams& p, const SupportInterval& s);

// If X ~ mu(lambda, alpha, beta) then X^{-1} ~ mu(-lambda, beta, alpha).
FreeGigParams invert_params(const FreeGigParams& p);

// Moment integral of x^k against the law, |k| <= 32 (negative k is fine
// since a > 0); Gauss-Legendre after the edge substitution x = m + h sin(t).
double fgig_moment(const FreeGigParams& p, int k);

// First moment via the closed form (lambda - beta*gamma)/alpha.
double fgig_mean(const FreeGigParams& p);

// CDF of the law at x (0 below a, 1 above b).
double fgig_cdf(const FreeGigParams& p, const SupportInterval& s, double x);

// n i.i.d. draws via inverse-CDF bisection on a panel-tabulated quadrature
// CDF; deterministic given the stream state.
std::vector<double> sample_spectrum(const FreeGigParams& p, std::size_t n, RngStream& stream);

// ---- Marchenko-Pastur ----

std::pair<double, double> mp_support(const MarchenkoPasturParams& p);
MpDensity mp_density(const MarchenkoPasturParams& p, double x);
complex mp_cauchy(const MarchenkoPasturParams& p, complex z);
// rate*jump / (1 - jump z); pole at 1/jump.
complex mp_rtransform(const MarchenkoPasturParams& p, complex z);
// Moment of x^k; k < 0 requires rate > 1 (else the mass at/near 0 makes the
// integral infinite).
double mp_moment(const MarchenkoPasturParams& p, int k);
double mp_cdf(const MarchenkoPasturParams& p, double x);
// R_1..R_order with R_n = rate * jump^n.
std::vector<double> mp_cumulants(const MarchenkoPasturParams& p, int order);

} // namespace fgig::dist
