#include "fgig/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "fgig/errors.hpp"
#include "fgig/quadrature.hpp"

namespace fgig::dist {

namespace {

constexpr double kPi = std::numbers::pi;

double sq(double x) { return x * x; }

} // namespace

void validate(const FreeGigParams& p) {
    if (!std::isfinite(p.lambda) || !std::isfinite(p.alpha) || !std::isfinite(p.beta))
        throw DomainError("free GIG parameters must be finite");
    if (p.alpha <= 0.0 || p.beta <= 0.0)
        throw DomainError("free GIG parameters require alpha > 0 and beta > 0");
}

void validate(const MarchenkoPasturParams& p) {
    if (!std::isfinite(p.rate) || !std::isfinite(p.jump))
        throw DomainError("Marchenko-Pastur parameters must be finite");
    if (p.rate < 0.0) throw DomainError("Marchenko-Pastur rate must be nonnegative");
    if (p.jump <= 0.0) throw DomainError("Marchenko-Pastur jump must be positive");
}

SupportInterval solve_support(const FreeGigParams& p) {
    validate(p);
    const double al = p.alpha, be = p.beta, la = p.lambda;
    // With s = sqrt(ab) and t = (a+b)/2 the second edge equation gives
    // t = (1 + lambda + beta/s)/alpha; substituting into the first yields
    //   F(s) = alpha^2 s^4 + alpha(1-lambda) s^3 - beta(1+lambda) s - beta^2 = 0,
    // which has exactly one positive root (F(0) < 0, one sign change pattern).
    auto F = [&](double s) {
        return ((al * al * s + al * (1.0 - la)) * s * s - be * (1.0 + la)) * s - be * be;
    };
    auto Fp = [&](double s) {
        return (4.0 * al * al * s + 3.0 * al * (1.0 - la)) * s * s - be * (1.0 + la);
    };
    double lo = 0.0, hi = 1.0;
    while (F(hi) <= 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e30) throw SolverError("support solver: no bracket for the edge quartic", hi);
    }
    // Bisect to machine width (the positive root is unique and simple),
    // then polish with a few bracketed Newton steps.
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (F(mid) > 0.0) hi = mid; else lo = mid;
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 3; ++it) {
        const double fp = Fp(x);
        if (fp == 0.0) break;
        const double xn = x - F(x) / fp;
        if (xn > 0.0 && std::isfinite(xn)) x = xn;
    }
    if (!(x > 0.0) || std::abs(F(x)) > 1e-8 * (1.0 + std::abs(Fp(x)) * x))
        throw SolverError("support solver: edge quartic root did not converge", x);
    const double s = x;
    const double t = (1.0 + la + be / s) / al;
    const double disc = t * t - s * s;
    if (!(disc > 0.0) || !(t > 0.0))
        throw DomainError("support solver: edge equations give a degenerate interval");
    SupportInterval out;
    out.b = t + std::sqrt(disc);
    out.a = s * s / out.b; // exact ab = s^2, avoids cancellation for a
    if (!(out.a > 0.0 && out.a < out.b))
        throw DomainError("support solver: endpoints violate 0 < a < b");
    const double sab = std::sqrt(out.a * out.b);
    out.residual1 = 1.0 - la + al * sab - be * (out.a + out.b) / (2.0 * out.a * out.b);
    out.residual2 = 1.0 + la + be / sab - al * (out.a + out.b) / 2.0;
    return out;
}

double fgig_density(const FreeGigParams& p, const SupportInterval& s, double x) {
    if (x <= s.a || x >= s.b) return 0.0;
    const double sab = std::sqrt(s.a * s.b);
    const double root = std::sqrt((x - s.a) * (s.b - x));
    return root * (p.alpha / x + p.beta / (sab * x * x)) / (2.0 * kPi);
}

GammaConst gamma_const(const FreeGigParams& p, const SupportInterval& s) {
    const double ab = s.a * s.b;
    const double sab = std::sqrt(ab);
    const double v = (p.alpha * p.alpha * ab + p.beta * p.beta / ab -
                      2.0 * p.alpha * p.beta * ((s.a + s.b) / sab - 1.0) -
                      sq(p.lambda - 1.0)) /
                     (4.0 * p.beta);
    return GammaConst{v};
}

namespace {

// Principal-branch product sqrt(z-a) sqrt(z-b): analytic off [a,b] and
// asymptotic to +z at infinity.
complex sqrt_prod(complex z, double a, double b) {
    return std::sqrt(z - complex(a)) * std::sqrt(z - complex(b));
}

} // namespace

complex fgig_cauchy(const FreeGigParams& p, const SupportInterval& s, complex z) {
    if (std::abs(z) < 1e-9 * (1.0 + s.a))
        throw SingularityError("fgig_cauchy: z too close to the origin");
    if (z.imag() == 0.0 && z.real() >= s.a && z.real() <= s.b)
        throw SingularityError("fgig_cauchy: z lies on the support");
    const double sab = std::sqrt(s.a * s.b);
    const complex w = sqrt_prod(z, s.a, s.b);
    const complex num =
        p.alpha * z * z - (p.lambda - 1.0) * z - p.beta - (p.alpha * z + p.beta / sab) * w;
    return num / (2.0 * z * z);
}

namespace {

// D(z) = (alpha + z(lambda-1))^2 - 4 beta z (z-alpha)(z-gamma), expanded.
struct Cubic {
    double d3, d2, d1, d0;
    complex operator()(complex z) const { return ((d3 * z + d2) * z + d1) * z + d0; }
    double operator()(double z) const { return ((d3 * z + d2) * z + d1) * z + d0; }
    complex deriv(complex z) const { return (3.0 * d3 * z + 2.0 * d2) * z + d1; }
    complex deriv2(complex z) const { return 6.0 * d3 * z + 2.0 * d2; }
};

Cubic make_discriminant(const FreeGigParams& p, double gamma) {
    const double al = p.alpha, be = p.beta, lm1 = p.lambda - 1.0;
    Cubic c;
    c.d3 = -4.0 * be;
    c.d2 = lm1 * lm1 + 4.0 * be * (al + gamma);
    c.d1 = 2.0 * al * lm1 - 4.0 * be * al * gamma;
    c.d0 = al * al;
    return c;
}

double smallest_positive_root(const Cubic& c) {
    // D(0) = alpha^2 > 0 and the leading coefficient -4 beta < 0, so a
    // positive root exists; scan to the Cauchy bound, then bisect.
    const double bound =
        1.0 + std::max({std::abs(c.d2), std::abs(c.d1), std::abs(c.d0)}) / std::abs(c.d3);
    const int kScan = 4096;
    double prev_t = 0.0, prev_v = c(0.0);
    for (int i = 1; i <= kScan; ++i) {
        const double t = bound * static_cast<double>(i) / kScan;
        const double v = c(t);
        if ((prev_v > 0.0) != (v > 0.0) || v == 0.0) {
            double lo = prev_t, hi = t;
            for (int k = 0; k < 200; ++k) {
                const double mid = 0.5 * (lo + hi);
                if ((c(lo) > 0.0) == (c(mid) > 0.0)) lo = mid; else hi = mid;
                if (hi - lo <= 1e-15 * hi) break;
            }
            return 0.5 * (lo + hi);
        }
        prev_t = t;
        prev_v = v;
    }
    throw SolverError("discriminant cubic: positive root not located", bound);
}

// Continue sqrt(D) from its value +start at z = 0 along the piecewise-linear
// path through `waypoints`; empty optional when the path runs into a zero
// of D.
std::optional<complex> walk_sqrt(const Cubic& D, const std::vector<complex>& waypoints,
                                 int steps, double start) {
    complex prev(start, 0.0);
    complex from(0.0, 0.0);
    for (const complex& to : waypoints) {
        for (int i = 1; i <= steps; ++i) {
            const complex z = from + (to - from) * (static_cast<double>(i) / steps);
            const complex rp = std::sqrt(D(z));
            const complex c = (std::abs(rp - prev) <= std::abs(-rp - prev)) ? rp : -rp;
            if (std::abs(c) < 1e-9 * (1.0 + std::abs(prev))) return std::nullopt;
            prev = c;
        }
        from = to;
    }
    return prev;
}

complex tracked_sqrt(const Cubic& D, complex target, double start) {
    if (std::abs(target) == 0.0) return complex(start, 0.0);
    const std::vector<std::vector<complex>> paths = {
        {target},
        {target * complex(0.5, 0.18), target},
        {target * complex(0.5, -0.18), target},
    };
    for (const auto& path : paths) {
        std::optional<complex> prev = walk_sqrt(D, path, 64, start);
        for (int steps : {128, 256, 512}) {
            const std::optional<complex> cur = walk_sqrt(D, path, steps, start);
            if (prev && cur && std::abs(*cur - *prev) < std::abs(*cur + *prev)) return *cur;
            prev = cur;
        }
    }
    throw ContinuationError("sqrt branch tracking failed between 0 and the requested point",
                            target);
}

} // namespace

RtransformEvaluator make_rtransform(const FreeGigParams& p, const SupportInterval& s) {
    RtransformEvaluator ev;
    ev.p = p;
    ev.s = s;
    ev.gamma = gamma_const(p, s).value;
    ev.radius = 0.9 * smallest_positive_root(make_discriminant(p, ev.gamma));
    return ev;
}

complex RtransformEvaluator::operator()(complex z) const {
    const double al = p.alpha;
    const Cubic D = make_discriminant(p, gamma);
    if (std::abs(z) < 1e-10 * (1.0 + al))
        return complex((p.lambda - p.beta * gamma) / al, 0.0); // r(0) = mean
    if (std::abs(z - complex(al)) < 1e-5 * (1.0 + al)) {
        // 0/0 point of the ratio: on the tracked branch sqrt(D)(alpha) equals
        // -alpha*lambda, cancelling the numerator; expand locally instead.
        const complex s_al = tracked_sqrt(D, complex(al), al);
        if (std::abs(s_al) < 1e-9 * (1.0 + al))
            throw SingularityError("r-transform: branch point at z = alpha");
        if (std::abs(s_al + al * p.lambda) > 1e-6 * (1.0 + std::abs(al * p.lambda)))
            throw SingularityError("r-transform: genuine pole at z = alpha on this branch");
        const complex dp = D.deriv(complex(al));
        const complex dpp = D.deriv2(complex(al));
        const complex n1 = (p.lambda + 1.0) + dp / (2.0 * s_al);
        const complex n2 = dpp / (2.0 * s_al) - dp * dp / (4.0 * s_al * s_al * s_al);
        return -(n1 + 0.5 * n2 * (z - complex(al))) / (2.0 * z);
    }
    const complex sqD = tracked_sqrt(D, z, al);
    return (-al + z * (p.lambda + 1.0) + sqD) / (2.0 * z * (al - z));
}

complex fgig_rtransform(const FreeGigParams& p, const SupportInterval& s, complex z) {
    return make_rtransform(p, s)(z);
}

double fgig_rtransform_radius(const FreeGigParams& p, const SupportInterval& s) {
    return make_rtransform(p, s).radius;
}

FreeGigParams invert_params(const FreeGigParams& p) {
    return FreeGigParams{-p.lambda, p.beta, p.alpha};
}

namespace {

// Integrand of \int x^k dmu after x = m + h sin(t), which absorbs the
// square-root edge factor: dmu = (h^2 cos^2 t / 2pi)(alpha/x + beta/(s x^2)) dt.
std::function<double(double)> edge_integrand(const FreeGigParams& p, const SupportInterval& s,
                                             int k) {
    const double m = 0.5 * (s.a + s.b);
    const double h = 0.5 * (s.b - s.a);
    const double sab = std::sqrt(s.a * s.b);
    const double al = p.alpha, be = p.beta;
    return [=](double t) {
        const double c = std::cos(t);
        const double x = m + h * std::sin(t);
        const double w = h * h * c * c / (2.0 * kPi) * (al / x + be / (sab * x * x));
        return w * std::pow(x, k);
    };
}

} // namespace

double fgig_moment(const FreeGigParams& p, int k) {
    if (k < -32 || k > 32) throw DomainError("fgig_moment: |k| must be at most 32");
    const SupportInterval s = solve_support(p);
    return quad::integrate_adaptive(edge_integrand(p, s, k), -kPi / 2.0, kPi / 2.0, 1e-12, 64,
                                    8192);
}

double fgig_mean(const FreeGigParams& p) {
    const SupportInterval s = solve_support(p);
    return (p.lambda - p.beta * gamma_const(p, s).value) / p.alpha;
}

double fgig_cdf(const FreeGigParams& p, const SupportInterval& s, double x) {
    if (x <= s.a) return 0.0;
    if (x >= s.b) return 1.0;
    const double m = 0.5 * (s.a + s.b);
    const double h = 0.5 * (s.b - s.a);
    const double th = std::asin(std::clamp((x - m) / h, -1.0, 1.0));
    return quad::integrate_adaptive(edge_integrand(p, s, 0), -kPi / 2.0, th, 1e-11, 64, 8192);
}

std::vector<double> sample_spectrum(const FreeGigParams& p, std::size_t n, RngStream& stream) {
    const SupportInterval s = solve_support(p);
    const double m = 0.5 * (s.a + s.b);
    const double h = 0.5 * (s.b - s.a);
    const auto f = edge_integrand(p, s, 0);
    // Cumulative mass over fixed theta panels, then per-draw bisection with
    // small partial integrals; fully deterministic given the stream.
    const int kPanels = 4096;
    const quad::GLRule& coarse = quad::gauss_legendre(8);
    const quad::GLRule& fine = quad::gauss_legendre(4);
    auto panel_int = [&](const quad::GLRule& rule, double lo, double hi) {
        const double c = 0.5 * (hi + lo), r = 0.5 * (hi - lo);
        double acc = 0.0;
        for (std::size_t i = 0; i < rule.x.size(); ++i) acc += rule.w[i] * f(c + r * rule.x[i]);
        return acc * r;
    };
    std::vector<double> cum(kPanels + 1, 0.0);
    auto theta_at = [&](int i) {
        return -kPi / 2.0 + kPi * static_cast<double>(i) / kPanels;
    };
    for (int i = 0; i < kPanels; ++i)
        cum[i + 1] = cum[i] + panel_int(coarse, theta_at(i), theta_at(i + 1));
    const double total = cum[kPanels];
    if (!(total > 0.0) || !std::isfinite(total))
        throw QuadratureError("sample_spectrum: CDF tabulation failed");
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t d = 0; d < n; ++d) {
        const double target = stream.uniform01() * total;
        const auto it = std::upper_bound(cum.begin(), cum.end(), target);
        int panel = static_cast<int>(it - cum.begin()) - 1;
        panel = std::clamp(panel, 0, kPanels - 1);
        double lo = theta_at(panel), hi = theta_at(panel + 1);
        double mass_lo = cum[panel];
        for (int k = 0; k < 46; ++k) {
            const double mid = 0.5 * (lo + hi);
            const double left = panel_int(fine, lo, mid);
            if (mass_lo + left >= target) {
                hi = mid;
            } else {
                mass_lo += left;
                lo = mid;
            }
        }
        out.push_back(m + h * std::sin(0.5 * (lo + hi)));
    }
    return out;
}

// ---- Marchenko-Pastur ----

std::pair<double, double> mp_support(const MarchenkoPasturParams& p) {
    validate(p);
    const double r = std::sqrt(p.rate);
    return {p.jump * sq(1.0 - r), p.jump * sq(1.0 + r)};
}

MpDensity mp_density(const MarchenkoPasturParams& p, double x) {
    const auto [a, b] = mp_support(p);
    MpDensity d;
    d.atom_at_zero = std::max(0.0, 1.0 - p.rate);
    if (x > a && x < b && x > 0.0) {
        const double rad = 4.0 * p.rate * p.jump * p.jump - sq(x - p.jump * (1.0 + p.rate));
        d.continuous = std::sqrt(std::max(0.0, rad)) / (2.0 * kPi * p.jump * x);
    }
    return d;
}

complex mp_cauchy(const MarchenkoPasturParams& p, complex z) {
    const auto [a, b] = mp_support(p);
    if (std::abs(z) < 1e-8 * p.jump) {
        if (p.rate > 1.0) return complex(-1.0 / (p.jump * (p.rate - 1.0)), 0.0);
        throw SingularityError("mp_cauchy: z at the origin with an atom present");
    }
    if (z.imag() == 0.0 && z.real() >= a && z.real() <= b)
        throw SingularityError("mp_cauchy: z lies on the support");
    const complex w = sqrt_prod(z, a, b);
    return (z + p.jump * (1.0 - p.rate) - w) / (2.0 * p.jump * z);
}

complex mp_rtransform(const MarchenkoPasturParams& p, complex z) {
    const complex den = 1.0 - p.jump * z;
    if (std::abs(den) < 1e-10 * (1.0 + std::abs(p.jump * z)))
        throw SingularityError("mp_rtransform: z at the pole 1/jump");
    return p.rate * p.jump / den;
}

namespace {

std::function<double(double)> mp_edge_integrand(const MarchenkoPasturParams& p, int k) {
    const auto [a, b] = mp_support(p);
    const double m = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double jump = p.jump;
    return [=](double t) {
        const double c = std::cos(t);
        const double x = m + h * std::sin(t);
        // cos^2 t / x stays bounded even when a = 0 (x = h(1+sin t)).
        const double w = h * h * c * c / (2.0 * kPi * jump * x);
        return (k == 0) ? w : w * std::pow(x, k);
    };
}

} // namespace

double mp_moment(const MarchenkoPasturParams& p, int k) {
    if (k < -32 || k > 32) throw DomainError("mp_moment: |k| must be at most 32");
    if (k < 0 && p.rate <= 1.0)
        throw DomainError("mp_moment: negative moments require rate > 1");
    const double atom = std::max(0.0, 1.0 - p.rate);
    const double cont =
        quad::integrate_adaptive(mp_edge_integrand(p, k), -kPi / 2.0, kPi / 2.0, 1e-12, 64, 8192);
    return cont + (k == 0 ? atom : 0.0);
}

double mp_cdf(const MarchenkoPasturParams& p, double x) {
    const auto [a, b] = mp_support(p);
    const double atom = std::max(0.0, 1.0 - p.rate);
    if (x < 0.0) return 0.0;
    if (x <= a) return atom;
    if (x >= b) return 1.0;
    const double m = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double th = std::asin(std::clamp((x - m) / h, -1.0, 1.0));
    return atom +
           quad::integrate_adaptive(mp_edge_integrand(p, 0), -kPi / 2.0, th, 1e-11, 64, 8192);
}

std::vector<double> mp_cumulants(const MarchenkoPasturParams& p, int order) {
    if (order < 1) throw DomainError("mp_cumulants: order must be positive");
    std::vector<double> r(static_cast<std::size_t>(order));
    double g = 1.0;
    for (int n = 1; n <= order; ++n) {
        g *= p.jump;
        r[static_cast<std::size_t>(n - 1)] = p.rate * g;
    }
    return r;
}

} // namespace fgig::dist
