#include "fgig/transforms.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "fgig/combinatorics.hpp"
#include "fgig/errors.hpp"

namespace fgig::tf {

namespace {

constexpr double kPi = std::numbers::pi;

} // namespace

DensityEstimate stieltjes_invert(const AnalyticFunction& G, const std::vector<double>& grid) {
    const double eps[3] = {1e-3, 1e-4, 1e-5};
    DensityEstimate out;
    out.grid = grid;
    out.values.reserve(grid.size());
    out.epsilon_used = eps[2];
    for (double t : grid) {
        double y[3];
        for (int j = 0; j < 3; ++j)
            y[j] = -G.eval(complex(t, eps[j])).imag() / kPi;
        // Quadratic Lagrange extrapolation to eps = 0.
        double quad = 0.0;
        for (int j = 0; j < 3; ++j) {
            double w = 1.0;
            for (int k = 0; k < 3; ++k)
                if (k != j) w *= (0.0 - eps[k]) / (eps[j] - eps[k]);
            quad += w * y[j];
        }
        const double lin = y[2] + (y[2] - y[1]) * (0.0 - eps[2]) / (eps[2] - eps[1]);
        if (std::abs(quad - lin) > 1e-4 * std::max(1.0, std::abs(quad)))
            throw InversionUnstableError("stieltjes_invert: extrapolation orders disagree");
        double v = quad;
        if (v < 0.0) {
            if (v < -1e-6)
                throw InversionUnstableError("stieltjes_invert: negative density beyond tolerance");
            v = 0.0;
        }
        out.values.push_back(v);
    }
    return out;
}

AnalyticFunction free_convolve_r(const AnalyticFunction& r1, const AnalyticFunction& r2) {
    AnalyticFunction sum;
    const double rad1 = (r1.domain == AnalyticFunction::Domain::disk)
                            ? r1.radius
                            : std::numeric_limits<double>::infinity();
    const double rad2 = (r2.domain == AnalyticFunction::Domain::disk)
                            ? r2.radius
                            : std::numeric_limits<double>::infinity();
    const double rad = std::min(rad1, rad2);
    if (!(rad > 0.0))
        throw DomainError("free_convolve_r: the guaranteed domains have empty intersection");
    sum.domain = std::isinf(rad) ? AnalyticFunction::Domain::upper_half_plane
                                 : AnalyticFunction::Domain::disk;
    sum.radius = std::isinf(rad) ? 0.0 : rad;
    auto e1 = r1.eval, e2 = r2.eval;
    sum.eval = [e1, e2](complex z) { return e1(z) + e2(z); };
    return sum;
}

namespace {

// One damped-Newton solve of r(w) + 1/w = target from the warm start;
// returns the root, or nothing if Newton stalls or evaluation throws.
std::optional<complex> newton_solve(const std::function<complex(complex)>& reval, complex target,
                                    complex w0) {
    auto F = [&](complex w) -> std::optional<complex> {
        if (std::abs(w) < 1e-14) return std::nullopt;
        try {
            return reval(w) + 1.0 / w - target;
        } catch (const Error&) {
            return std::nullopt;
        }
    };
    const double tol = 1e-13 * (1.0 + std::abs(target));
    complex w = w0;
    std::optional<complex> f = F(w);
    if (!f) return std::nullopt;
    for (int it = 0; it < 50; ++it) {
        if (std::abs(*f) <= tol) return w;
        const double h = 1e-6 * (std::abs(w) + 1e-3);
        const std::optional<complex> fp = F(w + h);
        const std::optional<complex> fm = F(w - h);
        if (!fp || !fm) return std::nullopt;
        const complex deriv = (*fp - *fm) / (2.0 * h);
        if (std::abs(deriv) < 1e-300) return std::nullopt;
        const complex step = -*f / deriv;
        bool advanced = false;
        double damp = 1.0;
        for (int bt = 0; bt < 8; ++bt, damp *= 0.5) {
            const complex wn = w + damp * step;
            const std::optional<complex> fn = F(wn);
            if (fn && std::abs(*fn) < std::abs(*f)) {
                w = wn;
                f = fn;
                advanced = true;
                break;
            }
        }
        if (!advanced) return std::nullopt;
    }
    return (std::abs(*f) <= tol) ? std::optional<complex>(w) : std::nullopt;
}

} // namespace

complex cauchy_continue(const AnalyticFunction& r, complex z_from, complex w_from, complex z_to,
                        int base_segments) {
    if (base_segments < 1) throw DomainError("cauchy_continue: base_segments must be >= 1");
    // Walk targets from z_from down to z_to, warm-starting each solve; a
    // failed segment is split at its midpoint.
    std::vector<complex> pending; // processed back-to-front
    for (int k = base_segments; k >= 1; --k)
        pending.push_back(z_from + (z_to - z_from) * (static_cast<double>(k) / base_segments));
    complex w = w_from;
    complex done = z_from;
    int budget = 4096;
    while (!pending.empty()) {
        if (--budget < 0)
            throw ContinuationError("cauchy_continue: subdivision budget exhausted", w);
        const complex target = pending.back();
        const std::optional<complex> sol = newton_solve(r.eval, target, w);
        if (sol) {
            w = *sol;
            done = target;
            pending.pop_back();
            continue;
        }
        if (std::abs(target - done) < 1e-13 * (1.0 + std::abs(target)))
            throw ContinuationError("cauchy_continue: continuation stalled", w);
        pending.push_back(0.5 * (target + done));
    }
    return w;
}

complex cauchy_from_r(const AnalyticFunction& r, complex z) {
    if (!(z.imag() > 0.0)) throw DomainError("cauchy_from_r: Im z must be positive");
    const complex z0(0.0, 8.0 * (1.0 + std::abs(z)));
    return cauchy_continue(r, z0, 1.0 / z0, z, 32);
}

TruncatedSeries mul(const TruncatedSeries& a, const TruncatedSeries& b, int order) {
    if (order < 0) throw DomainError("series mul: negative order");
    TruncatedSeries out;
    out.c.assign(static_cast<std::size_t>(order) + 1, 0.0);
    for (std::size_t i = 0; i < a.c.size() && i <= static_cast<std::size_t>(order); ++i) {
        if (a.c[i] == 0.0) continue;
        const std::size_t jmax =
            std::min(b.c.size(), static_cast<std::size_t>(order) + 1 - i);
        for (std::size_t j = 0; j < jmax; ++j) out.c[i + j] += a.c[i] * b.c[j];
    }
    return out;
}

TruncatedSeries moment_series_from_r(const TruncatedSeries& r, int order) {
    if (order < 0 || order > nc::kMaxN)
        throw DomainError("moment_series_from_r: order outside the partition cap");
    TruncatedSeries A;
    A.c.assign(static_cast<std::size_t>(order) + 1, 0.0);
    A.c[0] = 1.0;
    if (order >= 1) {
        const std::vector<double> m = nc::moments_from_cumulants(r.c, order);
        for (int n = 1; n <= order; ++n)
            A.c[static_cast<std::size_t>(n)] = m[static_cast<std::size_t>(n - 1)];
    }
    return A;
}

TruncatedSeries series_compose_AC(const TruncatedSeries& A, const TruncatedSeries& C, int order) {
    if (order < 0) throw DomainError("series_compose_AC: negative order");
    // P = z A(z); then Horner for C(P), finally A * C(P).
    TruncatedSeries P;
    P.c.assign(static_cast<std::size_t>(order) + 1, 0.0);
    for (std::size_t i = 1; i < P.c.size() && i - 1 < A.c.size(); ++i) P.c[i] = A.c[i - 1];
    TruncatedSeries acc;
    acc.c.assign(static_cast<std::size_t>(order) + 1, 0.0);
    for (int j = static_cast<int>(C.c.size()) - 1; j >= 0; --j) {
        acc = mul(acc, P, order);
        acc.c[0] += C.c[static_cast<std::size_t>(j)];
    }
    return mul(A, acc, order);
}

TruncatedSeries quadratic_A_solver(double cd, double d, double delta0, double alpha_m1,
                                   int order) {
    if (!(delta0 > 0.0)) throw DomainError("quadratic_A_solver: delta0 must be positive");
    if (!(cd > 1.0)) throw DomainError("quadratic_A_solver: cd must exceed 1");
    if (order < 0) throw DomainError("quadratic_A_solver: negative order");
    std::vector<double> a(static_cast<std::size_t>(order) + 1, 0.0);
    std::vector<double> asq(static_cast<std::size_t>(order) + 1, 0.0); // A^2 coefficients
    a[0] = 1.0;
    asq[0] = 1.0;
    for (int n = 1; n <= order; ++n) {
        double s = (cd - 1.0) * asq[static_cast<std::size_t>(n - 1)] +
                   a[static_cast<std::size_t>(n - 1)];
        if (n >= 2) s += d * a[static_cast<std::size_t>(n - 2)];
        if (n == 1) s += d * alpha_m1;
        a[static_cast<std::size_t>(n)] = s / delta0;
        double conv = 0.0;
        for (int j = 0; j <= n; ++j)
            conv += a[static_cast<std::size_t>(j)] * a[static_cast<std::size_t>(n - j)];
        asq[static_cast<std::size_t>(n)] = conv;
    }
    return TruncatedSeries{std::move(a)};
}

std::vector<double> taylor_from_circle(const std::function<complex(complex)>& f, double radius,
                                       int n_coeffs, int nodes) {
    if (!(radius > 0.0)) throw DomainError("taylor_from_circle: radius must be positive");
    if (n_coeffs < 1 || nodes < 2 * n_coeffs)
        throw DomainError("taylor_from_circle: need nodes >= 2 * n_coeffs");
    std::vector<complex> vals(static_cast<std::size_t>(nodes));
    for (int j = 0; j < nodes; ++j) {
        const double th = 2.0 * kPi * j / nodes;
        vals[static_cast<std::size_t>(j)] = f(radius * std::polar(1.0, th));
    }
    std::vector<double> out(static_cast<std::size_t>(n_coeffs));
    for (int k = 0; k < n_coeffs; ++k) {
        complex acc(0.0, 0.0);
        for (int j = 0; j < nodes; ++j) {
            const double th = 2.0 * kPi * j / nodes;
            acc += vals[static_cast<std::size_t>(j)] * std::polar(1.0, -k * th);
        }
        out[static_cast<std::size_t>(k)] = (acc / static_cast<double>(nodes)).real() /
                                           std::pow(radius, k);
    }
    return out;
}

} // namespace fgig::tf
