#include "fgig/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>
#include <thread>

#include "fgig/combinatorics.hpp"
#include "fgig/errors.hpp"
#include "fgig/rmt.hpp"
#include "fgig/transforms.hpp"

namespace fgig::exp {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// One-sided residual row: pass iff value < tolerance.
CheckRow resid_row(std::string name, double value, double tolerance) {
    return CheckRow{std::move(name), value, tolerance, value < tolerance};
}

// Informational row for exploratory runs: always passes.
CheckRow info_row(std::string name, double value) {
    return CheckRow{std::move(name), value, std::numeric_limits<double>::infinity(), true};
}

double median(std::vector<double> v) {
    if (v.empty()) throw Error("median of empty sample");
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return (v.size() % 2 == 1) ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

tf::AnalyticFunction fgig_r_af(const dist::FreeGigParams& p) {
    const auto s = dist::solve_support(p);
    const dist::RtransformEvaluator ev = dist::make_rtransform(p, s);
    return tf::AnalyticFunction{tf::AnalyticFunction::Domain::disk, ev.radius,
                                [ev](complex z) { return ev(z); }};
}

tf::AnalyticFunction mp_r_af(const dist::MarchenkoPasturParams& p) {
    return tf::AnalyticFunction{tf::AnalyticFunction::Domain::disk, 0.9 / p.jump,
                                [p](complex z) { return dist::mp_rtransform(p, z); }};
}

// Moments x^0..x^order of the law by quadrature (index = power).
std::vector<double> fgig_moment_table(const dist::FreeGigParams& p, int order) {
    std::vector<double> m(static_cast<std::size_t>(order) + 1, 1.0);
    for (int k = 1; k <= order; ++k) m[static_cast<std::size_t>(k)] = dist::fgig_moment(p, k);
    return m;
}

} // namespace

bool ExperimentReport::passed() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

dist::FreeGigParams characterization_params(double c, double d, double delta0) {
    if (!(c > 0.0) || !(d > 0.0) || !(delta0 > 0.0))
        throw DomainError("characterization_params: c, d, delta0 must be positive");
    const double cd = c * d;
    if (!(cd > 1.0))
        throw DomainError("characterization_params: need c*d > 1 for a bona fide law");
    dist::FreeGigParams p;
    p.lambda = cd / (cd - 1.0);
    p.alpha = delta0 / (cd - 1.0);
    p.beta = d / (cd - 1.0);
    return p;
}

RegressionConstants regression_constants(const dist::FreeGigParams& p) {
    dist::validate(p);
    if (!(p.lambda > 1.0))
        throw DomainError("regression_constants: lambda must exceed 1");
    const auto s = dist::solve_support(p);
    RegressionConstants k;
    k.c = p.lambda / p.beta;
    k.d = p.beta / (p.lambda - 1.0);
    k.delta0 = p.alpha / (p.lambda - 1.0);
    k.alpha_m1 = -dist::gamma_const(p, s).value;
    return k;
}

std::vector<complex> default_r_grid() {
    std::vector<complex> g;
    g.push_back(complex(0.0, 0.0));
    for (double rad : {0.0125, 0.025, 0.0375, 0.05})
        for (int j = 0; j < 8; ++j) {
            const double th = 2.0 * std::numbers::pi * j / 8.0;
            g.push_back(rad * complex(std::cos(th), std::sin(th)));
        }
    return g;
}

ConvolutionResult run_convolution_check(const dist::FreeGigParams& p,
                                        const std::vector<complex>& r_grid,
                                        int density_points) {
    dist::validate(p);
    if (!(p.lambda > 1.0))
        throw DomainError("run_convolution_check: lambda must exceed 1");
    if (density_points < 2 || r_grid.empty())
        throw DomainError("run_convolution_check: empty grid");
    const auto t0 = Clock::now();

    const dist::FreeGigParams px{-p.lambda, p.alpha, p.beta};
    const dist::MarchenkoPasturParams py{p.lambda, 1.0 / p.alpha};

    ConvolutionResult out;
    out.r_grid = r_grid;
    out.report.experiment = "convolution_check";
    out.report.params = {{"lambda", p.lambda}, {"alpha", p.alpha}, {"beta", p.beta}};

    const auto rx = fgig_r_af(px);
    const auto ry = mp_r_af(py);
    const auto rs = fgig_r_af(p);

    double r_sup = 0.0;
    out.r_resid.reserve(r_grid.size());
    for (const complex z : r_grid) {
        const double d = std::abs(rx.eval(z) + ry.eval(z) - rs.eval(z));
        out.r_resid.push_back(d);
        r_sup = std::max(r_sup, d);
    }
    out.report.checks.push_back(resid_row("r_identity_sup", r_sup, 1e-8));

    // Rebuild the sum law's density from the added R-transforms alone and
    // compare with the closed form on the inner 90% of the support.  The
    // inversion sweeps each horizontal line left to right, so continuing from
    // the neighbouring grid point (keyed by the line's height) avoids paying
    // for a full continuation from i*infinity at every point.
    const auto rsum = tf::free_convolve_r(rx, ry);
    using Anchor = std::pair<complex, complex>; // (z, G(z)) last solved on a line
    const auto anchors = std::make_shared<std::map<double, Anchor>>();
    const tf::AnalyticFunction g{
        tf::AnalyticFunction::Domain::upper_half_plane, 0.0, [rsum, anchors](complex z) {
            complex w;
            const auto it = anchors->find(z.imag());
            if (it == anchors->end()) {
                w = tf::cauchy_from_r(rsum, z);
            } else {
                try {
                    w = tf::cauchy_continue(rsum, it->second.first, it->second.second, z);
                } catch (const Error&) {
                    w = tf::cauchy_from_r(rsum, z);
                }
            }
            (*anchors)[z.imag()] = Anchor{z, w};
            return w;
        }};
    const auto s = dist::solve_support(p);
    const double w = s.b - s.a;
    out.grid_x.resize(static_cast<std::size_t>(density_points));
    for (int i = 0; i < density_points; ++i)
        out.grid_x[static_cast<std::size_t>(i)] =
            s.a + w * (0.05 + 0.9 * i / (density_points - 1.0));
    const auto est = tf::stieltjes_invert(g, out.grid_x);
    out.route_density = est.values;
    out.closed_density.resize(out.grid_x.size());
    double d_sup = 0.0;
    for (std::size_t i = 0; i < out.grid_x.size(); ++i) {
        out.closed_density[i] = dist::fgig_density(p, s, out.grid_x[i]);
        d_sup = std::max(d_sup, std::abs(out.closed_density[i] - out.route_density[i]));
    }
    out.report.checks.push_back(resid_row("density_route_sup", d_sup, 1e-4));

    out.report.wall_ms = elapsed_ms(t0);
    return out;
}

InverseResult run_inverse_check(const dist::FreeGigParams& p, int grid_points) {
    dist::validate(p);
    if (grid_points < 2) throw DomainError("run_inverse_check: grid too small");
    const auto t0 = Clock::now();

    const dist::FreeGigParams q = dist::invert_params(p);
    const auto sp = dist::solve_support(p);
    const auto sq = dist::solve_support(q);

    InverseResult out;
    out.report.experiment = "inverse_check";
    out.report.params = {{"lambda", p.lambda}, {"alpha", p.alpha}, {"beta", p.beta}};

    // The supports must be exact reciprocals of one another.
    const double map_err =
        std::max(std::abs(sq.a - 1.0 / sp.b), std::abs(sq.b - 1.0 / sp.a));
    out.report.checks.push_back(resid_row("support_map", map_err, 1e-8));

    const double w = sq.b - sq.a;
    out.grid_y.resize(static_cast<std::size_t>(grid_points));
    out.lhs.resize(out.grid_y.size());
    out.rhs.resize(out.grid_y.size());
    double sup = 0.0;
    for (int i = 0; i < grid_points; ++i) {
        const double y = sq.a + w * (i + 0.5) / grid_points;
        out.grid_y[static_cast<std::size_t>(i)] = y;
        const double lhs = dist::fgig_density(p, sp, 1.0 / y) / (y * y);
        const double rhs = dist::fgig_density(q, sq, y);
        out.lhs[static_cast<std::size_t>(i)] = lhs;
        out.rhs[static_cast<std::size_t>(i)] = rhs;
        sup = std::max(sup, std::abs(lhs - rhs));
    }
    out.report.checks.push_back(resid_row("inverse_density_sup", sup, 1e-8));

    out.report.wall_ms = elapsed_ms(t0);
    return out;
}

RegressionResult run_regression_check(const dist::FreeGigParams& p, int order) {
    dist::validate(p);
    if (!(p.lambda > 1.0))
        throw DomainError("run_regression_check: lambda must exceed 1");
    if (order < 1 || order > 8)
        throw DomainError("run_regression_check: order must lie in [1,8]");
    const auto t0 = Clock::now();
    const int nmax = order + 2; // delta rows reach index order+2

    RegressionResult out;
    out.report.experiment = "regression_check";
    out.report.params = {
        {"lambda", p.lambda}, {"alpha", p.alpha}, {"beta", p.beta}, {"order", double(order)}};

    const RegressionConstants k = regression_constants(p);

    // Moment data for the sum law S and the summand laws.
    out.alpha_n = fgig_moment_table(p, nmax);
    const double alpha_m1_quad = dist::fgig_moment(p, -1);
    const dist::FreeGigParams px{-p.lambda, p.alpha, p.beta};
    const dist::MarchenkoPasturParams py{p.lambda, 1.0 / p.alpha};

    // Mixed-inverse cumulant series of X and Y feeding the two compositions
    // B = A * C_X(zA), D = A * C_Y(zA).
    const std::vector<double> xm_all = fgig_moment_table(px, nmax);
    const std::vector<double> xm(xm_all.begin() + 1, xm_all.end());
    const std::vector<double> rx = nc::cumulants_from_moments(xm, nmax);
    const double c1x = dist::fgig_moment(px, -1);
    const std::vector<double> cx = nc::mixed_inverse_cumulants(c1x, rx, nmax + 1);

    const std::vector<double> ry = dist::mp_cumulants(py, nmax);
    const double c1y = dist::mp_moment(py, -1);
    const std::vector<double> cy = nc::mixed_inverse_cumulants(c1y, ry, nmax + 1);

    const tf::TruncatedSeries A{out.alpha_n};
    const tf::TruncatedSeries B = tf::series_compose_AC(A, tf::TruncatedSeries{cx}, order);
    const tf::TruncatedSeries D = tf::series_compose_AC(A, tf::TruncatedSeries{cy}, nmax);
    out.beta_n = B.c;
    out.delta_n = D.c;

    const auto am = [&](int n) {
        return n < 0 ? alpha_m1_quad : out.alpha_n[static_cast<std::size_t>(n)];
    };

    double rec_beta = 0.0;
    for (int n = 0; n <= order; ++n) {
        const double res = B.c[static_cast<std::size_t>(n)] - am(n - 1) - k.c * am(n);
        rec_beta = std::max(rec_beta, std::abs(res) / std::max(1.0, std::abs(k.c * am(n))));
    }
    out.report.checks.push_back(resid_row("recursion_beta_sup", rec_beta, 1e-6));

    double rec_delta = 0.0;
    for (int n = 0; n <= order; ++n) {
        const double res = D.c[static_cast<std::size_t>(n + 2)] - am(n + 1) - k.d * am(n);
        rec_delta = std::max(rec_delta, std::abs(res) / std::max(1.0, std::abs(am(n + 1))));
    }
    out.report.checks.push_back(resid_row("recursion_delta_sup", rec_delta, 1e-6));

    out.report.checks.push_back(
        resid_row("anchor_beta0", std::abs(B.c[0] - (k.c + k.alpha_m1)), 1e-8));
    out.report.checks.push_back(
        resid_row("anchor_delta1", std::abs(D.c[1] - (k.d * k.alpha_m1 + 1.0)), 1e-8));
    out.report.checks.push_back(resid_row("anchor_delta0", std::abs(D.c[0] - k.delta0), 1e-8));
    out.report.checks.push_back(
        resid_row("anchor_alpha_m1", std::abs(alpha_m1_quad - k.alpha_m1), 1e-8));

    // The limit law of V ties back to the regression constants exactly:
    // phi(V) = c and phi(V^-1) = d.
    const dist::MarchenkoPasturParams pv{p.lambda, 1.0 / p.beta};
    out.report.checks.push_back(
        resid_row("v_mean_equals_c", std::abs(dist::mp_moment(pv, 1) - k.c), 1e-8));
    out.report.checks.push_back(
        resid_row("v_invmean_equals_d", std::abs(dist::mp_moment(pv, -1) - k.d), 1e-8));

    // Quadratic functional equation satisfied by the quadrature moment
    // series, coefficient by coefficient up to z^nmax.
    const double cd = k.c * k.d;
    tf::TruncatedSeries A2 = tf::mul(A, A, nmax);
    double qres = 0.0;
    for (int n = 0; n <= nmax; ++n) {
        double r = -k.delta0 * A.c[static_cast<std::size_t>(n)];
        if (n == 0) r += k.delta0;
        if (n == 1) r += k.d * k.alpha_m1;
        if (n >= 1) {
            r += (cd - 1.0) * A2.c[static_cast<std::size_t>(n - 1)];
            r += A.c[static_cast<std::size_t>(n - 1)];
        }
        if (n >= 2) r += k.d * A.c[static_cast<std::size_t>(n - 2)];
        qres = std::max(qres, std::abs(r) / std::max(1.0, k.delta0 * std::abs(am(n))));
    }
    out.report.checks.push_back(resid_row("quadratic_residual_sup", qres, 1e-8));

    // (lambda, alpha, beta) -> (c, d, delta0) -> back must close exactly.
    const dist::FreeGigParams q = characterization_params(k.c, k.d, k.delta0);
    const double rt = std::max({std::abs(q.lambda - p.lambda) / std::max(1.0, p.lambda),
                                std::abs(q.alpha - p.alpha) / std::max(1.0, p.alpha),
                                std::abs(q.beta - p.beta) / std::max(1.0, p.beta)});
    out.report.checks.push_back(resid_row("map_round_trip", rt, 1e-14));

    out.report.wall_ms = elapsed_ms(t0);
    return out;
}

namespace {

complex quadratic_g_root(double cd, double d, double delta0, double am1, complex z,
                         complex near) {
    const complex a = (cd - 1.0) * z * z;
    const complex b = d + z - delta0 * z * z;
    const complex c = d * am1 + delta0 * z;
    const complex s = std::sqrt(b * b - 4.0 * a * c);
    const complex r1 = (-b + s) / (2.0 * a);
    const complex r2 = (-b - s) / (2.0 * a);
    return std::abs(r1 - near) <= std::abs(r2 - near) ? r1 : r2;
}

// Cauchy transform of the sum law straight from the regression constants:
// the quadratic (cd-1) z^2 G^2 + (d + z - delta0 z^2) G + (d am1 + delta0 z)
// has two roots; the physical one is picked at a far-away anchor (where
// G ~ 1/z) and continued down to z.
complex quadratic_g(double cd, double d, double delta0, double am1, complex z) {
    const complex z0 = complex(0.0, 8.0 * (1.0 + std::abs(z)));
    complex g = quadratic_g_root(cd, d, delta0, am1, z0, 1.0 / z0);
    const int steps = 256;
    for (int t = 1; t <= steps; ++t) {
        const complex zt = z0 + (z - z0) * (double(t) / steps);
        g = quadratic_g_root(cd, d, delta0, am1, zt, g);
    }
    return g;
}

} // namespace

QuadraticResult run_quadratic_A_check(const dist::FreeGigParams& p, int order) {
    dist::validate(p);
    if (!(p.lambda > 1.0))
        throw DomainError("run_quadratic_A_check: lambda must exceed 1");
    if (order < 1 || order > 10)
        throw DomainError("run_quadratic_A_check: order must lie in [1,10]");
    const auto t0 = Clock::now();

    QuadraticResult out;
    out.report.experiment = "quadratic_A_check";
    out.report.params = {
        {"lambda", p.lambda}, {"alpha", p.alpha}, {"beta", p.beta}, {"order", double(order)}};

    const RegressionConstants k = regression_constants(p);
    const tf::TruncatedSeries A =
        tf::quadratic_A_solver(k.c * k.d, k.d, k.delta0, k.alpha_m1, order);
    out.solver_coeffs = A.c;
    out.moment_coeffs = fgig_moment_table(p, order);

    double coeff_sup = 0.0;
    for (int n = 0; n <= order; ++n) {
        const double m = out.moment_coeffs[static_cast<std::size_t>(n)];
        coeff_sup = std::max(coeff_sup, std::abs(A.c[static_cast<std::size_t>(n)] - m) /
                                            std::max(1.0, std::abs(m)));
    }
    out.report.checks.push_back(resid_row("series_coeff_sup", coeff_sup, 1e-8));

    // Closed-form Cauchy transform from the same quadratic vs the direct one.
    const auto s = dist::solve_support(p);
    double g_sup = 0.0;
    for (int j = 0; j < 10; ++j) {
        const complex z(-1.5 + 0.5 * j, 1.0 + 0.15 * (j % 3));
        const complex gq = quadratic_g(k.c * k.d, k.d, k.delta0, k.alpha_m1, z);
        g_sup = std::max(g_sup, std::abs(gq - dist::fgig_cauchy(p, s, z)));
    }
    out.report.checks.push_back(resid_row("cauchy_closed_form_sup", g_sup, 1e-7));

    out.report.wall_ms = elapsed_ms(t0);
    return out;
}

MatrixMyResult run_matrix_my(const dist::FreeGigParams& p, int n, int reps, std::uint64_t seed,
                             bool exploratory) {
    dist::validate(p);
    if (!exploratory && !(p.lambda > 1.0))
        throw DomainError("run_matrix_my: lambda must exceed 1 (or pass exploratory)");
    if (exploratory && !(p.lambda > 0.0 && p.lambda <= 1.0))
        throw DomainError("run_matrix_my: exploratory mode covers lambda in (0,1]");
    if (n < 8) throw DomainError("run_matrix_my: dimension too small");
    if (reps < 1) throw DomainError("run_matrix_my: need at least one replicate");
    const auto t0 = Clock::now();

    MatrixMyResult out;
    out.n = n;
    out.trend_n = exploratory ? 0 : std::max(16, n / 4);
    out.report.experiment = "matrix_my";
    out.report.exploratory = exploratory;
    out.report.seed = seed;
    out.report.params = {{"lambda", p.lambda}, {"alpha", p.alpha},      {"beta", p.beta},
                         {"n", double(n)},     {"reps", double(reps)}, {"trend_n", double(out.trend_n)}};

    const dist::FreeGigParams px{-p.lambda, p.alpha, p.beta}; // law of X
    const dist::FreeGigParams pu{-p.lambda, p.beta, p.alpha}; // limit of U
    const dist::MarchenkoPasturParams pv{p.lambda, 1.0 / p.beta}; // limit of V
    const auto su = dist::solve_support(pu);
    const auto u_cdf = [&pu, &su](double x) { return dist::fgig_cdf(pu, su, x); };
    const auto v_cdf = [&pv](double x) { return dist::mp_cdf(pv, x); };

    // One replicate: draw (X, Y) from one child stream, form the pair
    // transform, and score it.  Conditioning failures exclude the replicate.
    const auto one = [&](int nn, std::uint64_t stream_index, MatrixMyReplicate& rec,
                         std::vector<double>* eu, std::vector<double>* ev) {
        RngStream st = RngStream::child(seed, stream_index);
        try {
            const rmt::HermitianSample xs = rmt::sample_fgig_matrix(nn, px, st);
            rmt::HermitianSample ys;
            const int dof = std::max(1, static_cast<int>(std::llround(p.lambda * nn)));
            if (dof >= nn) {
                ys = rmt::sample_wishart(nn, dof, p.alpha * nn, st);
            } else {
                // Rank-deficient Wishart for the exploratory regime; the
                // positive-definite sampler refuses dof < n by contract.
                const rmt::Matrix g = rmt::sample_ginibre(nn, dof, st);
                ys.n = nn;
                ys.entries = (g * g.adjoint()) / (p.alpha * nn);
                ys.entries = 0.5 * (ys.entries + rmt::Matrix(ys.entries.adjoint()));
                ys.ensemble = "wishart_rank_deficient";
                ys.seed = stream_index;
            }
            const rmt::MyPair uv = rmt::my_transform(xs, ys);
            rec.ks_u = rmt::ks_distance(rmt::esd(uv.u), u_cdf);
            rec.ks_v = rmt::ks_distance(rmt::esd(uv.v), v_cdf);
            const rmt::FreenessStats fs =
                rmt::freeness_statistics_single(uv.u.entries, uv.v.entries);
            rec.kappa2 = fs.kappa2;
            rec.alt4 = fs.alt4;
            rec.hua = exploratory ? 0.0 : rmt::hua_residual(xs, ys);
            if (eu) *eu = rmt::esd(uv.u).eigenvalues;
            if (ev) *ev = rmt::esd(uv.v).eigenvalues;
        } catch (const ConditioningError&) {
            rec.excluded = true;
        }
        rec.index = static_cast<int>(stream_index);
    };

    out.replicates.resize(static_cast<std::size_t>(reps));
    std::vector<std::vector<double>> eus(static_cast<std::size_t>(reps));
    std::vector<std::vector<double>> evs(static_cast<std::size_t>(reps));
    parallel_for(static_cast<std::size_t>(reps), [&](std::size_t i) {
        one(n, i, out.replicates[i], &eus[i], &evs[i]);
    });

    std::vector<double> ksu, ksv, k2, a4, hua;
    int excluded = 0;
    for (const auto& r : out.replicates) {
        if (r.excluded) {
            ++excluded;
            continue;
        }
        ksu.push_back(r.ks_u);
        ksv.push_back(r.ks_v);
        k2.push_back(r.kappa2);
        a4.push_back(r.alt4);
        hua.push_back(r.hua);
    }
    if (ksu.empty()) throw Error("run_matrix_my: every replicate was excluded");
    for (std::size_t i = 0; i < eus.size(); ++i) {
        if (out.replicates[i].excluded) continue;
        out.esd_u_pooled.insert(out.esd_u_pooled.end(), eus[i].begin(), eus[i].end());
        out.esd_v_pooled.insert(out.esd_v_pooled.end(), evs[i].begin(), evs[i].end());
    }
    std::sort(out.esd_u_pooled.begin(), out.esd_u_pooled.end());
    std::sort(out.esd_v_pooled.begin(), out.esd_v_pooled.end());

    const double mean_k2 =
        std::accumulate(k2.begin(), k2.end(), 0.0) / static_cast<double>(k2.size());
    const double mean_a4 =
        std::accumulate(a4.begin(), a4.end(), 0.0) / static_cast<double>(a4.size());

    auto& checks = out.report.checks;
    if (exploratory) {
        checks.push_back(info_row("ks_u_median", median(ksu)));
        checks.push_back(info_row("ks_v_median", median(ksv)));
        checks.push_back(info_row("kappa2_abs_mean", std::abs(mean_k2)));
        checks.push_back(info_row("alt4_abs_mean", std::abs(mean_a4)));
        checks.push_back(info_row("excluded_replicates", double(excluded)));
        out.report.wall_ms = elapsed_ms(t0);
        return out;
    }

    checks.push_back(resid_row("ks_u_median", median(ksu), 0.05));
    checks.push_back(resid_row("ks_v_median", median(ksv), 0.05));
    checks.push_back(resid_row("kappa2_abs_mean", std::abs(mean_k2), 0.02));
    checks.push_back(resid_row("alt4_abs_mean", std::abs(mean_a4), 0.02));
    checks.push_back(
        resid_row("hua_max", *std::max_element(hua.begin(), hua.end()), 1e-9));
    checks.push_back(CheckRow{"excluded_replicates", double(excluded), 0.0, excluded == 0});

    // Convergence trend: the same statistics at a quarter of the dimension
    // (fresh streams) must dominate the full-dimension KS medians.
    std::vector<MatrixMyReplicate> trend(static_cast<std::size_t>(reps));
    parallel_for(static_cast<std::size_t>(reps), [&](std::size_t i) {
        one(out.trend_n, 1000000 + i, trend[i], nullptr, nullptr);
    });
    std::vector<double> tks_u, tks_v;
    for (const auto& r : trend) {
        if (r.excluded) continue;
        tks_u.push_back(r.ks_u);
        tks_v.push_back(r.ks_v);
    }
    if (tks_u.empty()) throw Error("run_matrix_my: every trend replicate was excluded");
    const double du = median(ksu) - median(tks_u);
    const double dv = median(ksv) - median(tks_v);
    checks.push_back(CheckRow{"ks_u_trend_delta", du, 0.0, du < 0.0});
    checks.push_back(CheckRow{"ks_v_trend_delta", dv, 0.0, dv < 0.0});

    out.report.wall_ms = elapsed_ms(t0);
    return out;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    if (count == 0) return;
    const unsigned hw = std::thread::hardware_concurrency();
    const std::size_t workers = std::min<std::size_t>(count, hw ? hw : 2);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex err_mtx;
    std::exception_ptr err;
    const auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                const std::lock_guard<std::mutex> lk(err_mtx);
                if (!err) err = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

} // namespace fgig::exp
