#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace fgig::tf {

using complex = std::complex<double>;

// A complex-analytic function together with the region where evaluation is
// guaranteed.  For disk domains the radius is a guarantee, not a wall:
// callables may accept points beyond it and throw only on genuine trouble
// (branch tracking failure, pole).
struct AnalyticFunction {
    enum class Domain { upper_half_plane, disk };
    Domain domain = Domain::disk;
    double radius = 0.0; // meaningful for disk domains
    std::function<complex(complex)> eval;
};

struct DensityEstimate {
    std::vector<double> grid;
    std::vector<double> values;
    double epsilon_used = 0.0;
};

// Boundary density via -(1/pi) Im G(t + i eps), extrapolated to eps = 0 by a
// quadratic fit through eps in {1e-3, 1e-4, 1e-5}.  If the quadratic and the
// linear (two smallest eps) extrapolations disagree by more than
// 1e-4 * max(1, |value|) the point is declared unstable.  Small negative
// values (above -1e-6) clamp to 0.
DensityEstimate stieltjes_invert(const AnalyticFunction& G, const std::vector<double>& grid);

// Pointwise sum of two R-transforms (free additive convolution).
AnalyticFunction free_convolve_r(const AnalyticFunction& r1, const AnalyticFunction& r2);

// Solves r(w) + 1/w = z for w (the Cauchy transform at z), Im z > 0, by
// damped Newton continued along a straight path from 8i(1+|z|) down to z with
// warm starts and adaptive segment subdivision.
complex cauchy_from_r(const AnalyticFunction& r, complex z);

// Continues a known solution pair (z_from, w_from) of the same equation along
// the straight segment to z_to; cheap when the targets are close.  Segments
// that fail to converge are subdivided as in cauchy_from_r.
complex cauchy_continue(const AnalyticFunction& r, complex z_from, complex w_from, complex z_to,
                        int base_segments = 1);

// Power series c[0] + c[1] z + ... truncated at z^order.
struct TruncatedSeries {
    std::vector<double> c;
    int order() const { return static_cast<int>(c.size()) - 1; }
};

TruncatedSeries mul(const TruncatedSeries& a, const TruncatedSeries& b, int order);

// Moment generating series A(z) = 1 + sum_n m_n z^n from the cumulant series
// r(z) = sum_n R_{n+1} z^n, through the non-crossing partition sum.
TruncatedSeries moment_series_from_r(const TruncatedSeries& r, int order);

// Truncated coefficients of A(z) * C(z A(z)).
TruncatedSeries series_compose_AC(const TruncatedSeries& A, const TruncatedSeries& C, int order);

// Unique power-series solution with A(0) = 1 of
//   (cd-1) z A^2 + (d z^2 + z - delta0) A + (z d alpha_m1 + delta0) = 0,
// computed coefficient by coefficient.
TruncatedSeries quadratic_A_solver(double cd, double d, double delta0, double alpha_m1,
                                   int order);

// Taylor coefficients c_0..c_{n-1} of f at 0 by the trapezoid rule on the
// circle |z| = radius; the radius must stay inside f's analyticity disk.
std::vector<double> taylor_from_circle(const std::function<complex(complex)>& f, double radius,
                                       int n_coeffs, int nodes = 512);

} // namespace fgig::tf
