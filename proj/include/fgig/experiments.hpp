#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "fgig/distributions.hpp"

namespace fgig::exp {

using complex = std::complex<double>;

// Constants of the two conditional-moment regressions: phi(V|U) = c,
// phi(V^-1|U) = d, together with delta0 = phi(Y^-1) and
// alpha_m1 = phi((X+Y)^-1).
struct RegressionConstants {
    double c = 0.0;
    double d = 0.0;
    double delta0 = 0.0;
    double alpha_m1 = 0.0;
};

struct CheckRow {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct ExperimentReport {
    std::string experiment;
    std::vector<std::pair<std::string, double>> params;
    std::vector<CheckRow> checks;
    std::uint64_t seed = 0;
    double wall_ms = 0.0;
    bool exploratory = false;
    bool passed() const;
};

// (c, d, delta0) -> (lambda, alpha, beta) via
//   lambda = cd/(cd-1), alpha = delta0/(cd-1), beta = d/(cd-1);
// requires cd > 1 (equivalently lambda > 1), d > 0, delta0 > 0.
dist::FreeGigParams characterization_params(double c, double d, double delta0);

// Inverse map c = lambda/beta, d = beta/(lambda-1), delta0 = alpha/(lambda-1),
// alpha_m1 = -gamma_const; requires lambda > 1.
RegressionConstants regression_constants(const dist::FreeGigParams& p);

// Default grid for R-transform identities: circles |z| in
// {0.0125, 0.025, 0.0375, 0.05} with 8 angles each, plus z = 0.
std::vector<complex> default_r_grid();

struct ConvolutionResult {
    ExperimentReport report;
    std::vector<complex> r_grid;
    std::vector<double> r_resid;
    std::vector<double> grid_x;
    std::vector<double> closed_density;
    std::vector<double> route_density;
};

// Checks that the law splits as a free sum: the R-transform of
// mu(lambda,alpha,beta) equals that of mu(-lambda,alpha,beta) plus
// MP(rate lambda, jump 1/alpha) on the grid, and the density rebuilt from the
// summed R-transform matches the closed-form density on an inner support grid.
ConvolutionResult run_convolution_check(const dist::FreeGigParams& p,
                                        const std::vector<complex>& r_grid,
                                        int density_points = 200);

struct InverseResult {
    ExperimentReport report;
    std::vector<double> grid_y;
    std::vector<double> lhs; // density_p(1/y)/y^2
    std::vector<double> rhs; // density of the inverse law at y
};

// Change-of-variables check of the inverse law against its closed form.
InverseResult run_inverse_check(const dist::FreeGigParams& p, int grid_points = 200);

struct RegressionResult {
    ExperimentReport report;
    std::vector<double> alpha_n; // phi((X+Y)^n), n = 0..
    std::vector<double> beta_n;  // phi(X^-1 (X+Y)^n)
    std::vector<double> delta_n; // phi(Y^-1 (X+Y)^n)
};

// Verifies the two regression recursions beta_n - alpha_{n-1} = c alpha_n and
// delta_{n+2} - alpha_{n+1} = d alpha_n for n <= order, the four anchor
// values, the quadratic satisfied by the moment series, and the parameter
// map round trip.  lambda > 1, order <= 8.
RegressionResult run_regression_check(const dist::FreeGigParams& p, int order);

struct MatrixMyReplicate {
    int index = 0;
    bool excluded = false;
    double ks_u = 0.0, ks_v = 0.0;
    double kappa2 = 0.0, alt4 = 0.0;
    double hua = 0.0;
};

struct MatrixMyResult {
    ExperimentReport report;
    int n = 0;
    int trend_n = 0;
    std::vector<MatrixMyReplicate> replicates;
    std::vector<double> esd_u_pooled;
    std::vector<double> esd_v_pooled;
};

// Finite-N Monte Carlo of the matrix pair transform: X with limiting law
// mu(-lambda,alpha,beta), Y Wishart with limiting law MP(rate lambda,
// jump 1/alpha); U = (X+Y)^-1 is compared against mu(-lambda,beta,alpha),
// V = X^-1 - (X+Y)^-1 against MP(rate lambda, jump 1/beta), plus freeness
// statistics and the algebraic pair-inverse identity per replicate, and a
// convergence trend against dimension max(16, n/4).  Normal mode requires
// lambda > 1; exploratory mode accepts 0 < lambda <= 1 (rank-deficient Y),
// reports values without pass criteria, and skips the inverse identity.
MatrixMyResult run_matrix_my(const dist::FreeGigParams& p, int n, int reps, std::uint64_t seed,
                             bool exploratory = false);

struct QuadraticResult {
    ExperimentReport report;
    std::vector<double> solver_coeffs;
    std::vector<double> moment_coeffs;
};

// The quadratic functional equation route: series solution vs quadrature
// moments (order <= 10), and its closed-form Cauchy transform vs the direct
// one at upper-half-plane points.  lambda > 1.
QuadraticResult run_quadratic_A_check(const dist::FreeGigParams& p, int order);

// Runs fn(0..count-1) on a small worker pool; results must be written to
// per-index storage by the caller.  The first exception is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

} // namespace fgig::exp
