#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "fgig/distributions.hpp"
#include "fgig/rng.hpp"

namespace fgig::rmt {

using Matrix = Eigen::MatrixXcd;

struct HermitianSample {
    int n = 0;
    Matrix entries;
    std::string ensemble;
    std::uint64_t seed = 0;
};

struct EmpiricalSpectralDistribution {
    std::vector<double> eigenvalues; // sorted ascending
};

struct FreenessStats {
    double kappa2 = 0.0; // phi(UV) - phi(U)phi(V)
    double alt4 = 0.0;   // phi of the centered alternating word UVUV
};

struct FreenessReport {
    int n = 0;
    int reps = 0;
    double kappa2_mean = 0.0, kappa2_se = 0.0;
    double alt4_mean = 0.0, alt4_se = 0.0;
    std::vector<double> kappa2_reps;
    std::vector<double> alt4_reps;
};

// i.i.d. entries with independent N(0, 1/2) real and imaginary parts
// (unit complex variance); row-major fill order fixes the draw sequence.
Matrix sample_ginibre(int rows, int cols, RngStream& stream);

// QR of a Ginibre draw with the R-diagonal phases absorbed into Q, making
// the factor Haar distributed.
Matrix sample_haar_unitary(int n, RngStream& stream);

// Y = G G* / alpha_scale with G an n x dof Ginibre block; dof >= n keeps it
// positive definite.  ESD converges to MP(rate dof/n, jump n/alpha_scale).
HermitianSample sample_wishart(int n, int dof, double alpha_scale, RngStream& stream);

// Haar-conjugated diagonal of n i.i.d. draws from the law's spectrum; the
// matrix is unitarily invariant with exactly the drawn eigenvalues.
HermitianSample sample_fgig_matrix(int n, const dist::FreeGigParams& p, RngStream& stream);

// Hermitian inverse through a symmetric eigendecomposition; a condition
// number beyond 1e12 raises ConditioningError.
Matrix invert_hermitian(const Matrix& m);

struct MyPair {
    HermitianSample u; // (X+Y)^{-1}
    HermitianSample v; // X^{-1} - (X+Y)^{-1}
};

MyPair my_transform(const HermitianSample& x, const HermitianSample& y);

// Operator-norm residual of (X + X Y^{-1} X)(X^{-1} - (X+Y)^{-1}) - I,
// the identity that forces V to be invertible with positive inverse.
double hua_residual(const HermitianSample& x, const HermitianSample& y);

double operator_norm(const Matrix& m);

// (1/n) Re Tr of the product of the referenced matrices, left to right.
double trace_moment(const std::vector<const Matrix*>& word);

EmpiricalSpectralDistribution esd(const HermitianSample& m);

// Two-sided sup distance between the empirical CDF and `cdf`.
double ks_distance(const EmpiricalSpectralDistribution& e,
                   const std::function<double(double)>& cdf);

FreenessStats freeness_statistics_single(const Matrix& u, const Matrix& v);

// Replicated freeness diagnostics; replicate i uses the child stream of
// (master, i) so the estimate is reproducible and order-independent.
using PairSampler = std::function<std::pair<Matrix, Matrix>(RngStream&)>;
FreenessReport freeness_statistics(const PairSampler& sampler, int n, int reps,
                                   std::uint64_t master);

} // namespace fgig::rmt
