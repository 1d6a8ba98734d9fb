#include "fgig/rmt.hpp"

#include <algorithm>
#include <cmath>

#include "fgig/errors.hpp"

namespace fgig::rmt {

namespace {

Matrix hermitize(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

Eigen::SelfAdjointEigenSolver<Matrix> eigensolve(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    if (es.info() != Eigen::Success)
        throw Error("symmetric eigensolver failed to converge");
    return es;
}

} // namespace

Matrix sample_ginibre(int rows, int cols, RngStream& stream) {
    if (rows < 1 || cols < 1) throw DomainError("sample_ginibre: dimensions must be positive");
    Matrix g(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) g(i, j) = stream.cnormal();
    return g;
}

Matrix sample_haar_unitary(int n, RngStream& stream) {
    for (int attempt = 0; attempt < 2; ++attempt) {
        const Matrix g = sample_ginibre(n, n, stream);
        Eigen::HouseholderQR<Matrix> qr(g);
        const Matrix r = qr.matrixQR().template triangularView<Eigen::Upper>();
        bool full_rank = true;
        for (int i = 0; i < n; ++i)
            if (std::abs(r(i, i)) < 1e-12) full_rank = false;
        if (!full_rank) continue; // probability-zero event; one retry
        Matrix q = qr.householderQ() * Matrix::Identity(n, n);
        for (int i = 0; i < n; ++i) q.col(i) *= r(i, i) / std::abs(r(i, i));
        return q;
    }
    throw DomainError("sample_haar_unitary: rank-deficient Gaussian draw twice in a row");
}

HermitianSample sample_wishart(int n, int dof, double alpha_scale, RngStream& stream) {
    if (dof < n) throw DomainError("sample_wishart: dof must be at least the dimension");
    if (!(alpha_scale > 0.0)) throw DomainError("sample_wishart: alpha_scale must be positive");
    const Matrix g = sample_ginibre(n, dof, stream);
    HermitianSample out;
    out.n = n;
    out.entries = hermitize(g * g.adjoint() / alpha_scale);
    out.ensemble = "wishart";
    return out;
}

HermitianSample sample_fgig_matrix(int n, const dist::FreeGigParams& p, RngStream& stream) {
    if (n < 1) throw DomainError("sample_fgig_matrix: dimension must be positive");
    const std::vector<double> spec = dist::sample_spectrum(p, static_cast<std::size_t>(n), stream);
    const Matrix u = sample_haar_unitary(n, stream);
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i) d(i) = spec[static_cast<std::size_t>(i)];
    HermitianSample out;
    out.n = n;
    out.entries = hermitize(u * d.cast<std::complex<double>>().asDiagonal() * u.adjoint());
    out.ensemble = "fgig";
    return out;
}

Matrix invert_hermitian(const Matrix& m) {
    const auto es = eigensolve(m);
    const Eigen::VectorXd ev = es.eigenvalues();
    double lo = ev.cwiseAbs().minCoeff();
    double hi = ev.cwiseAbs().maxCoeff();
    if (!(lo > 0.0) || hi / lo > 1e12)
        throw ConditioningError("invert_hermitian: condition number beyond 1e12");
    return es.eigenvectors() * ev.cwiseInverse().cast<std::complex<double>>().asDiagonal() *
           es.eigenvectors().adjoint();
}

MyPair my_transform(const HermitianSample& x, const HermitianSample& y) {
    if (x.n != y.n) throw DomainError("my_transform: dimension mismatch");
    const Matrix sum_inv = invert_hermitian(x.entries + y.entries);
    const Matrix x_inv = invert_hermitian(x.entries);
    MyPair out;
    out.u.n = x.n;
    out.u.entries = hermitize(sum_inv);
    out.u.ensemble = "my_u";
    out.u.seed = x.seed;
    out.v.n = x.n;
    out.v.entries = hermitize(x_inv - sum_inv);
    out.v.ensemble = "my_v";
    out.v.seed = x.seed;
    return out;
}

double operator_norm(const Matrix& m) {
    const auto es = eigensolve(hermitize(m.adjoint() * m));
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

double hua_residual(const HermitianSample& x, const HermitianSample& y) {
    if (x.n != y.n) throw DomainError("hua_residual: dimension mismatch");
    const Matrix& xm = x.entries;
    const Matrix y_inv = invert_hermitian(y.entries);
    const Matrix x_inv = invert_hermitian(xm);
    const Matrix sum_inv = invert_hermitian(xm + y.entries);
    const Matrix lhs = (xm + xm * y_inv * xm) * (x_inv - sum_inv);
    return operator_norm(lhs - Matrix::Identity(x.n, x.n));
}

double trace_moment(const std::vector<const Matrix*>& word) {
    if (word.empty()) throw DomainError("trace_moment: empty word");
    const long n = (*word[0]).rows();
    for (const Matrix* m : word)
        if (m->rows() != n || m->cols() != n)
            throw DomainError("trace_moment: dimension mismatch in the word");
    Matrix prod = *word[0];
    for (std::size_t i = 1; i < word.size(); ++i) prod = prod * (*word[i]);
    return prod.trace().real() / static_cast<double>(n);
}

EmpiricalSpectralDistribution esd(const HermitianSample& m) {
    const auto es = eigensolve(m.entries);
    EmpiricalSpectralDistribution out;
    out.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + m.n);
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
    return out;
}

double ks_distance(const EmpiricalSpectralDistribution& e,
                   const std::function<double(double)>& cdf) {
    const std::size_t n = e.eigenvalues.size();
    if (n == 0) throw DomainError("ks_distance: empty spectrum");
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = cdf(e.eigenvalues[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i + 1) / n));
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    }
    return d;
}

FreenessStats freeness_statistics_single(const Matrix& u, const Matrix& v) {
    const long n = u.rows();
    if (v.rows() != n || u.cols() != n || v.cols() != n)
        throw DomainError("freeness_statistics_single: dimension mismatch");
    auto phi = [n](const Matrix& m) { return m.trace().real() / static_cast<double>(n); };
    FreenessStats s;
    const double pu = phi(u), pv = phi(v);
    s.kappa2 = phi(u * v) - pu * pv;
    const Matrix uc = u - pu * Matrix::Identity(n, n);
    const Matrix vc = v - pv * Matrix::Identity(n, n);
    s.alt4 = phi(uc * vc * uc * vc);
    return s;
}

FreenessReport freeness_statistics(const PairSampler& sampler, int n, int reps,
                                   std::uint64_t master) {
    if (reps < 1) throw DomainError("freeness_statistics: need at least one replicate");
    FreenessReport rep;
    rep.n = n;
    rep.reps = reps;
    for (int i = 0; i < reps; ++i) {
        RngStream stream = RngStream::child(master, static_cast<std::uint64_t>(i));
        const auto [u, v] = sampler(stream);
        const FreenessStats s = freeness_statistics_single(u, v);
        rep.kappa2_reps.push_back(s.kappa2);
        rep.alt4_reps.push_back(s.alt4);
    }
    auto mean_se = [&](const std::vector<double>& xs, double& mean, double& se) {
        double m = 0.0;
        for (double x : xs) m += x;
        m /= static_cast<double>(xs.size());
        double var = 0.0;
        for (double x : xs) var += (x - m) * (x - m);
        var = (xs.size() > 1) ? var / static_cast<double>(xs.size() - 1) : 0.0;
        mean = m;
        se = std::sqrt(var / static_cast<double>(xs.size()));
    };
    mean_se(rep.kappa2_reps, rep.kappa2_mean, rep.kappa2_se);
    mean_se(rep.alt4_reps, rep.alt4_mean, rep.alt4_se);
    return rep;
}

} // namespace fgig::rmt
