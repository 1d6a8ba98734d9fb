#include "fgig/combinatorics.hpp"
#include "fgig/errors.hpp"

#include <algorithm>
#include <mutex>

namespace fgig::nc {

bool is_noncrossing(const SetPartition& p) {
    const auto& bl = p.blocks;
    // Two blocks cross iff their merged position sequence alternates
    // labels at least four times (a..b..a..b).
    for (std::size_t i = 0; i < bl.size(); ++i) {
        for (std::size_t j = i + 1; j < bl.size(); ++j) {
            const auto& A = bl[i];
            const auto& B = bl[j];
            std::size_t ia = 0, ib = 0;
            int runs = 0;
            int last = -1;
            while (ia < A.size() || ib < B.size()) {
                int take;
                if (ib == B.size() || (ia < A.size() && A[ia] < B[ib])) {
                    take = 0;
                    ++ia;
                } else {
                    take = 1;
                    ++ib;
                }
                if (take != last) {
                    ++runs;
                    last = take;
                }
            }
            if (runs >= 4) return false;
        }
    }
    return true;
}

std::uint64_t catalan(int n) {
    if (n < 0 || n > 30) throw DomainError("catalan: n out of range [0,30]");
    std::uint64_t c = 1;
    for (int k = 0; k < n; ++k) {
        c *= 2 * (2 * static_cast<std::uint64_t>(k) + 1);
        c /= static_cast<std::uint64_t>(k) + 2;
    }
    return c;
}

namespace {

// Append every product of per-gap sub-partitions to `out`, prefixed by the
// block containing 1.  Gaps are (offset, length) pairs; sub-partitions of a
// gap come from the already-built cache entry for that length, shifted.
void emit_products(const std::vector<std::vector<SetPartition>>& cache,
                   const std::vector<std::pair<int, int>>& gaps,
                   std::size_t gap_idx,
                   std::vector<std::vector<int>>& blocks,
                   int n,
                   std::vector<SetPartition>& out) {
    if (gap_idx == gaps.size()) {
        out.push_back(SetPartition{n, blocks});
        return;
    }
    const auto [offset, len] = gaps[gap_idx];
    for (const SetPartition& sub : cache[static_cast<std::size_t>(len)]) {
        const std::size_t mark = blocks.size();
        for (const auto& sb : sub.blocks) {
            std::vector<int> shifted;
            shifted.reserve(sb.size());
            for (int e : sb) shifted.push_back(e + offset);
            blocks.push_back(std::move(shifted));
        }
        emit_products(cache, gaps, gap_idx + 1, blocks, n, out);
        blocks.resize(mark);
    }
}

void build_size(std::vector<std::vector<SetPartition>>& cache, int m) {
    auto& out = cache[static_cast<std::size_t>(m)];
    if (m == 0) {
        out.push_back(SetPartition{0, {}});
        return;
    }
    out.reserve(catalan(m));
    // Choose which of {2..m} share the block of element 1; the rest falls
    // into the gaps between consecutive chosen elements, and each gap is
    // partitioned independently (blocks cannot straddle a gap boundary
    // without crossing the first block).
    const std::uint32_t nmask = 1u << (m - 1);
    for (std::uint32_t mask = 0; mask < nmask; ++mask) {
        std::vector<int> first{1};
        for (int j = 0; j < m - 1; ++j)
            if (mask & (1u << j)) first.push_back(j + 2);
        std::vector<std::pair<int, int>> gaps;
        for (std::size_t t = 0; t < first.size(); ++t) {
            const int lo = first[t];
            const int hi = (t + 1 < first.size()) ? first[t + 1] : m + 1;
            if (hi - lo > 1) gaps.emplace_back(lo, hi - lo - 1);
        }
        std::vector<std::vector<int>> blocks;
        blocks.push_back(std::move(first));
        emit_products(cache, gaps, 0, blocks, m, out);
    }
}

} // namespace

const std::vector<SetPartition>& enumerate_nc(int n) {
    if (n < 1 || n > kMaxN) throw DomainError("enumerate_nc: n out of range [1,14]");
    static std::mutex mu;
    static std::vector<std::vector<SetPartition>> cache(kMaxN + 1);
    std::lock_guard<std::mutex> lock(mu);
    for (int m = 0; m <= n; ++m)
        if (cache[static_cast<std::size_t>(m)].empty()) build_size(cache, m);
    return cache[static_cast<std::size_t>(n)];
}

std::vector<double> moments_from_cumulants(const std::vector<double>& r, int order) {
    if (order < 1 || order > kMaxN) throw DomainError("moments_from_cumulants: order out of range");
    std::vector<double> rr(r);
    rr.resize(static_cast<std::size_t>(order), 0.0);
    std::vector<double> m(static_cast<std::size_t>(order), 0.0);
    for (int k = 1; k <= order; ++k) {
        double acc = 0.0;
        for (const SetPartition& p : enumerate_nc(k)) {
            double prod = 1.0;
            for (const auto& b : p.blocks) prod *= rr[b.size() - 1];
            acc += prod;
        }
        m[static_cast<std::size_t>(k - 1)] = acc;
    }
    return m;
}

std::vector<double> cumulants_from_moments(const std::vector<double>& m, int order) {
    if (order < 1 || order > kMaxN) throw DomainError("cumulants_from_moments: order out of range");
    if (static_cast<int>(m.size()) < order)
        throw DomainError("cumulants_from_moments: need moments up to the requested order");
    std::vector<double> r(static_cast<std::size_t>(order), 0.0);
    r[0] = m[0];
    for (int k = 2; k <= order; ++k) {
        double rest = 0.0;
        for (const SetPartition& p : enumerate_nc(k)) {
            if (p.blocks.size() == 1) continue; // the full block carries r_k itself
            double prod = 1.0;
            for (const auto& b : p.blocks) prod *= r[b.size() - 1];
            rest += prod;
        }
        r[static_cast<std::size_t>(k - 1)] = m[static_cast<std::size_t>(k - 1)] - rest;
    }
    return r;
}

double mixed_cumulant_oracle(const JointMomentFn& joint, int n) {
    if (n < 1 || n > kMaxN) throw DomainError("mixed_cumulant_oracle: n out of range");
    // Pure cumulants of V, needed for blocks avoiding position 1.
    std::vector<double> pure_r;
    if (n >= 2) {
        std::vector<double> pure_m(static_cast<std::size_t>(n - 1));
        for (int k = 1; k < n; ++k) pure_m[static_cast<std::size_t>(k - 1)] = joint(false, k);
        pure_r = cumulants_from_moments(pure_m, n - 1);
    }
    // Peel the defining moment-cumulant relation: the order-k mixed moment
    // phi(V^-1 V^{k-1}) equals the sum over NC(k) of block products, where
    // the block through position 1 contributes a lower-order mixed cumulant.
    std::vector<double> mixed(static_cast<std::size_t>(n + 1), 0.0);
    mixed[1] = joint(true, 0);
    for (int k = 2; k <= n; ++k) {
        double rest = 0.0;
        for (const SetPartition& p : enumerate_nc(k)) {
            if (p.blocks.size() == 1) continue;
            double prod = 1.0;
            for (const auto& b : p.blocks) {
                const std::size_t s = b.size();
                prod *= (b.front() == 1) ? mixed[s] : pure_r[s - 1];
            }
            rest += prod;
        }
        mixed[static_cast<std::size_t>(k)] = joint(true, k - 1) - rest;
    }
    return mixed[static_cast<std::size_t>(n)];
}

std::vector<double> mixed_inverse_cumulants(double c1, const std::vector<double>& r, int order) {
    if (order < 1) throw DomainError("mixed_inverse_cumulants: order must be positive");
    std::vector<double> rr(r);
    rr.resize(static_cast<std::size_t>(order), 0.0);
    std::vector<double> c(static_cast<std::size_t>(order), 0.0);
    c[0] = c1;
    for (int m = 1; m < order; ++m) {
        double v = (m == 1) ? 1.0 : 0.0;
        for (int j = 1; j <= m; ++j) v -= c[static_cast<std::size_t>(m - j)] * rr[static_cast<std::size_t>(j - 1)];
        c[static_cast<std::size_t>(m)] = v;
    }
    return c;
}

namespace {

// Sum over i-tuples (k_1,..,k_i), k_j >= 0, k_1+..+k_i = total, of
// prod_j m_{k_j} with m_0 = 1.
double comp_sum(const std::vector<double>& m, int parts, int total) {
    if (parts == 0) return total == 0 ? 1.0 : 0.0;
    double acc = 0.0;
    for (int k = 0; k <= total; ++k) {
        const double mk = (k == 0) ? 1.0 : m[static_cast<std::size_t>(k - 1)];
        if (mk != 0.0) acc += mk * comp_sum(m, parts - 1, total - k);
    }
    return acc;
}

} // namespace

double bls_expand(const std::vector<double>& c, const std::vector<double>& m, int n) {
    if (n < 0) throw DomainError("bls_expand: n must be nonnegative");
    std::vector<double> cc(c);
    if (static_cast<int>(cc.size()) < n + 1) cc.resize(static_cast<std::size_t>(n + 1), 0.0);
    std::vector<double> mm(m);
    if (static_cast<int>(mm.size()) < n) mm.resize(static_cast<std::size_t>(n), 0.0);
    double beta = 0.0;
    for (int i = 1; i <= n + 1; ++i)
        beta += cc[static_cast<std::size_t>(i - 1)] * comp_sum(mm, i, n + 1 - i);
    return beta;
}

} // namespace fgig::nc
