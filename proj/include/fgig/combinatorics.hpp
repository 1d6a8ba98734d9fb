#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace fgig::nc {

// Enumeration ceiling; Catalan growth makes larger n a memory hazard.
inline constexpr int kMaxN = 14;

// Partition of {1,..,n} into disjoint nonempty blocks.  Blocks and the
// elements inside each block are sorted ascending; blocks are ordered by
// their least element.
struct SetPartition {
    int n = 0;
    std::vector<std::vector<int>> blocks;
};

// Crossing test: blocks B, B' cross iff positions i1 < j1 < i2 < j2 exist
// with i1, i2 in B and j1, j2 in B'.
bool is_noncrossing(const SetPartition& p);

// Exact Catalan number, 0 <= n <= kMaxN.
std::uint64_t catalan(int n);

// All non-crossing partitions of {1,..,n}, built once and cached per n.
// The returned vector is immutable for the lifetime of the program.
const std::vector<SetPartition>& enumerate_nc(int n);

// Sequences are 1-based in meaning: v[k-1] holds the k-th entry.
// m_k = sum over NC(k) of prod_B r_{|B|}.
std::vector<double> moments_from_cumulants(const std::vector<double>& r, int order);
// Inverse of the above by subtracting all non-maximal partitions.
std::vector<double> cumulants_from_moments(const std::vector<double>& m, int order);

// Joint moment callable for the fixed tuple (V^-1, V, V, ...):
// returns phi(V^-1 V^k) when has_inverse, else phi(V^k); phi(V^0) = 1.
using JointMomentFn = std::function<double(bool has_inverse, int v_count)>;

// n-th free cumulant with the inverse in the first slot, computed by the
// defining moment-cumulant recursion over NC(n).  Reference oracle; cost
// grows with Catalan(n).
double mixed_cumulant_oracle(const JointMomentFn& joint, int n);

// C_n = R_n(V^-1, V, .., V) from the generating identity
//   C(z) (1 + z r(z)) = z + C_1,  C(z) = sum_i C_i z^{i-1},
// i.e. C_1 = c1, C_2 = 1 - C_1 R_1, C_n = -sum_{j=1}^{n-1} C_{n-j} R_j (n >= 3).
std::vector<double> mixed_inverse_cumulants(double c1, const std::vector<double>& r, int order);

// beta_n = sum_{i=1}^{n+1} C_i sum_{k_1+..+k_i = n+1-i} m_{k_1} .. m_{k_i},
// literal nested sum with m_0 = 1.
double bls_expand(const std::vector<double>& c, const std::vector<double>& m, int n);

} // namespace fgig::nc
