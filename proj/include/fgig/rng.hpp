#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace fgig {

std::uint64_t splitmix64(std::uint64_t x);

// Deterministic uniform/Gaussian stream over std::mt19937_64.  The engine's
// output sequence is fully specified by the standard; the variate transforms
// are written out here because the standard library distributions are
// implementation-defined and would break byte-identical reruns.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : eng_(seed) {}

    // Stream labelled `index`, derived from `master` by a counter-based
    // splitmix64 split; distinct indices give decorrelated streams.
    static RngStream child(std::uint64_t master, std::uint64_t index);

    std::uint64_t next_u64() { return eng_(); }

    // Uniform on (0,1), endpoints excluded.
    double uniform01() { return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53; }

    // Standard normal via Box-Muller; the spare variate is buffered.
    double normal();

    // Complex Gaussian with E|z|^2 = 1.
    std::complex<double> cnormal();

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace fgig
