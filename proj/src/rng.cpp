#include "fgig/rng.hpp"

#include <cmath>
#include <numbers>

namespace fgig {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

RngStream RngStream::child(std::uint64_t master, std::uint64_t index) {
    return RngStream(splitmix64(master ^ splitmix64(index + 0x1234u)));
}

double RngStream::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * std::numbers::pi * u2;
    spare_ = rad * std::sin(ang);
    has_spare_ = true;
    return rad * std::cos(ang);
}

std::complex<double> RngStream::cnormal() {
    const double inv_sqrt2 = 0.70710678118654752440;
    const double re = normal();
    const double im = normal();
    return {re * inv_sqrt2, im * inv_sqrt2};
}

} // namespace fgig
