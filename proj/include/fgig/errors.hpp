#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace fgig {

// Base class for every failure raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid parameters, or evaluation outside a documented domain.
struct DomainError : Error {
    using Error::Error;
};

// A root finder failed to converge; carries the last iterate.
struct SolverError : Error {
    double last_iterate;
    SolverError(const std::string& what, double last) : Error(what), last_iterate(last) {}
};

// Quadrature failed to stabilize under node doubling.
struct QuadratureError : Error {
    using Error::Error;
};

// Evaluation too close to a pole or branch point.
struct SingularityError : Error {
    using Error::Error;
};

// Newton continuation for an implicit transform equation diverged.
struct ContinuationError : Error {
    std::complex<double> last_iterate;
    ContinuationError(const std::string& what, std::complex<double> last)
        : Error(what), last_iterate(last) {}
};

// Stieltjes boundary extrapolation disagreed beyond tolerance.
struct InversionUnstableError : Error {
    using Error::Error;
};

// Matrix conditioning exceeded the trustworthy range.
struct ConditioningError : Error {
    using Error::Error;
};

// A documented size cap was exceeded.
struct CapacityError : Error {
    using Error::Error;
};

// Bad command-line arguments or config file.
struct ConfigError : Error {
    using Error::Error;
};

// Filesystem failure while writing artifacts.
struct IoError : Error {
    using Error::Error;
};

} // namespace fgig
