#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace ellw {

// Base class for everything thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input outside the admissible domain (Im tau < y_min, bad theta index, ...).
struct DomainError : Error {
    using Error::Error;
};

// Argument too close to a zero lattice of the theta function involved.
struct PoleError : Error {
    PoleError(const std::string& where, int theta_index, std::complex<double> argument,
              double distance, double guard)
        : Error(where + ": argument (" + std::to_string(argument.real()) + "," +
                std::to_string(argument.imag()) + ") within " + std::to_string(distance) +
                " of a zero of theta_" + std::to_string(theta_index) +
                " (guard " + std::to_string(guard) + ")"),
          theta_index(theta_index), argument(argument), distance(distance), guard(guard) {}
    int theta_index;
    std::complex<double> argument;
    double distance;
    double guard;
};

// q-series hit the term cap without meeting the stop tolerance.
struct TruncationError : Error {
    using Error::Error;
};

// A quantity that must be real came out with a non-negligible imaginary part.
struct RealityError : Error {
    using Error::Error;
};

// Denominator (or similar) below the degeneracy threshold.
struct DegenerateError : Error {
    using Error::Error;
};

// Loewner flow ran into a pole it could not step over.
struct BlowUpError : Error {
    BlowUpError(double last_good_y, const std::string& detail)
        : Error("Loewner blow-up: last good y = " + std::to_string(last_good_y) + "; " + detail),
          last_good_y(last_good_y), detail(detail) {}
    double last_good_y;
    std::string detail;
};

// Adaptive step size fell below h_min.
struct StepSizeError : Error {
    explicit StepSizeError(double y)
        : Error("step size underflow at y = " + std::to_string(y)), y(y) {}
    double y;
};

// Root bracket does not contain a sign change and no seed was supplied.
struct NoBracketError : Error {
    using Error::Error;
};

// Iteration cap reached without convergence.
struct MaxIterError : Error {
    using Error::Error;
};

// Query outside the range covered by a trajectory or table.
struct RangeError : Error {
    using Error::Error;
};

// Rejection sampling could not find an admissible point (pole cascade).
struct PoleCascadeError : Error {
    using Error::Error;
};

// Malformed run configuration (bad schema, unknown keys, missing fields).
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace ellw
