#pragma once

#include <stdexcept>
#include <string>

namespace mmiq {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A linear solve hit numerical rank deficiency (bad or near-reducible input).
struct SingularSystem : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

// Adaptive quadrature could not reach the requested tolerance.
struct QuadratureFailure : Error {
    using Error::Error;
};

// Adaptive ODE step size collapsed (stiff scaled system) or step budget ran out.
struct OdeToleranceFailure : Error {
    using Error::Error;
};

struct NotPsd : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct CountOverflow : Error {
    using Error::Error;
};

struct InsufficientReplications : Error {
    using Error::Error;
};

}  // namespace mmiq
