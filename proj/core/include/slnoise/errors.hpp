// errors.hpp: Exception types raised by the slnoise library

#pragma once

#include <stdexcept>
#include <string>

namespace sln {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Pointwise evaluation requested at the logarithmic singularity |omega| = omega_c.
struct SingularPoint : Error {
    using Error::Error;
};

// Numerical symmetrisation of a kernel table had to correct more than the tolerance.
struct AsymmetryExceeded : Error {
    using Error::Error;
};

// Bare spectral division by sqrt(K_etaeta) hit a zero bin (gamma = 0).
struct DivisionByZeroSpectrum : Error {
    using Error::Error;
};

// Filter set and time grid do not describe the same frequency grid.
struct GridMismatch : Error {
    using Error::Error;
};

struct InsufficientSample : Error {
    using Error::Error;
};

// Dynamical rescaling requested for a scheme without cross-correlative components.
struct ZeroComponent : Error {
    using Error::Error;
};

struct InvalidArgument : Error {
    using Error::Error;
};

} // namespace sln
